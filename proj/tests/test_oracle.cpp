#include <doctest.h>

#include <cstdint>
#include <vector>

#include "helpers.hpp"
#include "mdflow/mot/graph.hpp"
#include "mdflow/oracle.hpp"

using namespace mdflow;
using testutil::cover_by_names;
using testutil::grid_detections;
using testutil::make_net;
using testutil::random_instance;

TEST_CASE("single chain has exactly one cover") {
  FlowNetwork net = make_net(1, 1, {"a"}, {{"s", "a", {1}}}, {{"a", "t"}});
  std::vector<PathCover> covers;
  enumerate_covers(net, [&](const PathCover& c) {
    covers.push_back(c);
    return true;
  });
  REQUIRE(covers.size() == 1);
  CHECK(compare_covers(covers[0], cover_by_names(net, {{"s", "a", "t"}})) == 0);
}

TEST_CASE("disjointness is forced when no cross edge exists") {
  FlowNetwork net = make_net(2, 2, {"a", "b"},
                             {{"s", "a", {1, 0}}, {"s", "b", {0, 1}}},
                             {{"a", "t"}, {"b", "t"}});
  std::vector<PathCover> covers;
  enumerate_covers(net, [&](const PathCover& c) {
    covers.push_back(c);
    return true;
  });
  REQUIRE(covers.size() == 1);
  CHECK(compare_covers(covers[0], cover_by_names(net, {{"s", "a", "t"},
                                                       {"s", "b", "t"}})) == 0);
}

TEST_CASE("node-count equality can be unsatisfiable") {
  // With d=1 node b can never be covered.
  FlowNetwork net = make_net(2, 1, {"a", "b"},
                             {{"s", "a", {1, 0}}, {"s", "b", {0, 1}}},
                             {{"a", "t"}, {"b", "t"}});
  int covers = 0;
  enumerate_covers(net, [&](const PathCover&) {
    ++covers;
    return true;
  });
  CHECK(covers == 0);
  CHECK(brute_force_solve(net).status == OracleStatus::Infeasible);
}

TEST_CASE("two-frame pairing picks the higher-valued matching") {
  // Features f1a=(1,0), f1b=(0,1), f2a=(0.9,0), f2b=(0,0.9); both-to-both
  // transitions. Straight pairing keeps 0.9+0.9, crossing collapses to 0.
  std::vector<mot::Detection> dets(4);
  dets[0] = {1, 0, 0, 0, 10, 10, 0, {1.0, 0.0}};
  dets[1] = {1, 1, 50, 0, 10, 10, 1, {0.0, 1.0}};
  dets[2] = {2, 2, 0, 0, 10, 10, 0, {0.9, 0.0}};
  dets[3] = {2, 3, 50, 0, 10, 10, 1, {0.0, 0.9}};
  mot::GraphParams params;
  params.delta_t = 1;
  params.d = 2;
  mot::MotGraph graph = mot::build_graph(dets, params);

  OracleResult result = brute_force_solve(graph.net);
  REQUIRE(result.status == OracleStatus::Optimal);
  CHECK(result.covers_enumerated == 2);
  CHECK(result.solution->objective == doctest::Approx(1.8));
  mot::TrackSet tracks = mot::decode_tracks(graph, *result.cover);
  CHECK(tracks.track_of_det.at(0) == tracks.track_of_det.at(2));
  CHECK(tracks.track_of_det.at(1) == tracks.track_of_det.at(3));
}

TEST_CASE("d larger than the source degree is infeasible") {
  FlowNetwork net = make_net(1, 2, {"a"}, {{"s", "a", {1}}}, {{"a", "t"}});
  CHECK(brute_force_solve(net).status == OracleStatus::Infeasible);
}

TEST_CASE("enumeration limit guards factorial blowup") {
  Rng rng(3);
  std::vector<mot::Detection> dets = grid_detections(8, 2, 1, rng);
  mot::GraphParams params;
  params.d = 2;
  mot::MotGraph graph = mot::build_graph(dets, params);  // 16 intermediates x2
  CHECK_THROWS_AS(enumerate_covers(graph.net, [](const PathCover&) { return true; }),
                  LimitError);
  EnumerationLimits limits;
  limits.max_intermediates = 64;
  CHECK_NOTHROW(enumerate_covers(
      graph.net, [](const PathCover&) { return false; }, limits));
}

TEST_CASE("covers stream strictly in canonical order, all valid") {
  Rng rng(99);
  EnumerationLimits limits;
  limits.max_intermediates = 20;
  for (int i = 0; i < 20; ++i) {
    FlowNetwork net = random_instance(rng, 8, 2, 3);
    bool first = true;
    PathCover prev;
    enumerate_covers(
        net,
        [&](const PathCover& cover) {
          check_cover(net, cover);
          if (!first) CHECK(compare_covers(prev, cover) < 0);
          prev = cover;
          first = false;
          return true;
        },
        limits);
  }
}

TEST_CASE("oracle maximum dominates every enumerated cover") {
  Rng rng(12);
  for (int i = 0; i < 10; ++i) {
    FlowNetwork net = random_instance(rng, 7, 3, 3);
    OracleResult best = brute_force_solve(net);
    if (best.status == OracleStatus::Infeasible) continue;
    enumerate_covers(net, [&](const PathCover& cover) {
      CHECK(best.solution->objective >= flow_from_paths(net, cover).objective);
      return true;
    });
  }
}

namespace {

// Independent cover count for dense delta_t=1 layered instances. Tracks that
// continue into a frame claim distinct detections (ordered injections); the
// leftovers start fresh tracks; any subset of the frame's tracks continues.
int64_t dp_cover_count(const std::vector<int>& frame_sizes, int d) {
  struct State {
    int continuing;
    int started;
  };
  auto binom = [](int n, int r) {
    int64_t v = 1;
    for (int i = 0; i < r; ++i) v = v * (n - i) / (i + 1);
    return v;
  };
  auto perm = [](int n, int r) {
    int64_t v = 1;
    for (int i = 0; i < r; ++i) v *= (n - i);
    return v;
  };

  std::map<std::pair<int, int>, int64_t> cur;
  const int n0 = frame_sizes[0];
  for (int c = 0; c <= n0; ++c) {
    cur[{c, n0}] += binom(n0, c);
  }
  for (size_t f = 1; f < frame_sizes.size(); ++f) {
    const int n = frame_sizes[f];
    std::map<std::pair<int, int>, int64_t> next;
    for (const auto& [state, ways] : cur) {
      const auto [continuing, started] = state;
      if (continuing > n) continue;
      const int64_t assign = perm(n, continuing);
      const int fresh = n - continuing;
      for (int c = 0; c <= n; ++c) {
        next[{c, started + fresh}] += ways * assign * binom(n, c);
      }
    }
    cur = std::move(next);
  }
  int64_t total = 0;
  for (const auto& [state, ways] : cur) {
    if (state.first == 0 && state.second == d) total += ways;
  }
  return total;
}

int64_t enumerated_count(const std::vector<int>& frame_sizes, int d) {
  Rng rng(1);
  std::vector<mot::Detection> dets;
  int id = 0;
  for (size_t f = 0; f < frame_sizes.size(); ++f) {
    for (int i = 0; i < frame_sizes[f]; ++i) {
      mot::Detection det;
      det.frame = static_cast<int>(f) + 1;
      det.id = id++;
      det.left = 100.0 * i;
      det.top = 0;
      det.width = det.height = 10;
      det.feature = {rng.uniform()};
      dets.push_back(det);
    }
  }
  mot::GraphParams params;
  params.delta_t = 1;
  params.d = d;
  mot::MotGraph graph = mot::build_graph(dets, params);
  int64_t count = 0;
  EnumerationLimits limits;
  limits.max_intermediates = 24;
  enumerate_covers(
      graph.net,
      [&](const PathCover&) {
        ++count;
        return true;
      },
      limits);
  return count;
}

}  // namespace

TEST_CASE("enumeration count matches the layered-graph recurrence") {
  const std::vector<std::pair<std::vector<int>, std::vector<int>>> cases = {
      {{1, 1}, {1, 2}},
      {{2, 2}, {2, 3}},
      {{1, 2, 1}, {2, 3}},
      {{2, 1, 2}, {2, 3}},
      {{3, 3}, {3}},
      {{1, 3, 2}, {3}},
  };
  for (const auto& [sizes, ds] : cases) {
    for (int d : ds) {
      CAPTURE(d);
      CHECK(enumerated_count(sizes, d) == dp_cover_count(sizes, d));
    }
  }
}

TEST_CASE("brute force surfaces unbounded instances") {
  FlowNetwork net = make_net(1, 1, {"a"}, {}, {{"s", "a"}, {"a", "t"}});
  CHECK_THROWS_AS(brute_force_solve(net), UnboundedError);
}
