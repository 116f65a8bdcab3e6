#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "helpers.hpp"
#include "mdflow/bnb.hpp"
#include "mdflow/mot/graph.hpp"
#include "mdflow/oracle.hpp"

using namespace mdflow;
using namespace mdflow::mot;

namespace {

Detection det(int frame, int id, double x, double y,
              std::vector<double> feature, int gt = -1) {
  Detection d;
  d.frame = frame;
  d.id = id;
  d.left = x;
  d.top = y;
  d.width = 20;
  d.height = 20;
  d.gt_id = gt;
  d.feature = std::move(feature);
  return d;
}

int count_role(const MotGraph& g, EdgeRole role) {
  int n = 0;
  for (EdgeRole r : g.roles) n += r == role ? 1 : 0;
  return n;
}

}  // namespace

TEST_CASE("two single-detection frames build the minimal tracking graph") {
  GraphParams params;
  params.delta_t = 1;
  params.d = 1;
  MotGraph g = build_graph({det(1, 1, 0, 0, {0.5, 0.5}),
                            det(2, 2, 5, 0, {0.5, 0.5})},
                           params);
  CHECK(g.net.num_nodes() == 6);  // s, t and one (e, o) pair per detection
  CHECK(count_role(g, EdgeRole::Observation) == 2);
  CHECK(count_role(g, EdgeRole::Enter) == 2);
  CHECK(count_role(g, EdgeRole::Exit) == 2);
  CHECK(count_role(g, EdgeRole::Transition) == 1);
  CHECK(g.net.num_edges() == 7);
  CHECK(solve(g.net).status == SolveStatus::Optimal);
}

TEST_CASE("transition window spans delta_t frames") {
  GraphParams params;
  params.delta_t = 2;
  params.d = 1;
  MotGraph g = build_graph({det(1, 1, 0, 0, {1.0}), det(2, 2, 0, 0, {1.0}),
                            det(3, 3, 0, 0, {1.0})},
                           params);
  CHECK(count_role(g, EdgeRole::Transition) == 3);  // 1->2, 1->3, 2->3
  auto has_transition = [&](int i, int j) {
    return g.net.find_edge(g.end_node[i], g.start_node[j]).has_value();
  };
  CHECK(has_transition(0, 1));
  CHECK(has_transition(0, 2));
  CHECK(has_transition(1, 2));

  params.delta_t = 1;
  MotGraph h = build_graph(g.detections, params);
  CHECK(count_role(h, EdgeRole::Transition) == 2);
}

TEST_CASE("zero gate removes every moving transition") {
  GraphParams params;
  params.delta_t = 1;
  params.d = 2;
  params.gate = 0.0;
  MotGraph g = build_graph({det(1, 1, 0, 0, {1.0}), det(2, 2, 30, 0, {1.0})},
                           params);
  CHECK(count_role(g, EdgeRole::Transition) == 0);
  // Every detection becomes its own track, so only d = 2 is feasible.
  CHECK(solve(g.net).status == SolveStatus::Optimal);
  GraphParams one = params;
  one.d = 1;
  CHECK(solve(build_graph(g.detections, one).net).status ==
        SolveStatus::Infeasible);
}

TEST_CASE("pruning keeps near transitions and drops far ones") {
  GraphParams params;
  params.delta_t = 1;
  params.d = 2;
  std::vector<Detection> dets = {det(1, 1, 0, 0, {1.0}), det(1, 2, 500, 0, {1.0}),
                                 det(2, 3, 0, 0, {1.0}), det(2, 4, 500, 0, {1.0})};
  MotGraph full = build_graph(dets, params);
  CHECK(count_role(full, EdgeRole::Transition) == 4);

  MotGraph wide = prune(full, 1e9);
  CHECK(count_role(wide, EdgeRole::Transition) == 4);

  MotGraph gated = prune(full, 100.0);
  CHECK(count_role(gated, EdgeRole::Transition) == 2);
  CHECK(count_role(gated, EdgeRole::Observation) == 4);
  CHECK(count_role(gated, EdgeRole::Enter) == 4);
  CHECK(count_role(gated, EdgeRole::Exit) == 4);
}

TEST_CASE("pruning is objective-neutral when the optimum survives the gate") {
  GraphParams params;
  params.delta_t = 1;
  params.d = 2;
  std::vector<Detection> dets = {
      det(1, 1, 0, 0, {1.0, 0.1}), det(1, 2, 500, 0, {0.1, 1.0}),
      det(2, 3, 0, 0, {0.9, 0.1}), det(2, 4, 500, 0, {0.1, 0.9})};
  MotGraph full = build_graph(dets, params);
  MotGraph gated = prune(full, 100.0);
  OracleResult a = brute_force_solve(full.net);
  OracleResult b = brute_force_solve(gated.net);
  REQUIRE(a.status == OracleStatus::Optimal);
  REQUIRE(b.status == OracleStatus::Optimal);
  CHECK(a.solution->objective == b.solution->objective);
}

TEST_CASE("construction is invariant to input detection order") {
  Rng rng(3);
  std::vector<Detection> dets = testutil::grid_detections(3, 2, 2, rng);
  GraphParams params;
  params.delta_t = 2;
  params.d = 2;
  MotGraph a = build_graph(dets, params);

  std::vector<Detection> shuffled = dets;
  std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937(7));
  MotGraph b = build_graph(shuffled, params);

  CHECK(a.net.node_names() == b.net.node_names());
  REQUIRE(a.net.num_edges() == b.net.num_edges());
  for (EdgeId e = 0; e < a.net.num_edges(); ++e) {
    CHECK(a.net.edge(e).from == b.net.edge(e).from);
    CHECK(a.net.edge(e).to == b.net.edge(e).to);
    CHECK(a.net.edge(e).cap == b.net.edge(e).cap);
  }
}

TEST_CASE("detection validation") {
  GraphParams params;
  params.d = 1;
  CHECK_THROWS_AS(
      build_graph({det(1, 1, 0, 0, {1.0}), det(2, 1, 0, 0, {1.0})}, params),
      Error);  // duplicate id
  CHECK_THROWS_AS(build_graph({det(1, 1, 0, 0, {-0.5})}, params), Error);
  CHECK_THROWS_AS(build_graph({det(1, 1, 0, 0, {1.0}), det(2, 2, 0, 0, {1.0, 2.0})},
                              params),
                  Error);  // feature length differs
  Detection bad = det(1, 1, 0, 0, {1.0});
  bad.width = 0;
  CHECK_THROWS_AS(build_graph({bad}, params), Error);
  CHECK_THROWS_AS(build_graph({}, params), Error);
}

TEST_CASE("decoded tracks respect the skip window") {
  Rng rng(21);
  for (int i = 0; i < 10; ++i) {
    std::vector<Detection> dets = testutil::grid_detections(4, 2, 3, rng);
    GraphParams params;
    params.delta_t = rng.uniform_int(1, 3);
    params.d = 2;
    MotGraph g = build_graph(dets, params);
    SolveResult result = solve(g.net);
    if (result.status != SolveStatus::Optimal) continue;
    TrackSet tracks = decode_tracks(g, *result.cover);
    std::map<int, std::vector<int>> frames_of_track;
    for (const Detection& d : g.detections) {
      frames_of_track[tracks.track_of_det.at(d.id)].push_back(d.frame);
    }
    for (auto& [track, frames] : frames_of_track) {
      (void)track;
      std::sort(frames.begin(), frames.end());
      for (size_t j = 1; j < frames.size(); ++j) {
        CHECK(frames[j] > frames[j - 1]);
        CHECK(frames[j] - frames[j - 1] <= params.delta_t);
      }
    }
  }
}

TEST_CASE("every cover in a tracking graph crosses observation edges") {
  Rng rng(31);
  std::vector<Detection> dets = testutil::grid_detections(3, 2, 2, rng);
  GraphParams params;
  params.delta_t = 3;
  params.d = 2;
  MotGraph g = build_graph(dets, params);
  enumerate_covers(g.net, [&](const PathCover& cover) {
    CHECK_NOTHROW(flow_from_paths(g.net, cover));
    return true;
  });
}

TEST_CASE("batch splitting windows the frames and derives per-batch d") {
  std::vector<Detection> dets = {
      det(1, 1, 0, 0, {1.0}, 7),  det(2, 2, 0, 0, {1.0}, 7),
      det(3, 3, 0, 0, {1.0}, 7),  det(3, 4, 0, 0, {1.0}, 8),
      det(7, 5, 0, 0, {1.0}, 8),  det(8, 6, 0, 0, {1.0}, 8)};
  GraphParams params;
  params.delta_t = 1;
  params.d = 5;
  params.batch_width = 3;

  auto batches = split_batches(dets, params);
  REQUIRE(batches.size() == 2);  // frames 4..6 hold nothing and are skipped
  CHECK(batches[0].first_frame == 1);
  CHECK(batches[0].detections.size() == 4);
  CHECK(batches[0].d == 2);  // identities 7 and 8
  CHECK(batches[1].detections.size() == 2);
  CHECK(batches[1].d == 1);

  SUBCASE("single batch without a width") {
    GraphParams whole = params;
    whole.batch_width.reset();
    auto all = split_batches(dets, whole);
    REQUIRE(all.size() == 1);
    CHECK(all[0].detections.size() == dets.size());
  }
  SUBCASE("width must exceed the skip window") {
    GraphParams bad = params;
    bad.delta_t = 3;
    CHECK_THROWS_AS(split_batches(dets, bad), Error);
  }
  SUBCASE("without identities the global d applies") {
    std::vector<Detection> anon = dets;
    for (auto& d : anon) d.gt_id = -1;
    auto b = split_batches(anon, params);
    CHECK(b[0].d == 5);
  }
}

TEST_CASE("stitching joins tracks by endpoint similarity") {
  // Two objects with orthogonal features across a batch boundary.
  std::vector<Detection> dets = {
      det(1, 1, 0, 0, {1.0, 0.0}, 1), det(1, 2, 90, 0, {0.0, 1.0}, 2),
      det(2, 3, 0, 0, {1.0, 0.0}, 1), det(2, 4, 90, 0, {0.0, 1.0}, 2),
      det(3, 5, 0, 0, {1.0, 0.0}, 1), det(3, 6, 90, 0, {0.0, 1.0}, 2),
      det(4, 7, 0, 0, {1.0, 0.0}, 1), det(4, 8, 90, 0, {0.0, 1.0}, 2)};
  GraphParams params;
  params.delta_t = 1;
  params.batch_width = 2;
  auto batches = split_batches(dets, params);
  REQUIRE(batches.size() == 2);

  std::vector<TrackSet> per_batch;
  for (const auto& batch : batches) {
    MotGraph g = build_graph(batch.detections, {1, {}, {}, batch.d});
    SolveResult result = solve(g.net);
    REQUIRE(result.status == SolveStatus::Optimal);
    per_batch.push_back(decode_tracks(g, *result.cover));
  }
  TrackSet global = stitch(batches, per_batch);
  CHECK(global.track_of_det.at(1) == global.track_of_det.at(7));
  CHECK(global.track_of_det.at(2) == global.track_of_det.at(8));
  CHECK(global.track_of_det.at(1) != global.track_of_det.at(2));
}

TEST_CASE("unmatched batch tracks receive fresh ids") {
  // Second batch has an extra identity that nothing in batch one resembles.
  std::vector<Detection> dets = {
      det(1, 1, 0, 0, {1.0, 0.0, 0.0}, 1), det(2, 2, 0, 0, {1.0, 0.0, 0.0}, 1),
      det(3, 3, 0, 0, {1.0, 0.0, 0.0}, 1), det(3, 4, 90, 0, {0.0, 0.0, 1.0}, 3),
      det(4, 5, 0, 0, {1.0, 0.0, 0.0}, 1), det(4, 6, 90, 0, {0.0, 0.0, 1.0}, 3)};
  GraphParams params;
  params.delta_t = 1;
  params.batch_width = 2;
  auto batches = split_batches(dets, params);
  std::vector<TrackSet> per_batch;
  for (const auto& batch : batches) {
    MotGraph g = build_graph(batch.detections, {1, {}, {}, batch.d});
    per_batch.push_back(decode_tracks(g, *solve(g.net).cover));
  }
  TrackSet global = stitch(batches, per_batch);
  CHECK(global.track_of_det.at(1) == global.track_of_det.at(3));
  CHECK(global.track_of_det.at(4) != global.track_of_det.at(3));
  CHECK(global.num_tracks() == 2);
}
