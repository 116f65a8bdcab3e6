#include "mdflow/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "mdflow/io.hpp"
#include "mdflow/numfmt.hpp"

namespace mdflow::pipeline {

const char* method_name(Method m) {
  return m == Method::Vector ? "vector" : "scalar";
}

namespace {

BatchRun solve_batch(const mot::Batch& batch, const TrackOptions& opts) {
  BatchRun run;
  run.batch = batch;
  mot::GraphParams params = opts.graph;
  params.d = batch.d;
  run.graph = mot::build_graph(batch.detections, params);

  if (opts.method == Method::Vector) {
    SolveResult result = solve(run.graph.net, opts.solver);
    if (result.status == SolveStatus::Infeasible || !result.cover) {
      throw InfeasibleError("batch " + std::to_string(batch.index) +
                            " admits no path cover");
    }
    run.cover = *result.cover;
    run.solution = std::move(*result.solution);
    run.nodes_explored = result.nodes_explored;
  } else {
    mot::ScalarCosts costs = mot::scalar_costs(run.graph, opts.scalar);
    mot::ScalarResult result = mot::solve_scalar(run.graph, costs, opts.solver);
    if (result.status == SolveStatus::Infeasible || !result.cover) {
      throw InfeasibleError("batch " + std::to_string(batch.index) +
                            " admits no path cover");
    }
    run.cover = *result.cover;
    run.scalar_cost = result.total_cost;
    run.nodes_explored = result.nodes_explored;
    // The baseline picks the cover; the flow it induces must still be a
    // feasible vector solution.
    run.solution = flow_from_paths(run.graph.net, run.cover);
  }
  if (!validate(run.graph.net, run.solution).empty()) {
    throw Error("internal: batch solution failed validation");
  }
  run.local_tracks = mot::decode_tracks(run.graph, run.cover);
  return run;
}

}  // namespace

TrackRun run_tracking(const std::vector<mot::Detection>& dets,
                      const TrackOptions& opts) {
  TrackRun out;
  std::vector<mot::Batch> batches = mot::split_batches(dets, opts.graph);
  if (batches.empty()) throw InfeasibleError("no detections to track");
  std::vector<mot::TrackSet> local;
  for (const mot::Batch& batch : batches) {
    out.batches.push_back(solve_batch(batch, opts));
    local.push_back(out.batches.back().local_tracks);
  }
  out.tracks = mot::stitch(batches, local);
  return out;
}

namespace {

struct CellResult {
  double vector_idsw = 0.0;
  double scalar_idsw = 0.0;
  std::vector<FeatureSelectionRow> selection;
};

FeatureSelectionRow selection_row(const mot::SyntheticData& data,
                                  const BatchRun& run, int track_id,
                                  const std::vector<const mot::Detection*>& dets) {
  FeatureSelectionRow row;
  row.batch = run.batch.index;
  row.track = track_id;

  const int k = static_cast<int>(dets.front()->feature.size());
  std::vector<double> track_min(k, std::numeric_limits<double>::infinity());
  std::map<int, int> gt_votes;
  for (const mot::Detection* det : dets) {
    for (int dim = 0; dim < k; ++dim) {
      track_min[dim] = std::min(track_min[dim], det->feature[dim]);
    }
    gt_votes[det->gt_id] += 1;
  }
  row.argmax_dim = static_cast<int>(
      std::max_element(track_min.begin(), track_min.end()) - track_min.begin());
  int best_votes = -1;
  for (const auto& [gt, votes] : gt_votes) {
    if (votes > best_votes) {
      best_votes = votes;
      row.matched_gt = gt;
    }
  }
  for (size_t oi = 0; oi < data.object_ids.size(); ++oi) {
    if (data.object_ids[oi] == row.matched_gt) {
      const auto& stable = data.stable_dims[oi];
      row.stable = std::find(stable.begin(), stable.end(), row.argmax_dim) !=
                   stable.end();
    }
  }
  return row;
}

CellResult run_cell(const SweepOptions& opts, double sigma, int seed_index) {
  mot::SyntheticSpec spec = opts.base;
  spec.sigma = sigma;
  spec.seed = opts.base.seed + static_cast<uint64_t>(seed_index);
  mot::SyntheticData data = mot::generate_synthetic(spec);

  CellResult cell;
  TrackOptions track_opts;
  track_opts.graph = opts.graph;
  track_opts.scalar = opts.scalar;
  track_opts.solver = opts.solver;

  track_opts.method = Method::Vector;
  TrackRun vec = run_tracking(data.detections, track_opts);
  cell.vector_idsw = mot::idsw_norm(data.detections, vec.tracks).idsw_norm;

  track_opts.method = Method::Scalar;
  TrackRun sca = run_tracking(data.detections, track_opts);
  cell.scalar_idsw = mot::idsw_norm(data.detections, sca.tracks).idsw_norm;

  // Which dimension each optimal vector track kept largest, per batch track.
  for (const BatchRun& run : vec.batches) {
    std::map<int, std::vector<const mot::Detection*>> dets_of_track;
    for (const mot::Detection& det : run.batch.detections) {
      dets_of_track[run.local_tracks.track_of_det.at(det.id)].push_back(&det);
    }
    for (const auto& [track_id, dets] : dets_of_track) {
      FeatureSelectionRow row = selection_row(data, run, track_id, dets);
      row.sigma = sigma;
      row.seed = spec.seed;
      cell.selection.push_back(row);
    }
  }
  return cell;
}

}  // namespace

SweepOutputs run_sweep(const SweepOptions& opts) {
  if (opts.seeds < 1) throw Error("at least one seed per cell required");
  if (opts.sigma_grid.empty()) throw Error("sigma grid is empty");

  struct Job {
    double sigma;
    int seed_index;
  };
  std::vector<Job> jobs;
  for (double sigma : opts.sigma_grid) {
    for (int s = 0; s < opts.seeds; ++s) jobs.push_back({sigma, s});
  }

  std::vector<CellResult> results(jobs.size());
  std::vector<std::string> errors(jobs.size());
  std::atomic<size_t> next{0};
  const int workers = std::max(1, opts.jobs);
  auto work = [&]() {
    for (;;) {
      const size_t j = next.fetch_add(1);
      if (j >= jobs.size()) return;
      try {
        results[j] = run_cell(opts, jobs[j].sigma, jobs[j].seed_index);
      } catch (const std::exception& e) {
        errors[j] = e.what();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (size_t j = 0; j < jobs.size(); ++j) {
    if (!errors[j].empty()) {
      throw Error("sweep cell (sigma=" + fmt_double(jobs[j].sigma) + ", seed " +
                  std::to_string(jobs[j].seed_index) + ") failed: " + errors[j]);
    }
  }

  SweepOutputs out;
  for (const char* method : {"scalar", "vector"}) {
    for (size_t g = 0; g < opts.sigma_grid.size(); ++g) {
      mot::SweepCell cell;
      cell.method = method;
      cell.sigma = opts.sigma_grid[g];
      for (int s = 0; s < opts.seeds; ++s) {
        const CellResult& r = results[g * opts.seeds + s];
        cell.values.push_back(method == std::string("vector") ? r.vector_idsw
                                                              : r.scalar_idsw);
      }
      out.cells.push_back(std::move(cell));
    }
  }
  out.table = mot::sweep_report(out.cells);
  for (const CellResult& r : results) {
    out.feature_selection.insert(out.feature_selection.end(),
                                 r.selection.begin(), r.selection.end());
  }
  return out;
}

std::string feature_selection_to_csv(
    const std::vector<FeatureSelectionRow>& rows) {
  std::ostringstream out;
  out << "sigma,seed,batch,track_id,argmax_dim,matched_gt,is_stable\n";
  for (const auto& r : rows) {
    out << fmt_double(r.sigma) << "," << r.seed << "," << r.batch << ","
        << r.track << "," << r.argmax_dim << "," << r.matched_gt << ","
        << (r.stable ? 1 : 0) << "\n";
  }
  return out.str();
}

void write_sweep_outputs(const std::string& dir, const SweepOutputs& outputs) {
  io::atomic_write_file(dir + "/sweep.csv", io::sweep_to_csv(outputs.table));
  io::atomic_write_file(dir + "/sweep.json", io::sweep_to_json(outputs.table));
  io::atomic_write_file(dir + "/feature_selection.csv",
                        feature_selection_to_csv(outputs.feature_selection));
}

}  // namespace mdflow::pipeline
