#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mdflow/bnb.hpp"
#include "mdflow/mot/baseline.hpp"
#include "mdflow/mot/features.hpp"
#include "mdflow/mot/graph.hpp"
#include "mdflow/mot/metrics.hpp"

namespace mdflow::pipeline {

// No path cover exists for some batch (over-constrained gate, bad d, ...).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

enum class Method { Vector, Scalar };

const char* method_name(Method m);

struct TrackOptions {
  mot::GraphParams graph;
  Method method = Method::Vector;
  mot::ScalarCostParams scalar;
  SolverConfig solver;
};

struct BatchRun {
  mot::Batch batch;
  mot::MotGraph graph;
  mot::TrackSet local_tracks;
  PathCover cover;      // canonical
  Solution solution;    // vector-flow solution for the chosen cover
  double scalar_cost = 0.0;  // meaningful for the scalar method
  long nodes_explored = 0;
};

struct TrackRun {
  mot::TrackSet tracks;  // stitched across batches
  std::vector<BatchRun> batches;
};

// Ingestion -> batches -> graph -> exact solve -> decode -> stitch. Every
// emitted solution re-validates cleanly or an internal error is thrown.
// Throws InfeasibleError when any batch admits no cover.
TrackRun run_tracking(const std::vector<mot::Detection>& dets,
                      const TrackOptions& opts);

struct SweepOptions {
  mot::SyntheticSpec base;  // sigma and seed are overridden per cell
  std::vector<double> sigma_grid;
  int seeds = 1;
  int jobs = 1;
  mot::GraphParams graph;
  mot::ScalarCostParams scalar;
  SolverConfig solver;
};

// Per-track summary of which dimension the maximizing flow kept largest.
struct FeatureSelectionRow {
  double sigma = 0.0;
  uint64_t seed = 0;
  int batch = 0;
  int track = 0;
  int argmax_dim = 0;
  int matched_gt = -1;
  bool stable = false;
};

struct SweepOutputs {
  std::vector<mot::SweepRow> table;                   // sorted (method, sigma)
  std::vector<mot::SweepCell> cells;                  // raw per-seed values
  std::vector<FeatureSelectionRow> feature_selection; // vector method only
};

// Runs both methods over the sigma grid x seeds. Cell seeds are
// base.seed + seed index; ground truth is drawn per seed and shared across
// sigma values. Cells run concurrently up to `jobs`; outputs are
// deterministic regardless of the job count.
SweepOutputs run_sweep(const SweepOptions& opts);

std::string feature_selection_to_csv(const std::vector<FeatureSelectionRow>& rows);

// sweep.csv, sweep.json, feature_selection.csv under dir.
void write_sweep_outputs(const std::string& dir, const SweepOutputs& outputs);

}  // namespace mdflow::pipeline
