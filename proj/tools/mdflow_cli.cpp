#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mdflow/io.hpp"
#include "mdflow/lp_export.hpp"
#include "mdflow/numfmt.hpp"
#include "mdflow/oracle.hpp"
#include "mdflow/pipeline.hpp"

namespace {

using namespace mdflow;

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitInputError = 2;
constexpr int kExitInternalError = 3;

struct SolveArgs {
  std::string graph_file;
  std::string out_file;
  double time_limit = 1e18;
  long node_limit = LONG_MAX;
  int jobs = 1;
};

int cmd_solve(const SolveArgs& args) {
  FlowNetwork net = io::read_graph_json(args.graph_file);
  SolverConfig cfg;
  cfg.time_limit_seconds = args.time_limit;
  cfg.node_limit = args.node_limit;
  cfg.jobs = args.jobs;
  SolveResult result = solve(net, cfg);

  std::cout << "status: " << solve_status_name(result.status) << "\n";
  std::cout << "nodes explored: " << result.nodes_explored << "\n";
  if (!result.solution) {
    std::cout << "no feasible path cover exists\n";
    return kExitInfeasible;
  }
  const auto violations = validate(net, *result.solution);
  std::cout << "objective: " << fmt_double(result.solution->objective) << "\n";
  if (result.status != SolveStatus::Optimal) {
    std::cout << "bound: " << fmt_double(result.best_bound) << "\n";
  }
  std::cout << "paths:\n";
  for (const auto& path : result.cover->paths) {
    std::cout << " ";
    for (size_t i = 0; i < path.size(); ++i) {
      std::cout << (i ? " -> " : " ") << net.node_name(path[i]);
    }
    std::vector<double> flow = path_bottleneck(net, path);
    std::cout << "  flow (";
    for (size_t i = 0; i < flow.size(); ++i) {
      std::cout << (i ? ", " : "") << fmt_double(flow[i]);
    }
    std::cout << ")\n";
  }
  std::cout << "validation: "
            << (violations.empty()
                    ? "clean"
                    : std::to_string(violations.size()) + " violation(s)")
            << "\n";

  if (!args.out_file.empty()) {
    nlohmann::json doc;
    doc["status"] = solve_status_name(result.status);
    doc["objective"] = result.solution->objective;
    doc["nodes_explored"] = result.nodes_explored;
    doc["violations"] = violations.size();
    nlohmann::json paths = nlohmann::json::array();
    for (const auto& path : result.cover->paths) {
      nlohmann::json p = nlohmann::json::array();
      for (NodeId v : path) p.push_back(net.node_name(v));
      paths.push_back(std::move(p));
    }
    doc["paths"] = std::move(paths);
    nlohmann::json edges = nlohmann::json::array();
    for (EdgeId e = 0; e < net.num_edges(); ++e) {
      edges.push_back({{"from", net.node_name(net.edge(e).from)},
                       {"to", net.node_name(net.edge(e).to)},
                       {"active", static_cast<bool>(result.solution->active[e])},
                       {"flow", result.solution->flow[e]}});
    }
    doc["edges"] = std::move(edges);
    io::atomic_write_file(args.out_file, doc.dump(2) + "\n");
  }
  return violations.empty() ? kExitOk : kExitInternalError;
}

struct TrackArgs {
  std::string dets_file;
  std::string features_file;
  std::string images_dir;
  int bins = 8;
  std::string out_file = "tracks.csv";
  std::string method = "vector";
  std::string similarity = "cosine";
  int dt = 3;
  double gate = -1.0;
  int batch = 0;
  int d = 1;
  double beta = 0.2;
  int jobs = 1;
  double time_limit = 1e18;
};

std::string frame_image_path(const std::string& dir, int frame) {
  char name[32];
  for (const char* pattern : {"%06d.png", "%06d.ppm", "%d.png", "%d.ppm"}) {
    std::snprintf(name, sizeof(name), pattern, frame);
    const std::string path = dir + "/" + name;
    if (std::filesystem::exists(path)) return path;
  }
  throw InputError("no image for frame " + std::to_string(frame) + " under " +
                   dir);
}

void histogram_features(std::vector<mot::Detection>& dets,
                        const std::string& dir, int bins) {
  std::map<int, mot::Image> cache;
  for (auto& det : dets) {
    auto it = cache.find(det.frame);
    if (it == cache.end()) {
      it = cache.emplace(det.frame, mot::load_image(frame_image_path(dir, det.frame)))
               .first;
    }
    det.feature = mot::color_histogram(
        it->second, mot::Box{det.left, det.top, det.width, det.height}, bins);
  }
}

int cmd_track(const TrackArgs& args) {
  std::vector<mot::Detection> dets = io::read_mot_gt_csv(args.dets_file);
  if (!args.features_file.empty()) {
    io::attach_features_csv(dets, args.features_file);
  } else if (!args.images_dir.empty()) {
    histogram_features(dets, args.images_dir, args.bins);
  } else {
    throw InputError("either --features or --images is required");
  }

  pipeline::TrackOptions opts;
  opts.graph.delta_t = args.dt;
  if (args.gate >= 0) opts.graph.gate = args.gate;
  if (args.batch > 0) opts.graph.batch_width = args.batch;
  opts.graph.d = args.d;
  opts.method = args.method == "scalar" ? pipeline::Method::Scalar
                                        : pipeline::Method::Vector;
  opts.scalar.similarity = args.similarity == "hist"
                               ? mot::SimilarityKind::HistogramIntersection
                               : mot::SimilarityKind::Cosine;
  opts.scalar.enter_exit = args.beta;
  opts.solver.jobs = args.jobs;
  opts.solver.time_limit_seconds = args.time_limit;

  pipeline::TrackRun run = pipeline::run_tracking(dets, opts);
  io::write_tracks_csv(args.out_file, dets, run.tracks);

  long nodes = 0;
  for (const auto& batch : run.batches) nodes += batch.nodes_explored;
  std::cout << "tracked " << dets.size() << " detections in "
            << run.batches.size() << " batch(es), " << nodes
            << " search nodes\n";
  std::cout << "tracks written to " << args.out_file << "\n";
  return kExitOk;
}

struct EvalArgs {
  std::string gt_file;
  std::string tracks_file;
  std::string out_file;
};

int cmd_eval(const EvalArgs& args) {
  std::vector<mot::Detection> gt = io::read_mot_gt_csv(args.gt_file);
  mot::TrackSet tracks = io::read_tracks_csv(args.tracks_file);
  mot::MetricsReport report = mot::idsw_norm(gt, tracks);
  const std::string doc = io::metrics_to_json(report);
  if (args.out_file.empty()) {
    std::cout << doc;
  } else {
    io::atomic_write_file(args.out_file, doc);
    std::cout << "idsw_norm: " << fmt_double(report.idsw_norm) << "\n";
  }
  return kExitOk;
}

struct SynthArgs {
  std::string spec_file;
  std::string sigma_grid = "0";
  int seeds = 1;
  std::string out_dir;
  uint64_t seed = 0;
  bool seed_set = false;
  int dt = 3;
  double gate = -1.0;
  int batch = 0;
  double beta = 0.2;
  std::string similarity = "cosine";
  int jobs = 1;
};

std::vector<double> parse_grid(const std::string& grid) {
  std::vector<double> values;
  std::istringstream in(grid);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    values.push_back(parse_double(tok));
  }
  if (values.empty()) throw InputError("empty sigma grid");
  return values;
}

int cmd_synth(const SynthArgs& args) {
  pipeline::SweepOptions opts;
  opts.base = io::read_synthetic_spec(args.spec_file);
  if (args.seed_set) opts.base.seed = args.seed;
  opts.sigma_grid = parse_grid(args.sigma_grid);
  opts.seeds = args.seeds;
  opts.jobs = args.jobs;
  opts.graph.delta_t = args.dt;
  if (args.gate >= 0) opts.graph.gate = args.gate;
  if (args.batch > 0) opts.graph.batch_width = args.batch;
  opts.graph.d = static_cast<int>(opts.base.objects.size());
  opts.scalar.enter_exit = args.beta;
  opts.scalar.similarity = args.similarity == "hist"
                               ? mot::SimilarityKind::HistogramIntersection
                               : mot::SimilarityKind::Cosine;

  pipeline::SweepOutputs outputs = pipeline::run_sweep(opts);
  pipeline::write_sweep_outputs(args.out_dir, outputs);
  std::cout << io::sweep_to_csv(outputs.table);
  std::cout << "sweep written to " << args.out_dir << "\n";
  return kExitOk;
}

struct ExportArgs {
  std::string graph_file;
  std::string out_file;
};

int cmd_export_lp(const ExportArgs& args) {
  FlowNetwork net = io::read_graph_json(args.graph_file);
  io::atomic_write_file(args.out_file, export_lp(net));
  std::cout << "LP model written to " << args.out_file << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solver and tracking pipeline for vector-valued network flows"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file mirroring the flags");

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "solve a network description");
  solve_cmd->add_option("--graph", solve_args.graph_file, "network JSON")
      ->required();
  solve_cmd->add_option("--out", solve_args.out_file, "solution JSON output");
  solve_cmd->add_option("--time-limit", solve_args.time_limit, "seconds");
  solve_cmd->add_option("--node-limit", solve_args.node_limit, "search nodes");
  solve_cmd->add_option("--jobs", solve_args.jobs, "parallel workers");

  TrackArgs track_args;
  auto* track_cmd = app.add_subcommand("track", "run the tracking pipeline");
  track_cmd->add_option("--dets", track_args.dets_file, "ground-truth box CSV")
      ->required();
  track_cmd->add_option("--features", track_args.features_file, "feature CSV");
  track_cmd->add_option("--images", track_args.images_dir,
                        "frame image directory (PPM/PNG)");
  track_cmd->add_option("--bins", track_args.bins, "histogram bins per channel");
  track_cmd->add_option("--out", track_args.out_file, "tracks CSV output");
  track_cmd->add_option("--method", track_args.method, "vector|scalar")
      ->check(CLI::IsMember({"vector", "scalar"}));
  track_cmd->add_option("--similarity", track_args.similarity,
                        "scalar similarity: cosine|hist")
      ->check(CLI::IsMember({"cosine", "hist"}));
  track_cmd->add_option("--dt", track_args.dt, "max frame skip");
  track_cmd->add_option("--gate", track_args.gate, "px per frame gap; <0 = off");
  track_cmd->add_option("--batch", track_args.batch, "frames per batch; 0 = off");
  track_cmd->add_option("--d", track_args.d,
                        "track count when no identities are present");
  track_cmd->add_option("--beta", track_args.beta, "scalar enter/exit cost");
  track_cmd->add_option("--jobs", track_args.jobs, "parallel workers");
  track_cmd->add_option("--time-limit", track_args.time_limit, "seconds");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "identity-switch metrics");
  eval_cmd->add_option("--gt", eval_args.gt_file, "ground-truth box CSV")
      ->required();
  eval_cmd->add_option("--tracks", eval_args.tracks_file, "tracks CSV")
      ->required();
  eval_cmd->add_option("--out", eval_args.out_file, "report JSON output");

  SynthArgs synth_args;
  auto* synth_cmd =
      app.add_subcommand("synth", "synthetic noise sweep over both methods");
  synth_cmd->add_option("--spec", synth_args.spec_file, "scenario JSON")
      ->required();
  synth_cmd->add_option("--sigma-grid", synth_args.sigma_grid,
                        "comma-separated noise levels");
  synth_cmd->add_option("--seeds", synth_args.seeds, "seeds per cell");
  synth_cmd->add_option("--out", synth_args.out_dir, "output directory")
      ->required();
  auto* seed_opt =
      synth_cmd->add_option("--seed", synth_args.seed, "base seed override");
  synth_cmd->add_option("--dt", synth_args.dt, "max frame skip");
  synth_cmd->add_option("--gate", synth_args.gate, "px per frame gap; <0 = off");
  synth_cmd->add_option("--batch", synth_args.batch, "frames per batch; 0 = off");
  synth_cmd->add_option("--beta", synth_args.beta, "scalar enter/exit cost");
  synth_cmd->add_option("--similarity", synth_args.similarity,
                        "scalar similarity: cosine|hist")
      ->check(CLI::IsMember({"cosine", "hist"}));
  synth_cmd->add_option("--jobs", synth_args.jobs, "parallel sweep cells");

  ExportArgs export_args;
  auto* export_cmd =
      app.add_subcommand("export-lp", "emit the MIP as an LP-format file");
  export_cmd->add_option("--graph", export_args.graph_file, "network JSON")
      ->required();
  export_cmd->add_option("--out", export_args.out_file, "LP output path")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve_args);
    if (*track_cmd) return cmd_track(track_args);
    if (*eval_cmd) return cmd_eval(eval_args);
    if (*synth_cmd) {
      synth_args.seed_set = seed_opt->count() > 0;
      return cmd_synth(synth_args);
    }
    if (*export_cmd) return cmd_export_lp(export_args);
  } catch (const pipeline::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternalError;
  }
  return kExitInputError;
}
