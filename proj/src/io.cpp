#include "mdflow/io.hpp"

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mdflow/numfmt.hpp"

namespace mdflow::io {

using nlohmann::json;

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    const auto a = field.find_first_not_of(" \t\r");
    const auto b = field.find_last_not_of(" \t\r");
    fields.push_back(a == std::string::npos ? "" : field.substr(a, b - a + 1));
  }
  return fields;
}

[[noreturn]] void fail(const std::string& path, int line, const std::string& msg) {
  throw InputError(path + ":" + std::to_string(line) + ": " + msg);
}

double field_num(const std::string& path, int line,
                 const std::vector<std::string>& fields, size_t idx) {
  try {
    return parse_double(fields.at(idx));
  } catch (const InputError&) {
    fail(path, line, "column " + std::to_string(idx + 1) + " is not a number");
  }
}

int field_int(const std::string& path, int line,
              const std::vector<std::string>& fields, size_t idx) {
  const double v = field_num(path, line, fields, idx);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) {
    fail(path, line, "column " + std::to_string(idx + 1) + " is not an integer");
  }
  return i;
}

// Yields (line number, parsed fields) for every data row.
template <class Fn>
void for_each_csv_row(const std::string& path, Fn fn) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    fn(lineno, split_csv(line));
  }
}

}  // namespace

std::vector<mot::Detection> read_mot_gt_csv(const std::string& path) {
  std::vector<mot::Detection> dets;
  std::set<std::pair<int, int>> seen;
  for_each_csv_row(path, [&](int lineno, const std::vector<std::string>& f) {
    if (f.size() < 6 || f.size() > 9) {
      fail(path, lineno, "expected 6..9 columns, got " + std::to_string(f.size()));
    }
    mot::Detection det;
    det.frame = field_int(path, lineno, f, 0);
    det.gt_id = field_int(path, lineno, f, 1);
    det.left = field_num(path, lineno, f, 2);
    det.top = field_num(path, lineno, f, 3);
    det.width = field_num(path, lineno, f, 4);
    det.height = field_num(path, lineno, f, 5);
    if (det.frame < 1) fail(path, lineno, "frame must be >= 1");
    if (det.width <= 0 || det.height <= 0) {
      fail(path, lineno, "box width/height must be positive");
    }
    if (!seen.insert({det.frame, det.gt_id}).second) {
      fail(path, lineno, "duplicate (frame, id) pair");
    }
    dets.push_back(det);
  });
  std::sort(dets.begin(), dets.end(),
            [](const mot::Detection& a, const mot::Detection& b) {
              return std::tie(a.frame, a.gt_id) < std::tie(b.frame, b.gt_id);
            });
  for (size_t i = 0; i < dets.size(); ++i) {
    dets[i].id = static_cast<int>(i);
  }
  return dets;
}

void attach_features_csv(std::vector<mot::Detection>& dets,
                         const std::string& path) {
  std::map<std::pair<int, int>, std::vector<double>> features;
  size_t k = 0;
  for_each_csv_row(path, [&](int lineno, const std::vector<std::string>& f) {
    if (f.size() < 3) fail(path, lineno, "expected frame,id,f_1,...");
    const int frame = field_int(path, lineno, f, 0);
    const int id = field_int(path, lineno, f, 1);
    std::vector<double> feat;
    for (size_t i = 2; i < f.size(); ++i) {
      feat.push_back(field_num(path, lineno, f, i));
    }
    if (k == 0) k = feat.size();
    if (feat.size() != k) fail(path, lineno, "feature length differs");
    if (!features.emplace(std::make_pair(frame, id), std::move(feat)).second) {
      fail(path, lineno, "duplicate feature row for (frame, id)");
    }
  });
  for (auto& det : dets) {
    auto it = features.find({det.frame, det.gt_id});
    if (it == features.end()) {
      throw InputError(path + ": no feature row for frame " +
                       std::to_string(det.frame) + " id " +
                       std::to_string(det.gt_id));
    }
    det.feature = it->second;
  }
}

void write_tracks_csv(const std::string& path,
                      const std::vector<mot::Detection>& dets,
                      const mot::TrackSet& tracks) {
  std::vector<mot::Detection> ordered = dets;
  std::sort(ordered.begin(), ordered.end(),
            [](const mot::Detection& a, const mot::Detection& b) {
              return std::tie(a.frame, a.id) < std::tie(b.frame, b.id);
            });
  std::ostringstream out;
  for (const auto& det : ordered) {
    auto it = tracks.track_of_det.find(det.id);
    if (it == tracks.track_of_det.end()) {
      throw Error("track set misses detection " + std::to_string(det.id));
    }
    out << det.frame << "," << it->second << "," << det.id << "\n";
  }
  atomic_write_file(path, out.str());
}

mot::TrackSet read_tracks_csv(const std::string& path) {
  mot::TrackSet tracks;
  for_each_csv_row(path, [&](int lineno, const std::vector<std::string>& f) {
    if (f.size() != 3) fail(path, lineno, "expected frame,track_id,det_id");
    const int track = field_int(path, lineno, f, 1);
    const int det = field_int(path, lineno, f, 2);
    if (!tracks.track_of_det.emplace(det, track).second) {
      fail(path, lineno, "detection assigned twice");
    }
  });
  return tracks;
}

FlowNetwork read_graph_json(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
  try {
    const int k = doc.at("k").get<int>();
    const int d = doc.at("d").get<int>();
    NetworkBuilder builder(k, d);
    std::map<std::string, NodeId> ids;
    for (const auto& name : doc.at("nodes")) {
      const std::string n = name.get<std::string>();
      if (ids.count(n)) throw InputError(path + ": duplicate node " + n);
      ids[n] = builder.add_node(n);
    }
    auto lookup = [&](const std::string& n) {
      auto it = ids.find(n);
      if (it == ids.end()) throw InputError(path + ": unknown node " + n);
      return it->second;
    };
    builder.set_source(lookup(doc.at("source").get<std::string>()));
    builder.set_sink(lookup(doc.at("sink").get<std::string>()));
    for (const auto& edge : doc.at("edges")) {
      const auto& cap = edge.at("cap");
      CapVec c = CapVec::infinite();
      if (cap.is_string()) {
        if (cap.get<std::string>() != "inf") {
          throw InputError(path + ": edge cap must be \"inf\" or an array");
        }
      } else {
        c = CapVec::finite(cap.get<std::vector<double>>());
      }
      builder.add_edge(lookup(edge.at("from").get<std::string>()),
                       lookup(edge.at("to").get<std::string>()), std::move(c));
    }
    return builder.build();
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  } catch (const Error& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string graph_to_json(const FlowNetwork& net) {
  json doc;
  doc["k"] = net.k();
  doc["d"] = net.d();
  doc["source"] = net.node_name(net.source());
  doc["sink"] = net.node_name(net.sink());
  doc["nodes"] = net.node_names();
  json edges = json::array();
  for (const Edge& e : net.edges()) {
    json edge;
    edge["from"] = net.node_name(e.from);
    edge["to"] = net.node_name(e.to);
    if (e.cap.is_infinite()) {
      edge["cap"] = "inf";
    } else {
      edge["cap"] = e.cap.values();
    }
    edges.push_back(std::move(edge));
  }
  doc["edges"] = std::move(edges);
  return doc.dump(2) + "\n";
}

mot::SyntheticSpec read_synthetic_spec(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
  try {
    mot::SyntheticSpec spec;
    spec.frames = doc.at("frames").get<int>();
    spec.k = doc.at("k").get<int>();
    spec.sigma = doc.value("sigma", 0.0);
    spec.seed = doc.value("seed", uint64_t{0});
    spec.stable_noise_scale = doc.value("stable_noise_scale", 1.0);
    for (const auto& obj : doc.at("objects")) {
      mot::SyntheticObject o;
      o.id = obj.at("id").get<int>();
      if (obj.contains("start")) {
        o.start = {obj.at("start").at(0).get<double>(),
                   obj.at("start").at(1).get<double>()};
      }
      if (obj.contains("velocity")) {
        o.velocity = {obj.at("velocity").at(0).get<double>(),
                      obj.at("velocity").at(1).get<double>()};
      }
      if (obj.contains("size")) {
        o.box_w = obj.at("size").at(0).get<double>();
        o.box_h = obj.at("size").at(1).get<double>();
      }
      if (obj.contains("feature")) {
        o.gt_feature = obj.at("feature").get<std::vector<double>>();
      }
      if (obj.contains("stable_dims")) {
        o.stable_dims = obj.at("stable_dims").get<std::vector<int>>();
      }
      spec.objects.push_back(std::move(o));
    }
    if (doc.contains("draw")) {
      const auto& d = doc.at("draw");
      spec.draw.stable_per_object = d.value("stable_per_object", 0);
      spec.draw.disjoint_stable = d.value("disjoint_stable", true);
      spec.draw.shared_unstable = d.value("shared_unstable", false);
      spec.draw.stable_low = d.value("stable_low", 0.75);
      spec.draw.stable_high = d.value("stable_high", 1.0);
      spec.draw.unstable_low = d.value("unstable_low", 0.2);
      spec.draw.unstable_high = d.value("unstable_high", 0.7);
    }
    return spec;
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string metrics_to_json(const mot::MetricsReport& report) {
  json doc;
  doc["idsw_norm"] = report.idsw_norm;
  doc["total_switches"] = report.total_switches;
  doc["total_gt"] = report.total_gt;
  doc["num_tracks"] = report.num_tracks;
  json frames = json::array();
  for (const auto& fc : report.per_frame) {
    frames.push_back({{"frame", fc.frame}, {"idsw", fc.idsw}, {"gt", fc.gt}});
  }
  doc["per_frame"] = std::move(frames);
  return doc.dump(2) + "\n";
}

std::string sweep_to_csv(const std::vector<mot::SweepRow>& rows) {
  std::ostringstream out;
  out << "method,sigma,mean_idsw_norm,std,seeds\n";
  for (const auto& row : rows) {
    out << row.method << "," << fmt_double(row.sigma) << ","
        << fmt_double(row.mean) << "," << fmt_double(row.stddev) << ","
        << row.seeds << "\n";
  }
  return out.str();
}

std::string sweep_to_json(const std::vector<mot::SweepRow>& rows) {
  json doc = json::array();
  for (const auto& row : rows) {
    doc.push_back({{"method", row.method},
                   {"sigma", row.sigma},
                   {"mean_idsw_norm", row.mean},
                   {"std", row.stddev},
                   {"seeds", row.seeds}});
  }
  return doc.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void atomic_write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path());
  }
  const fs::path tmp = target.parent_path() /
                       (target.filename().string() + ".tmp" +
                        std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace mdflow::io
