#include "mdflow/lp_export.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

#include "mdflow/numfmt.hpp"

namespace mdflow {

namespace {

std::string sanitize(const std::string& name) {
  std::string out;
  out.reserve(name.size());
  for (char c : name) {
    out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  }
  return out;
}

std::string f_var(const FlowNetwork& net, EdgeId e, int dim) {
  return "f_" + lp_node_name(net, net.edge(e).from) + "_" +
         lp_node_name(net, net.edge(e).to) + "_" + std::to_string(dim);
}

std::string b_var(const FlowNetwork& net, EdgeId e) {
  return "b_" + lp_node_name(net, net.edge(e).from) + "_" +
         lp_node_name(net, net.edge(e).to);
}

}  // namespace

std::string lp_node_name(const FlowNetwork& net, NodeId v) {
  return sanitize(net.node_name(v));
}

double big_M(const FlowNetwork& net) {
  double m = -1.0;
  for (const Edge& e : net.edges()) {
    if (e.cap.is_finite()) {
      for (double v : e.cap.values()) m = std::max(m, v);
    }
  }
  if (m < 0.0) {
    throw UnboundedError("network has no finite-capacity edge; model unbounded");
  }
  return m;
}

std::string export_lp(const FlowNetwork& net) {
  if (net.out_edges(net.source()).empty()) {
    throw Error("network has no source-outgoing edge; model is infeasible");
  }
  {
    std::set<std::string> names;
    for (NodeId v = 0; v < net.num_nodes(); ++v) {
      if (!names.insert(lp_node_name(net, v)).second) {
        throw Error("node names collide after sanitization: " +
                    lp_node_name(net, v));
      }
    }
  }

  const bool any_infinite =
      std::any_of(net.edges().begin(), net.edges().end(),
                  [](const Edge& e) { return e.cap.is_infinite(); });
  const double M = any_infinite ? big_M(net) : 0.0;

  std::ostringstream out;
  out << "Maximize\n obj:";
  bool first = true;
  for (EdgeId e : net.out_edges(net.source())) {
    for (int dim = 0; dim < net.k(); ++dim) {
      out << (first ? " " : " + ") << f_var(net, e, dim);
      first = false;
    }
  }
  out << "\nSubject To\n";

  out << "\\ capacity\n";
  for (EdgeId e = 0; e < net.num_edges(); ++e) {
    const CapVec& cap = net.edge(e).cap;
    for (int dim = 0; dim < net.k(); ++dim) {
      const double c = cap.is_finite() ? cap.values()[dim] : M;
      out << " cap_" << lp_node_name(net, net.edge(e).from) << "_"
          << lp_node_name(net, net.edge(e).to) << "_" << dim << ": "
          << f_var(net, e, dim) << " - " << fmt_double(c) << " "
          << b_var(net, e) << " <= 0\n";
    }
  }

  out << "\\ flow cons.\n";
  for (NodeId v = 0; v < net.num_nodes(); ++v) {
    if (!net.is_intermediate(v)) continue;
    for (int dim = 0; dim < net.k(); ++dim) {
      out << " cons_" << lp_node_name(net, v) << "_" << dim << ":";
      bool lead = true;
      for (EdgeId e : net.in_edges(v)) {
        out << (lead ? " " : " + ") << f_var(net, e, dim);
        lead = false;
      }
      for (EdgeId e : net.out_edges(v)) {
        out << " - " << f_var(net, e, dim);
      }
      out << " = 0\n";
    }
  }

  out << "\\ node count\n";
  for (NodeId v = 0; v < net.num_nodes(); ++v) {
    if (!net.is_intermediate(v)) continue;
    out << " node_in_" << lp_node_name(net, v) << ":";
    bool lead = true;
    for (EdgeId e : net.in_edges(v)) {
      out << (lead ? " " : " + ") << b_var(net, e);
      lead = false;
    }
    out << " = 1\n";
    out << " node_out_" << lp_node_name(net, v) << ":";
    lead = true;
    for (EdgeId e : net.out_edges(v)) {
      out << (lead ? " " : " + ") << b_var(net, e);
      lead = false;
    }
    out << " = 1\n";
  }

  out << "\\ total count\n total_source:";
  first = true;
  for (EdgeId e : net.out_edges(net.source())) {
    out << (first ? " " : " + ") << b_var(net, e);
    first = false;
  }
  out << " = " << net.d() << "\n total_sink:";
  first = true;
  for (EdgeId e : net.in_edges(net.sink())) {
    out << (first ? " " : " + ") << b_var(net, e);
    first = false;
  }
  out << " = " << net.d() << "\n";

  out << "\\ non-neg.\nBounds\n";
  for (EdgeId e = 0; e < net.num_edges(); ++e) {
    for (int dim = 0; dim < net.k(); ++dim) {
      out << " " << f_var(net, e, dim) << " >= 0\n";
    }
  }

  out << "Binary\n";
  for (EdgeId e = 0; e < net.num_edges(); ++e) {
    out << " " << b_var(net, e) << "\n";
  }
  out << "End\n";
  return out.str();
}

std::map<std::string, double> read_lp_solution(const std::string& text) {
  std::map<std::string, double> vars;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream row(line);
    std::string name, value, extra;
    if (!(row >> name)) continue;
    if (name[0] == '#') continue;
    if (!(row >> value) || (row >> extra)) {
      throw InputError("solution line " + std::to_string(lineno) +
                       ": expected 'name value'");
    }
    if (!vars.emplace(name, parse_double(value)).second) {
      throw InputError("solution line " + std::to_string(lineno) +
                       ": duplicate variable " + name);
    }
  }
  return vars;
}

Solution solution_from_assignment(const FlowNetwork& net,
                                  const std::map<std::string, double>& vars) {
  std::map<std::string, std::pair<EdgeId, int>> flow_names;
  std::map<std::string, EdgeId> act_names;
  for (EdgeId e = 0; e < net.num_edges(); ++e) {
    act_names[b_var(net, e)] = e;
    for (int dim = 0; dim < net.k(); ++dim) {
      flow_names[f_var(net, e, dim)] = {e, dim};
    }
  }

  Solution sol;
  sol.flow.assign(net.num_edges(), std::vector<double>(net.k(), 0.0));
  sol.active.assign(net.num_edges(), 0);
  for (const auto& [name, value] : vars) {
    if (auto it = flow_names.find(name); it != flow_names.end()) {
      sol.flow[it->second.first][it->second.second] = value;
    } else if (auto jt = act_names.find(name); jt != act_names.end()) {
      sol.active[jt->second] = value > 0.5 ? 1 : 0;
    } else {
      throw InputError("unknown variable in solution: " + name);
    }
  }
  sol.objective = objective_value(net, sol);
  return sol;
}

}  // namespace mdflow
