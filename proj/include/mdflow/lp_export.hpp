#pragma once

#include <map>
#include <string>

#include "mdflow/flowcore.hpp"

namespace mdflow {

// Largest finite capacity entry anywhere in the network; the big-M used to
// activate infinite-capacity edges (every path crosses a finite edge, so no
// single dimension can carry more flow than this).
// Throws UnboundedError when the network has no finite-capacity edge.
double big_M(const FlowNetwork& net);

// CPLEX-style LP text for the exact mixed-integer program: continuous
// variables f_<u>_<v>_<dim>, binaries b_<u>_<v>, node ids sanitized to
// [A-Za-z0-9_]. Output is byte-identical for identical input.
std::string export_lp(const FlowNetwork& net);

// Sanitized variable-name fragment for a node.
std::string lp_node_name(const FlowNetwork& net, NodeId v);

// Minimal reader for external-solver output: one "name value" pair per line,
// blank lines and lines starting with '#' ignored.
std::map<std::string, double> read_lp_solution(const std::string& text);

// Maps a variable assignment back onto the network. Missing variables default
// to zero; binaries are rounded. Unknown variable names are an error.
Solution solution_from_assignment(const FlowNetwork& net,
                                  const std::map<std::string, double>& vars);

}  // namespace mdflow
