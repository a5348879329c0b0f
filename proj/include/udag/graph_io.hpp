#pragma once

#include <iosfwd>
#include <string>

#include "udag/graph.hpp"

namespace udag {

/// Text format, one item per line: `a -> b`, `a -- b`, `node a` for isolated
/// nodes, `#` comments. Ids follow first mention.
Udag parse_graph(std::istream& in);
Udag parse_graph_file(const std::string& path);

void format_graph(std::ostream& out, const Udag& g);
std::string graph_to_string(const Udag& g);

void format_ug(std::ostream& out, const Ug& h);

/// DOT rendering; undirected edges are emitted with dir=none so arrows and
/// lines coexist in one digraph.
void export_dot(std::ostream& out, const Udag& g);

}  // namespace udag
