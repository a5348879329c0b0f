#include "udag/graph_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace udag {

namespace {

bool identifier_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c >= 0x80;  // utf-8 continuation and lead bytes pass
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  unsigned char head = static_cast<unsigned char>(s[0]);
  if (!std::isalpha(head) && head != '_' && head < 0x80) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return identifier_char(static_cast<unsigned char>(c)); });
}

}  // namespace

Udag parse_graph(std::istream& in) {
  std::vector<std::string> names;
  std::vector<Edge> directed, undirected;

  auto intern = [&](const std::string& name, int lineno) -> NodeId {
    if (!valid_name(name))
      throw Error(Errc::bad_format,
                  "graph line " + std::to_string(lineno) + ": bad node name '" + name + "'");
    auto it = std::find(names.begin(), names.end(), name);
    if (it != names.end()) return static_cast<NodeId>(it - names.begin());
    names.push_back(name);
    return static_cast<NodeId>(names.size() - 1);
  };

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "node") {
      std::string name;
      if (!(ls >> name))
        throw Error(Errc::bad_format, "graph line " + std::to_string(lineno) + ": node needs a name");
      intern(name, lineno);
      continue;
    }
    std::string op, second, extra;
    if (!(ls >> op >> second) || (ls >> extra))
      throw Error(Errc::bad_format,
                  "graph line " + std::to_string(lineno) + ": expected 'a -> b' or 'a -- b'");
    NodeId a = intern(first, lineno);
    NodeId b = intern(second, lineno);
    if (op == "->")
      directed.emplace_back(a, b);
    else if (op == "<-")
      directed.emplace_back(b, a);
    else if (op == "--")
      undirected.emplace_back(a, b);
    else
      throw Error(Errc::bad_format,
                  "graph line " + std::to_string(lineno) + ": unknown edge op '" + op + "'");
  }
  return Udag(static_cast<int>(names.size()), directed, undirected, names);
}

Udag parse_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::bad_format, "cannot open graph file '" + path + "'");
  return parse_graph(in);
}

void format_graph(std::ostream& out, const Udag& g) {
  NodeSet mentioned;
  for (auto [a, b] : g.arrows()) {
    mentioned.insert(a);
    mentioned.insert(b);
  }
  for (auto [a, b] : g.lines()) {
    mentioned.insert(a);
    mentioned.insert(b);
  }
  for (NodeId v : g.nodes() - mentioned) out << "node " << g.name(v) << "\n";
  for (auto [a, b] : g.arrows()) out << g.name(a) << " -> " << g.name(b) << "\n";
  for (auto [a, b] : g.lines()) out << g.name(a) << " -- " << g.name(b) << "\n";
}

std::string graph_to_string(const Udag& g) {
  std::ostringstream out;
  format_graph(out, g);
  return out.str();
}

void format_ug(std::ostream& out, const Ug& h) {
  NodeSet mentioned;
  for (auto [a, b] : h.edges()) {
    mentioned.insert(a);
    mentioned.insert(b);
  }
  for (NodeId v : h.nodes() - mentioned) out << "node " << h.name(v) << "\n";
  for (auto [a, b] : h.edges()) out << h.name(a) << " -- " << h.name(b) << "\n";
}

void export_dot(std::ostream& out, const Udag& g) {
  out << "digraph {\n";
  for (NodeId v : g.nodes()) out << "  \"" << g.name(v) << "\";\n";
  for (auto [a, b] : g.arrows())
    out << "  \"" << g.name(a) << "\" -> \"" << g.name(b) << "\";\n";
  for (auto [a, b] : g.lines())
    out << "  \"" << g.name(a) << "\" -> \"" << g.name(b) << "\" [dir=none];\n";
  out << "}\n";
}

}  // namespace udag
