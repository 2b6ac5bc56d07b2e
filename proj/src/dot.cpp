#include "ibmc/dot.hpp"

#include <sstream>

namespace ibmc {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string guard_label(const Guard& g) {
  if (g.is_epsilon()) return "<eps>";
  if (g.is_stutter()) return "<stut>";
  return g.to_string();
}

}  // namespace

std::string to_dot(const Automaton& a, const std::string& name) {
  std::ostringstream out;
  out << "digraph \"" << escape(name) << "\" {\n";
  out << "  rankdir=LR;\n";
  out << "  node [fontname=\"sans-serif\"];\n";
  int entry = 0;
  for (const auto& id : a.states) {
    out << "  \"" << escape(id) << "\" [";
    if (a.is_box(id)) {
      out << "shape=box, style=filled, fillcolor=black, fontcolor=white";
    } else if (a.is_accepting(id)) {
      out << "shape=doublecircle";
    } else {
      out << "shape=circle";
    }
    out << "];\n";
    if (a.is_initial(id)) {
      out << "  \"__entry" << entry << "\" [shape=point, label=\"\"];\n";
      out << "  \"__entry" << entry << "\" -> \"" << escape(id) << "\";\n";
      ++entry;
    }
  }
  for (const auto& t : a.transitions) {
    out << "  \"" << escape(t.from) << "\" -> \"" << escape(t.to) << "\" [label=\""
        << escape(guard_label(t.guard)) << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace ibmc
