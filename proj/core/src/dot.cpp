#include "amc/dot.hpp"

#include <sstream>

namespace amc {

namespace {

std::string escape(const std::string &s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string export_dot(const GlobalModel &model, const DotOptions &options) {
  std::ostringstream out;
  const ValidatedSystem &sys = model.system();
  size_t shown = std::min<size_t>(options.max_states, model.state_count());
  bool truncated = shown < model.state_count();

  out << "digraph \"" << escape(sys.name) << "\" {\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=box, fontsize=10];\n";

  for (uint32_t s = 0; s < shown; ++s) {
    std::string label = std::to_string(s);
    if (options.use_default_atoms()) {
      // Location atoms that hold: one per agent.
      for (int a = 0; a < model.agent_count(); ++a) {
        const ConcreteAgent &agent = model.agent(a);
        label += a == 0 ? "\n" : " ";
        label += sys.agents[a].name + "@" +
                 sys.agents[a]
                     .locations[agent.location_of(model.local_of(s, a))];
      }
    } else {
      bool first = true;
      for (const Atom &atom : options.label_atoms) {
        if (!eval_atom(model, s, atom)) continue;
        label += first ? "\n" : " ";
        label += to_string(atom, sys);
        first = false;
      }
    }
    out << "  s" << s << " [label=\"" << escape(label) << "\"";
    if (s == model.initial_state()) out << ", peripheries=2";
    out << "];\n";
  }

  uint64_t skipped_edges = 0;
  for (const Edge &e : model.edges()) {
    if (e.src >= shown || e.dst >= shown) {
      ++skipped_edges;
      continue;
    }
    out << "  s" << e.src << " -> s" << e.dst << " [label=\""
        << escape(sys.events[e.event]) << "\"];\n";
  }

  if (truncated) {
    out << "  truncated [shape=plaintext, label=\""
        << (model.state_count() - shown) << " more states and "
        << skipped_edges << " more transitions not shown\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace amc
