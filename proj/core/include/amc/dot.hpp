#pragma once

// Graphviz export of a global model. Nodes carry the state index plus either
// the per-agent location atoms that hold there (default) or a caller-chosen
// atom list; edges carry event names. Oversized models are truncated with an
// explicit marker node.

#include <string>
#include <vector>

#include "amc/formula.hpp"
#include "amc/model.hpp"

namespace amc {

struct DotOptions {
  size_t max_states = 500;
  // Empty means "label with every location atom that holds at the state".
  std::vector<Atom> label_atoms;
  bool use_default_atoms() const { return label_atoms.empty(); }
};

std::string export_dot(const GlobalModel &model, const DotOptions &options = {});

}  // namespace amc
