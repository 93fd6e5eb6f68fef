#include "amc/verifier.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <sstream>

namespace amc {

const char *to_string(VerdictValue v) {
  switch (v) {
    case VerdictValue::TRUE_: return "TRUE";
    case VerdictValue::FALSE_: return "FALSE";
    case VerdictValue::INCONCLUSIVE: return "INCONCLUSIVE";
  }
  return "?";
}

const char *to_string(EngineKind e) {
  switch (e) {
    case EngineKind::lower: return "lower";
    case EngineKind::upper: return "upper";
    case EngineKind::exact: return "exact";
    case EngineKind::combined: return "combined";
  }
  return "?";
}

UniformStrategy UniformStrategy::empty_for(const GlobalModel &model,
                                           std::span<const int> coalition) {
  UniformStrategy s;
  s.coalition.assign(coalition.begin(), coalition.end());
  for (int a : coalition) {
    if (a < 0 || a >= model.agent_count())
      throw ContractError("unknown agent in coalition");
    s.choice.emplace_back(model.agent(a).candidate_count(), NO_CHOICE);
  }
  return s;
}

int UniformStrategy::coalition_pos(int agent) const {
  for (size_t i = 0; i < coalition.size(); ++i)
    if (coalition[i] == agent) return static_cast<int>(i);
  return -1;
}

std::string UniformStrategy::describe(const GlobalModel &model) const {
  std::ostringstream out;
  for (size_t pos = 0; pos < coalition.size(); ++pos) {
    const auto &sys_agent = model.system().agents[coalition[pos]];
    for (uint32_t local = 0; local < choice[pos].size(); ++local) {
      if (choice[pos][local] == NO_CHOICE) continue;
      out << sys_agent.name << ": "
          << describe_local(model, coalition[pos], local) << " -> "
          << model.system().events[choice[pos][local]] << '\n';
    }
  }
  return out.str();
}

namespace {

std::vector<bool> eval_pred_all(const GlobalModel &m, const StatePredicate &p) {
  std::vector<bool> out(m.state_count());
  for (uint32_t s = 0; s < m.state_count(); ++s)
    out[s] = eval_state_pred(m, s, p);
  return out;
}

// Shared selection machinery for the fixpoint engines. A selection assigns
// one protocol event to each coalition agent at a given global state; an
// enabled event is retained if it involves no coalition agent or if every
// involved coalition agent selected it.
struct EngineContext {
  const GlobalModel &m;
  std::vector<int> coalition;
  // Per event: positions (into coalition) of the coalition agents sharing it.
  std::vector<std::vector<int>> event_positions;

  EngineContext(const GlobalModel &model, std::span<const int> agents)
      : m(model), coalition(agents.begin(), agents.end()) {
    event_positions.resize(m.system().events.size());
    for (size_t e = 0; e < event_positions.size(); ++e)
      for (int a : m.system().event_agents[e]) {
        auto it = std::find(coalition.begin(), coalition.end(), a);
        if (it != coalition.end())
          event_positions[e].push_back(
              static_cast<int>(it - coalition.begin()));
      }
  }

  // True iff some selection, honoring committed choices in `sigma` when
  // given, leaves a nonempty enabled set entirely inside `target`. With
  // `commit`, the first (canonical) successful selection's fresh choices are
  // written back into `sigma` — first commitment wins.
  bool exists_good_selection(uint32_t s, const std::vector<bool> &target,
                             UniformStrategy *sigma, bool commit) const {
    auto out = m.out_edges(s);
    if (out.empty()) return false;

    bool have_free = false;
    for (const Edge &e : out) {
      if (!event_positions[e.event].empty()) continue;
      if (!target[e.dst]) return false;  // free events cannot be blocked
      have_free = true;
    }

    const size_t k = coalition.size();
    if (k == 0) return have_free;  // all events free; all lead into target

    // Choice options per coalition member at this state.
    std::vector<std::span<const int>> options(k);
    std::vector<uint32_t> locals(k);
    std::vector<int> fixed(k, -1);
    for (size_t pos = 0; pos < k; ++pos) {
      locals[pos] = m.local_of(s, coalition[pos]);
      const ConcreteAgent &agent = m.agent(coalition[pos]);
      if (sigma && sigma->choice[pos][locals[pos]] != NO_CHOICE)
        fixed[pos] = static_cast<int>(sigma->choice[pos][locals[pos]]);
      options[pos] = agent.protocol(agent.location_of(locals[pos]));
      if (options[pos].empty()) return false;  // no selectable event
    }

    // Odometer over the joint options, canonical (position-major,
    // ascending event id); fixed positions contribute one value.
    std::vector<size_t> cursor(k, 0);
    std::vector<int> sel(k);
    while (true) {
      for (size_t pos = 0; pos < k; ++pos)
        sel[pos] = fixed[pos] >= 0 ? fixed[pos]
                                   : options[pos][cursor[pos]];
      bool ok = true, any_ctrl = false;
      for (const Edge &e : out) {
        const auto &positions = event_positions[e.event];
        if (positions.empty()) continue;
        bool retained = true;
        for (int pos : positions)
          if (sel[pos] != static_cast<int>(e.event)) {
            retained = false;
            break;
          }
        if (!retained) continue;
        if (!target[e.dst]) {
          ok = false;
          break;
        }
        any_ctrl = true;
      }
      if (ok && (have_free || any_ctrl)) {
        if (sigma && commit)
          for (size_t pos = 0; pos < k; ++pos)
            if (fixed[pos] < 0)
              sigma->choice[pos][locals[pos]] = static_cast<uint32_t>(sel[pos]);
        return true;
      }
      size_t pos = 0;
      for (; pos < k; ++pos) {
        if (fixed[pos] >= 0) continue;  // single value
        if (++cursor[pos] < options[pos].size()) break;
        cursor[pos] = 0;
      }
      if (pos == k) return false;
    }
  }
};

// Retained outgoing edges of `s` under a (total-on-reachable) strategy.
// Throws when the strategy misses a choice or violates the protocol at a
// local state this state exposes.
template <typename EdgeFn>
void for_each_retained(const GlobalModel &m, const EngineContext &ctx,
                       const UniformStrategy &sigma, uint32_t s, EdgeFn &&fn) {
  for (size_t pos = 0; pos < sigma.coalition.size(); ++pos) {
    uint32_t local = m.local_of(s, sigma.coalition[pos]);
    uint32_t choice = sigma.choice[pos][local];
    if (choice == NO_CHOICE)
      throw ContractError(
          "strategy is not total on the local states reachable under it");
    const ConcreteAgent &agent = m.agent(sigma.coalition[pos]);
    auto prot = agent.protocol(agent.location_of(local));
    if (!std::binary_search(prot.begin(), prot.end(),
                            static_cast<int>(choice)))
      throw ContractError("strategy violates the protocol");
  }
  for (const Edge &e : m.out_edges(s)) {
    bool retained = true;
    for (int pos : ctx.event_positions[e.event])
      if (sigma.choice[pos][m.local_of(s, sigma.coalition[pos])] != e.event) {
        retained = false;
        break;
      }
    if (retained) fn(e);
  }
}

}  // namespace

bool check_strategy(const GlobalModel &m, const UniformStrategy &sigma,
                    const FlatFormula &goal) {
  if (sigma.coalition != goal.coalition)
    throw ContractError("strategy coalition differs from the formula's");
  EngineContext ctx(m, goal.coalition);

  std::vector<bool> p_holds = eval_pred_all(m, goal.lhs);
  std::vector<bool> q_holds;
  if (goal.op == TemporalOp::until) q_holds = eval_pred_all(m, goal.rhs);

  // Reachability of the outcome-restricted subgraph. Every reachable state
  // must keep at least one retained move (outcome paths are infinite).
  std::vector<bool> visited(m.state_count(), false);
  std::vector<uint32_t> queue{m.initial_state()};
  visited[m.initial_state()] = true;
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    uint32_t s = queue[qi];
    size_t retained = 0;
    bool ok = true;
    for_each_retained(m, ctx, sigma, s, [&](const Edge &e) {
      ++retained;
      if (goal.op == TemporalOp::next_op && s == m.initial_state() &&
          !p_holds[e.dst])
        ok = false;
      if (!visited[e.dst]) {
        visited[e.dst] = true;
        queue.push_back(e.dst);
      }
    });
    if (retained == 0) return false;  // reachable deadlock
    if (!ok) return false;            // X: bad successor of the initial state
    if (goal.op == TemporalOp::globally && !p_holds[s]) return false;
  }

  if (goal.op != TemporalOp::until) return true;

  // p U q: within the region reachable through not-yet-q prefixes, every
  // state must satisfy p, and the region must admit no cycle (a lasso that
  // never reaches q) — deadlocks were excluded above.
  enum : uint8_t { WHITE, GRAY, BLACK };
  std::vector<uint8_t> color(m.state_count(), WHITE);
  struct Frame {
    uint32_t state;
    std::vector<uint32_t> succs;
    size_t next = 0;
  };
  std::vector<Frame> stack;
  auto push = [&](uint32_t s) -> bool {
    if (q_holds[s]) return true;  // obligations discharged at q
    if (!p_holds[s]) return false;
    color[s] = GRAY;
    Frame f;
    f.state = s;
    for_each_retained(m, ctx, sigma, s,
                      [&](const Edge &e) { f.succs.push_back(e.dst); });
    stack.push_back(std::move(f));
    return true;
  };
  if (!push(m.initial_state())) return q_holds[m.initial_state()];
  while (!stack.empty()) {
    Frame &f = stack.back();
    if (f.next == f.succs.size()) {
      color[f.state] = BLACK;
      stack.pop_back();
      continue;
    }
    uint32_t t = f.succs[f.next++];
    if (q_holds[t]) continue;
    if (color[t] == GRAY) return false;  // not-q cycle
    if (color[t] == BLACK) continue;
    if (!push(t)) return false;
  }
  return true;
}

std::vector<bool> pre_perfect(const GlobalModel &m,
                              std::span<const int> coalition,
                              const std::vector<bool> &target) {
  if (target.size() != m.state_count())
    throw ContractError("target set size mismatch");
  EngineContext ctx(m, coalition);
  std::vector<bool> out(m.state_count(), false);
  for (uint32_t s = 0; s < m.state_count(); ++s)
    out[s] = ctx.exists_good_selection(s, target, nullptr, false);
  return out;
}

namespace {

// Greatest fixpoint of Q -> [p] ∩ pre(Q), worklist over predecessors.
std::vector<bool> gfp_stay(const GlobalModel &m, const EngineContext &ctx,
                           const std::vector<bool> &p_holds,
                           UniformStrategy *sigma) {
  std::vector<bool> q = p_holds;
  if (!sigma) {
    std::deque<uint32_t> work;
    std::vector<bool> queued(m.state_count(), false);
    for (uint32_t s = 0; s < m.state_count(); ++s)
      if (q[s]) {
        work.push_back(s);
        queued[s] = true;
      }
    while (!work.empty()) {
      uint32_t s = work.front();
      work.pop_front();
      queued[s] = false;
      if (!q[s]) continue;
      if (ctx.exists_good_selection(s, q, nullptr, false)) continue;
      q[s] = false;
      for (uint32_t ei : m.in_edge_indices(s)) {
        uint32_t r = m.edges()[ei].src;
        if (q[r] && !queued[r]) {
          work.push_back(r);
          queued[r] = true;
        }
      }
    }
    return q;
  }
  // Committed variant: deterministic full sweeps in canonical state order;
  // commitments are monotone, states whose classes cannot honor them drop out.
  bool changed = true;
  while (changed) {
    changed = false;
    for (uint32_t s = 0; s < m.state_count(); ++s) {
      if (!q[s]) continue;
      if (!ctx.exists_good_selection(s, q, sigma, true)) {
        q[s] = false;
        changed = true;
      }
    }
  }
  return q;
}

// Least fixpoint of Q -> [t] ∪ ([p] ∩ pre(Q)).
std::vector<bool> lfp_reach(const GlobalModel &m, const EngineContext &ctx,
                            const std::vector<bool> &p_holds,
                            const std::vector<bool> &t_holds,
                            UniformStrategy *sigma) {
  std::vector<bool> q = t_holds;
  if (!sigma) {
    std::deque<uint32_t> work;
    std::vector<bool> queued(m.state_count(), false);
    auto enqueue_preds = [&](uint32_t t) {
      for (uint32_t ei : m.in_edge_indices(t)) {
        uint32_t r = m.edges()[ei].src;
        if (!q[r] && p_holds[r] && !queued[r]) {
          work.push_back(r);
          queued[r] = true;
        }
      }
    };
    for (uint32_t s = 0; s < m.state_count(); ++s)
      if (q[s]) enqueue_preds(s);
    while (!work.empty()) {
      uint32_t s = work.front();
      work.pop_front();
      queued[s] = false;
      if (q[s]) continue;
      if (!ctx.exists_good_selection(s, q, nullptr, false)) continue;
      q[s] = true;
      enqueue_preds(s);
    }
    return q;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (uint32_t s = 0; s < m.state_count(); ++s) {
      if (q[s] || !p_holds[s]) continue;
      if (ctx.exists_good_selection(s, q, sigma, true)) {
        q[s] = true;
        changed = true;
      }
    }
  }
  return q;
}

}  // namespace

bool verify_upper(const GlobalModel &m, const FlatFormula &f) {
  EngineContext ctx(m, f.coalition);
  switch (f.op) {
    case TemporalOp::next_op: {
      std::vector<bool> p_holds = eval_pred_all(m, f.lhs);
      return ctx.exists_good_selection(m.initial_state(), p_holds, nullptr,
                                       false);
    }
    case TemporalOp::globally: {
      std::vector<bool> p_holds = eval_pred_all(m, f.lhs);
      auto q = gfp_stay(m, ctx, p_holds, nullptr);
      return q[m.initial_state()];
    }
    case TemporalOp::until: {
      std::vector<bool> p_holds = eval_pred_all(m, f.lhs);
      std::vector<bool> t_holds = eval_pred_all(m, f.rhs);
      auto q = lfp_reach(m, ctx, p_holds, t_holds, nullptr);
      return q[m.initial_state()];
    }
    case TemporalOp::finally_op:
      throw ContractError("F must be classified to U before verification");
  }
  return false;
}

namespace {

// Extends sigma with canonical choices over everything reachable under it,
// so check_strategy can rule on a total strategy.
bool complete_strategy(const GlobalModel &m, const EngineContext &ctx,
                       UniformStrategy &sigma) {
  std::vector<bool> visited(m.state_count(), false);
  std::vector<uint32_t> queue{m.initial_state()};
  visited[m.initial_state()] = true;
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    uint32_t s = queue[qi];
    for (size_t pos = 0; pos < sigma.coalition.size(); ++pos) {
      uint32_t local = m.local_of(s, sigma.coalition[pos]);
      if (sigma.choice[pos][local] != NO_CHOICE) continue;
      const ConcreteAgent &agent = m.agent(sigma.coalition[pos]);
      auto prot = agent.protocol(agent.location_of(local));
      if (prot.empty()) return false;  // dead local state: no legal choice
      sigma.choice[pos][local] = static_cast<uint32_t>(prot.front());
    }
    for_each_retained(m, ctx, sigma, s, [&](const Edge &e) {
      if (!visited[e.dst]) {
        visited[e.dst] = true;
        queue.push_back(e.dst);
      }
    });
  }
  return true;
}

}  // namespace

Verdict verify_lower(const GlobalModel &m, const FlatFormula &f) {
  EngineContext ctx(m, f.coalition);
  UniformStrategy sigma = UniformStrategy::empty_for(m, f.coalition);
  bool candidate = false;
  switch (f.op) {
    case TemporalOp::next_op: {
      std::vector<bool> p_holds = eval_pred_all(m, f.lhs);
      candidate =
          ctx.exists_good_selection(m.initial_state(), p_holds, &sigma, true);
      break;
    }
    case TemporalOp::globally: {
      std::vector<bool> p_holds = eval_pred_all(m, f.lhs);
      auto q = gfp_stay(m, ctx, p_holds, &sigma);
      candidate = q[m.initial_state()];
      break;
    }
    case TemporalOp::until: {
      std::vector<bool> p_holds = eval_pred_all(m, f.lhs);
      std::vector<bool> t_holds = eval_pred_all(m, f.rhs);
      auto q = lfp_reach(m, ctx, p_holds, t_holds, &sigma);
      candidate = q[m.initial_state()];
      break;
    }
    case TemporalOp::finally_op:
      throw ContractError("F must be classified to U before verification");
  }
  if (!candidate) return {VerdictValue::FALSE_, EngineKind::lower, {}};
  // The commitment map is only a certificate candidate; confirm it end to
  // end before claiming TRUE.
  if (!complete_strategy(m, ctx, sigma))
    return {VerdictValue::FALSE_, EngineKind::lower, {}};
  if (!check_strategy(m, sigma, f))
    return {VerdictValue::FALSE_, EngineKind::lower, {}};
  return {VerdictValue::TRUE_, EngineKind::lower, std::move(sigma)};
}

namespace {

class ExactSearch {
 public:
  ExactSearch(const GlobalModel &m, const FlatFormula &f, uint64_t budget,
              Deadline deadline)
      : m_(m),
        f_(f),
        ctx_(m, f.coalition),
        sigma_(UniformStrategy::empty_for(m, f.coalition)),
        budget_(budget),
        deadline_(deadline) {
    p_holds_ = eval_pred_all(m, f.lhs);
    if (f.op == TemporalOp::until) q_holds_ = eval_pred_all(m, f.rhs);
  }

  Verdict run() {
    SearchState root;
    root.queue.push_back(m_.initial_state());
    root.visited.assign(m_.state_count(), false);
    root.visited[m_.initial_state()] = true;
    if (f_.op == TemporalOp::until) {
      root.visited_nq.assign(m_.state_count(), false);
      root.queue_nq.push_back(true);
      root.visited_nq[m_.initial_state()] = true;
    }
    if (search(root))
      return {VerdictValue::TRUE_, EngineKind::exact, std::move(sigma_)};
    return {VerdictValue::FALSE_, EngineKind::exact, {}};
  }

 private:
  struct SearchState {
    std::vector<uint32_t> queue;
    std::vector<char> queue_nq;  // parallel to queue for until goals
    size_t head = 0;
    std::vector<bool> visited;
    std::vector<bool> visited_nq;  // reachable with an all-not-q prefix
  };

  void spend(uint64_t n = 1) {
    nodes_ += n;
    if (nodes_ > budget_) throw BudgetError("exact engine node budget exceeded");
    if (deadline_ && (nodes_ & 0xfff) == 0 &&
        std::chrono::steady_clock::now() > *deadline_)
      throw BudgetError("exact engine deadline exceeded");
  }

  // Depth-first over commitment alternatives; between commitments the
  // outcome exploration is forced, so the search tree branches only at the
  // first visit of an unassigned coalition local state.
  bool search(SearchState st) {
    const bool until = f_.op == TemporalOp::until;
    while (st.head < st.queue.size()) {
      uint32_t s = st.queue[st.head];
      bool via_nq = until && st.queue_nq[st.head];
      spend();

      // Commit choices for any unassigned coalition locals exposed here.
      for (size_t pos = 0; pos < sigma_.coalition.size(); ++pos) {
        uint32_t local = m_.local_of(s, sigma_.coalition[pos]);
        if (sigma_.choice[pos][local] != NO_CHOICE) continue;
        const ConcreteAgent &agent = m_.agent(sigma_.coalition[pos]);
        auto prot = agent.protocol(agent.location_of(local));
        if (prot.empty()) return false;  // dead local state: no legal choice
        for (int e : prot) {
          sigma_.choice[pos][local] = static_cast<uint32_t>(e);
          spend();
          if (search(st)) return true;  // keep winning commitments
        }
        sigma_.choice[pos][local] = NO_CHOICE;
        return false;
      }

      ++st.head;
      // Expand: retained edges only; prune on deadlock and on goal-state
      // violations (the closing check_strategy re-validates everything,
      // including not-q cycles for until goals).
      size_t retained = 0;
      bool bad = false;
      for_each_retained(m_, ctx_, sigma_, s, [&](const Edge &e) {
        ++retained;
        if (f_.op == TemporalOp::next_op && s == m_.initial_state() &&
            !p_holds_[e.dst])
          bad = true;
        bool succ_nq = via_nq && !q_holds_.empty() && !q_holds_[s];
        if (!st.visited[e.dst] || (until && succ_nq && !st.visited_nq[e.dst])) {
          st.visited[e.dst] = true;
          if (until) {
            if (succ_nq) st.visited_nq[e.dst] = true;
            st.queue_nq.push_back(succ_nq);
          }
          st.queue.push_back(e.dst);
        }
      });
      if (retained == 0 || bad) return false;
      if (f_.op == TemporalOp::globally && !p_holds_[s]) return false;
      if (until && via_nq && !q_holds_[s] && !p_holds_[s]) return false;
    }
    // Exploration closed under the current (total-on-reachable) assignment.
    return check_strategy(m_, sigma_, f_);
  }

  const GlobalModel &m_;
  const FlatFormula &f_;
  EngineContext ctx_;
  UniformStrategy sigma_;
  std::vector<bool> p_holds_, q_holds_;
  uint64_t budget_;
  uint64_t nodes_ = 0;
  Deadline deadline_;
};

}  // namespace

Verdict verify_exact(const GlobalModel &m, const FlatFormula &f,
                     uint64_t node_budget, Deadline deadline) {
  if (f.op == TemporalOp::finally_op)
    throw ContractError("F must be classified to U before verification");
  return ExactSearch(m, f, node_budget, deadline).run();
}

VerificationReport verify(const GlobalModel &m, const FlatFormula &f,
                          const VerifyOptions &options) {
  VerificationReport report;
  report.formula_text = f.text;
  report.stats = m.stats();
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(options.timeout_seconds));

  auto timed = [&](EngineKind kind, auto &&fn) {
    auto t0 = std::chrono::steady_clock::now();
    auto record = [&] {
      report.timings.push_back(
          {kind, std::chrono::duration<double>(
                     std::chrono::steady_clock::now() - t0)
                     .count()});
    };
    try {
      auto result = fn();
      record();
      return result;
    } catch (...) {
      record();  // budget and deadline aborts still count as engine time
      throw;
    }
  };

  switch (options.mode) {
    case VerifyMode::lower:
      report.verdict = timed(EngineKind::lower,
                             [&] { return verify_lower(m, f); });
      return report;
    case VerifyMode::upper: {
      bool up = timed(EngineKind::upper, [&] { return verify_upper(m, f); });
      report.verdict = {up ? VerdictValue::TRUE_ : VerdictValue::FALSE_,
                        EngineKind::upper,
                        {}};
      return report;
    }
    case VerifyMode::exact:
      try {
        report.verdict =
            timed(EngineKind::exact, [&] {
              return verify_exact(m, f, options.exact_node_budget, deadline);
            });
      } catch (const BudgetError &) {
        report.verdict = {VerdictValue::INCONCLUSIVE, EngineKind::combined, {}};
      }
      return report;
    case VerifyMode::auto_mode:
      break;
  }

  // Cascade: a sound TRUE from the lower engine or a sound FALSE from the
  // upper engine settles the formula without the exact search.
  Verdict lower = timed(EngineKind::lower, [&] { return verify_lower(m, f); });
  if (lower.value == VerdictValue::TRUE_) {
    report.verdict = std::move(lower);
    return report;
  }
  bool upper = timed(EngineKind::upper, [&] { return verify_upper(m, f); });
  if (!upper) {
    report.verdict = {VerdictValue::FALSE_, EngineKind::upper, {}};
    return report;
  }
  try {
    report.verdict = timed(EngineKind::exact, [&] {
      return verify_exact(m, f, options.exact_node_budget, deadline);
    });
  } catch (const BudgetError &) {
    report.verdict = {VerdictValue::INCONCLUSIVE, EngineKind::combined, {}};
  }
  return report;
}

}  // namespace amc
