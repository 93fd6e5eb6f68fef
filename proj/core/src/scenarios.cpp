#include "amc/scenarios.hpp"

#include <sstream>

#include "amc/parser.hpp"

namespace amc {

const char *to_string(AttackKind a) {
  switch (a) {
    case AttackKind::none: return "none";
    case AttackKind::impersonator: return "impersonator";
    case AttackKind::mitm: return "mitm";
  }
  return "?";
}

const char *to_string(ReceiveSemantics r) {
  switch (r) {
    case ReceiveSemantics::copy: return "copy";
    case ReceiveSemantics::max_merge: return "max-merge";
    case ReceiveSemantics::accept_reject: return "accept-reject";
  }
  return "?";
}

const char *to_string(SharedReading s) {
  return s == SharedReading::all_at_end ? "all-at-end" : "any-at-end";
}

const char *to_string(FakeRange f) {
  switch (f) {
    case FakeRange::low_only: return "low-only";
    case FakeRange::high_only: return "high-only";
    case FakeRange::full: return "full";
  }
  return "?";
}

Diagnostics ScenarioConfig::check() const {
  Diagnostics diags;
  auto err = [&](const std::string &m) {
    diags.push_back({Severity::error, m, {}});
  };
  if (agents < 2) err("scenario needs at least 2 agents");
  if (attack == AttackKind::mitm && agents < 3)
    err("man-in-the-middle scenarios need at least 3 agents");
  if (data_lo > data_hi || info_lo > info_hi || quality_lo > quality_hi)
    err("empty variable bounds");
  if (quality_threshold < quality_lo || quality_threshold > quality_hi)
    err("quality threshold outside quality bounds");
  return diags;
}

std::string intruder_name(const ScenarioConfig &config) {
  switch (config.attack) {
    case AttackKind::impersonator: return "Imp";
    case AttackKind::mitm: return "Mim";
    case AttackKind::none: return "";
  }
  return "";
}

namespace {

struct RingMember {
  std::string name;   // agent name
  std::string tag;    // id used inside event names ("1", "2", "mim", ...)
  bool honest = true;
};

class Generator {
 public:
  explicit Generator(const ScenarioConfig &config) : cfg_(config) {}

  std::string honest_only() {
    for (int i = 1; i <= cfg_.agents; ++i)
      ring_.push_back({"AI" + std::to_string(i), std::to_string(i), true});
    std::ostringstream out;
    for (int i = 1; i <= cfg_.agents; ++i) emit_honest(out, i);
    return out.str();
  }

  std::string with_attack() {
    std::ostringstream out;
    if (cfg_.attack == AttackKind::impersonator) {
      // The compromised agent replaces the highest-ID ring member.
      for (int i = 1; i < cfg_.agents; ++i)
        ring_.push_back({"AI" + std::to_string(i), std::to_string(i), true});
      ring_.push_back({"Imp", std::to_string(cfg_.agents), false});
      for (int i = 1; i < cfg_.agents; ++i) emit_honest(out, i);
      emit_impersonator(out);
      return out.str();
    }
    // Mitm: honest ring of n-1 agents plus an interposed extra agent on the
    // link(s) between agents 1 and 2.
    mitm_ = true;
    for (int i = 1; i < cfg_.agents; ++i)
      ring_.push_back({"AI" + std::to_string(i), std::to_string(i), true});
    for (int i = 1; i < cfg_.agents; ++i) emit_honest(out, i);
    emit_mitm(out);
    return out.str();
  }

 private:
  // 1-based ring positions; member i sends to i+1 and receives from i-1,
  // cyclically.
  const RingMember &member(int pos) const {
    return ring_[(pos - 1 + ring_.size()) % ring_.size()];
  }

  static std::string share_event(const std::string &from, const std::string &to) {
    return "share_" + from + "_with_" + to;
  }

  // Receiving transitions for an agent at `src`, arriving from `sender`
  // (agent name) via `event`. One transition for copy semantics, a guarded
  // accept/keep pair for max-merge and accept-reject.
  void emit_receive(std::ostringstream &out, const std::string &src,
                    const std::string &dst, const std::string &event,
                    const std::string &sender) {
    switch (cfg_.receive) {
      case ReceiveSemantics::copy:
        out << "  " << src << " -[" << event << " do mqual = " << sender
            << ".mqual]-> " << dst << ";\n";
        break;
      case ReceiveSemantics::max_merge:
      case ReceiveSemantics::accept_reject:
        out << "  " << src << " -[" << event << " when " << sender
            << ".mqual >= mqual do mqual = " << sender << ".mqual]-> " << dst
            << ";\n";
        out << "  " << src << " -[" << event << " when " << sender
            << ".mqual < mqual]-> " << dst << ";\n";
        break;
    }
  }

  void emit_send(std::ostringstream &out, const std::string &src,
                 const std::string &dst, const std::string &event) {
    out << "  " << src << " -[" << event << "]-> " << dst << ";\n";
  }

  void emit_honest(std::ostringstream &out, int pos) {
    const RingMember &self = member(pos);
    const RingMember &prev = member(pos - 1);
    const RingMember &next = member(pos + 1);
    const std::string &id = self.tag;
    std::string recv_event = share_event(prev.tag, id);
    std::string send_event = share_event(id, next.tag);

    out << "agent " << self.name << " {\n";
    out << "  init q0;\n";
    out << "  var data: " << cfg_.data_lo << ".." << cfg_.data_hi << " = "
        << cfg_.data_lo << ";\n";
    out << "  var info: " << cfg_.info_lo << ".." << cfg_.info_hi << " = "
        << cfg_.info_lo << ";\n";
    out << "  var completion: 0..3 = 0;\n";
    out << "  var mqual: " << cfg_.quality_lo << ".." << cfg_.quality_hi
        << " = " << cfg_.quality_lo << ";\n";
    out << "  var mstatus: 0..3 = 0;\n";

    // Data gathering: counted gathering, then preparation is classified as
    // incomplete / complete / too much.
    out << "  q0 -[start_gathering_" << id << "]-> q1;\n";
    out << "  q1 -[gather_data_" << id << " when data < " << cfg_.data_hi
        << " do data += 1]-> q1;\n";
    out << "  q1 -[stop_gathering_" << id
        << " when data < 1 do data = 0, completion = 1]-> q2;\n";
    out << "  q1 -[stop_gathering_" << id
        << " when data >= 1 && data < 2 do data = 0, completion = 2]-> q2;\n";
    out << "  q1 -[stop_gathering_" << id
        << " when data >= 2 do data = 0, completion = 3]-> q2;\n";
    out << "  q0 -[skip_gathering_" << id << "]-> q2;\n";

    // Learning: training accumulates info by completion; stopping classifies
    // the model as undertrained / properly trained / overtrained with the
    // matching quality adjustment.
    out << "  q2 -[start_learning_" << id << "]-> q3;\n";
    out << "  q3 -[keep_learning_" << id
        << " when info < 2 do info += completion]-> q3;\n";
    out << "  q3 -[stop_learning_" << id
        << " when info < 1 && mqual > 0 do info = 0, mstatus = 1, mqual -= 1]-> q4;\n";
    out << "  q3 -[stop_learning_" << id
        << " when info < 1 && mqual <= 0 do info = 0, mstatus = 1]-> q4;\n";
    out << "  q3 -[stop_learning_" << id
        << " when info >= 1 && info < 2 && mqual < 2 do info = 0, mstatus = 2, "
           "mqual += 1]-> q4;\n";
    out << "  q3 -[stop_learning_" << id
        << " when info >= 1 && info < 2 && mqual >= 2 do info = 0, mstatus = 2]-> q4;\n";
    out << "  q3 -[stop_learning_" << id
        << " when info >= 2 && mqual > 0 do info = 0, mstatus = 3, mqual -= 1]-> q4;\n";
    out << "  q3 -[stop_learning_" << id
        << " when info >= 2 && mqual <= 0 do info = 0, mstatus = 3]-> q4;\n";
    out << "  q2 -[skip_learning_" << id << "]-> q5;\n";
    out << "  q4 -[start_sharing_" << id << "]-> q5;\n";

    // Ring exchange; odd positions receive first, even positions send first,
    // which keeps neighbouring exchanges deadlock-free.
    bool odd = pos % 2 == 1;
    int prev_pos = pos == 1 ? static_cast<int>(ring_.size()) : pos - 1;
    int next_pos = pos == static_cast<int>(ring_.size()) ? 1 : pos + 1;
    bool direct_send = !(mitm_ && !cfg_.keep_direct_link &&
                         intercepted_link(pos, next_pos));
    bool direct_recv = !(mitm_ && !cfg_.keep_direct_link &&
                         intercepted_link(prev_pos, pos));
    if (odd) {
      if (direct_recv) emit_receive(out, "q5", "q6", recv_event, prev.name);
      if (direct_send) emit_send(out, "q6", "q7", send_event);
    } else {
      if (direct_send) emit_send(out, "q5", "q6", send_event);
      if (direct_recv) emit_receive(out, "q6", "q7", recv_event, prev.name);
    }
    if (mitm_) emit_mitm_alternatives(out, pos, odd);

    out << "  q7 -[end_sharing_" << id << "]-> q8;\n";
    out << "  q8 -[wait_" << id << "]-> q8;\n";
    out << "  q8 -[repeat_" << id << "]-> q3;\n";
    out << "}\n\n";
  }

  // Links carrying the extra man-in-the-middle alternatives: 1 -> 2 always;
  // with only two honest agents the 2 -> 1 link runs between the same pair
  // and is interposed as well.
  bool intercepted_link(int from_pos, int to_pos) const {
    if (from_pos == 1 && to_pos == 2) return true;
    return ring_.size() == 2 && from_pos == 2 && to_pos == 1;
  }

  void emit_mitm_alternatives(std::ostringstream &out, int pos, bool odd) {
    int prev_pos = pos == 1 ? static_cast<int>(ring_.size()) : pos - 1;
    int next_pos = pos == static_cast<int>(ring_.size()) ? 1 : pos + 1;
    const std::string &id = member(pos).tag;
    std::string send_src = odd ? "q6" : "q5";
    std::string send_dst = odd ? "q7" : "q6";
    std::string recv_src = odd ? "q5" : "q6";
    std::string recv_dst = odd ? "q6" : "q7";
    if (intercepted_link(pos, next_pos))
      emit_send(out, send_src, send_dst, share_event(id, "mim"));
    if (intercepted_link(prev_pos, pos))
      emit_receive(out, recv_src, recv_dst, share_event("mim", id), "Mim");
  }

  void emit_impersonator(std::ostringstream &out) {
    int pos = cfg_.agents;
    const RingMember &prev = member(pos - 1);
    const RingMember &next = member(pos + 1);
    const std::string &id = member(pos).tag;
    bool odd = pos % 2 == 1;

    out << "agent Imp {\n";
    out << "  init p0;\n";
    out << "  var mqual: " << cfg_.quality_lo << ".." << cfg_.quality_hi
        << " = " << cfg_.quality_lo << ";\n";
    // No gathering or learning; the advertised quality is fabricated before
    // each round of the sharing protocol.
    int fake_lo = cfg_.fake == FakeRange::high_only ? cfg_.quality_hi
                                                    : cfg_.quality_lo;
    int fake_hi = cfg_.fake == FakeRange::low_only ? cfg_.quality_lo
                                                   : cfg_.quality_hi;
    for (int v = fake_lo; v <= fake_hi; ++v)
      out << "  p0 -[fake_quality_" << v << " do mqual = " << v << "]-> p1;\n";
    std::string recv_event = share_event(prev.tag, id);
    std::string send_event = share_event(id, next.tag);
    if (odd) {
      out << "  p1 -[" << recv_event << "]-> p2;\n";
      out << "  p2 -[" << send_event << "]-> p3;\n";
    } else {
      out << "  p1 -[" << send_event << "]-> p2;\n";
      out << "  p2 -[" << recv_event << "]-> p3;\n";
    }
    out << "  p3 -[imp_repeat]-> p0;\n";
    out << "}\n";
  }

  void emit_mitm(std::ostringstream &out) {
    out << "agent Mim {\n";
    out << "  init m0;\n";
    out << "  var mqual: " << cfg_.quality_lo << ".." << cfg_.quality_hi
        << " = " << cfg_.quality_lo << ";\n";
    // Interception stores the sender's advertised quality; delivery hands
    // the stored model to the receiver. All self-loops at one location, so
    // honest receivers cannot tell the source apart.
    int n = static_cast<int>(ring_.size());
    for (int from = 1; from <= n; ++from) {
      int to = from == n ? 1 : from + 1;
      if (!intercepted_link(from, to)) continue;
      out << "  m0 -[" << share_event(member(from).tag, "mim")
          << " do mqual = " << member(from).name << ".mqual]-> m0;\n";
      out << "  m0 -[" << share_event("mim", member(to).tag) << "]-> m0;\n";
    }
    out << "}\n";
  }

  const ScenarioConfig &cfg_;
  std::vector<RingMember> ring_;
  bool mitm_ = false;
};

SystemSpec parse_or_die(const std::string &text, const std::string &what) {
  auto parsed = parse_system(text);
  if (!parsed.ok()) {
    std::string msg = "generated " + what + " does not parse:";
    for (const auto &d : parsed.diags) msg += "\n  " + format_diagnostic(d);
    throw ContractError(msg);
  }
  return std::move(*parsed.spec);
}

void require_valid_config(const ScenarioConfig &config) {
  Diagnostics diags = config.check();
  if (has_errors(diags)) {
    std::string msg = "invalid scenario config:";
    for (const auto &d : diags) msg += " " + d.message + ";";
    throw ContractError(msg);
  }
}

std::string scenario_name(const ScenarioConfig &config) {
  return std::string("ring_") + to_string(config.attack) + "_n" +
         std::to_string(config.agents);
}

}  // namespace

std::string scenario_source(const ScenarioConfig &config) {
  require_valid_config(config);
  Generator gen(config);
  return config.attack == AttackKind::none ? gen.honest_only()
                                           : gen.with_attack();
}

SystemSpec gen_honest(const ScenarioConfig &config) {
  require_valid_config(config);
  Generator gen(config);
  SystemSpec spec = parse_or_die(gen.honest_only(), "honest system");
  spec.name = scenario_name(config);
  return spec;
}

SystemSpec gen_attack(const ScenarioConfig &config) {
  require_valid_config(config);
  if (config.attack == AttackKind::none)
    throw ContractError("gen_attack requires an attack kind");
  Generator gen(config);
  SystemSpec spec = parse_or_die(gen.with_attack(), "attack system");
  spec.name = scenario_name(config);
  return spec;
}

ValidateResult gen_system(const ScenarioConfig &config) {
  SystemSpec spec = config.attack == AttackKind::none ? gen_honest(config)
                                                      : gen_attack(config);
  ValidateResult result = validate_system(spec);
  if (result.ok()) result.system->name = spec.name;
  return result;
}

std::string phi_text(const ScenarioConfig &config, PhiVariant variant) {
  require_valid_config(config);
  if (config.attack == AttackKind::none)
    throw ContractError("no intruder to quantify: attack is 'none'");
  int honest = config.agents - 1;
  const char *join = variant == PhiVariant::all_of ? " && " : " || ";

  std::ostringstream shared;
  const char *shared_join =
      config.shared == SharedReading::all_at_end ? " && " : " || ";
  for (int i = 1; i <= honest; ++i) {
    if (i > 1) shared << shared_join;
    shared << "AI" << i << "@q8";
  }

  // The quality conjuncts range over every model-quality variable in the
  // system, the intruder's included.
  std::ostringstream quality;
  for (int i = 1; i <= honest; ++i) {
    if (i > 1) quality << join;
    quality << "AI" << i << ".mqual <= " << config.quality_threshold;
  }
  quality << join << intruder_name(config)
          << ".mqual <= " << config.quality_threshold;

  std::ostringstream out;
  out << "<<" << intruder_name(config) << ">> G ((" << shared.str() << ") -> ("
      << quality.str() << "))";
  return out.str();
}

FormulaAst phi(const ScenarioConfig &config, PhiVariant variant) {
  std::string text = phi_text(config, variant);
  auto parsed = parse_formula(text);
  if (!parsed.ok()) throw ContractError("generated formula does not parse");
  return std::move(*parsed.formula);
}

}  // namespace amc
