#include <algorithm>
#include <charconv>

#include "hg/analysis.hpp"

namespace hg {

namespace {

using Outcome = CounterexampleReport::Outcome;

std::string join_ids(const std::vector<std::size_t>& ids) {
  std::string out;
  for (auto i : ids) {
    if (!out.empty()) out += ' ';
    out += std::to_string(i);
  }
  return out;
}

void allow_only(const Params& params, std::initializer_list<std::string_view> names) {
  for (const auto& [k, v] : params)
    if (std::find(names.begin(), names.end(), k) == names.end())
      throw Error(ErrorCode::BadParameter, "unknown parameter '" + k + "'");
}

const std::string& required(const Params& params, const std::string& name) {
  auto it = params.find(name);
  if (it == params.end()) throw Error(ErrorCode::BadParameter, "missing parameter '" + name + "'");
  return it->second;
}

std::size_t index_param(const Params& params, const std::string& name, std::size_t bound) {
  const std::string& text = required(params, name);
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || p != text.data() + text.size())
    throw Error(ErrorCode::BadParameter, "parameter '" + name + "' is not an index: " + text);
  if (v >= bound) throw Error(ErrorCode::BadParameter, "parameter '" + name + "' out of range: " + text);
  return v;
}

ActionParamSpec scope_spec() { return {"scope", "scope", false}; }

}  // namespace

std::string_view to_string(NodeStatus s) {
  switch (s) {
    case NodeStatus::Open: return "Open";
    case NodeStatus::Closed: return "Closed";
    case NodeStatus::Discharged: return "Discharged";
    case NodeStatus::Validated: return "Validated";
    case NodeStatus::Refuted: return "Refuted";
    case NodeStatus::Pruned: return "Pruned";
    case NodeStatus::Translated: return "Translated";
  }
  return "?";
}

NodeStatus AnalysisNode::status() const {
  if (pruned) return NodeStatus::Pruned;
  if (closed) return NodeStatus::Closed;
  if (discharged) return NodeStatus::Discharged;
  if (refutation) return NodeStatus::Refuted;
  if (translated) return NodeStatus::Translated;
  if (validated_scope) return NodeStatus::Validated;
  return NodeStatus::Open;
}

std::string status_label(const AnalysisNode& n) {
  auto st = n.status();
  std::string out(to_string(st));
  if (st == NodeStatus::Validated) out += "(" + std::to_string(*n.validated_scope) + ")";
  return out;
}

int SessionConfig::ceiling() const { return scope_ceiling > 0 ? scope_ceiling : scope_ceiling_from_env(); }

ValidationFailure::ValidationFailure(std::size_t seq, Sequent refuted, CounterexampleReport report,
                                     const std::string& message)
    : Error(ErrorCode::ValidationFailed, message), seq_(seq), refuted_(std::move(refuted)), report_(std::move(report)) {}

// ---------------------------------------------------------------------------

Session::Session(Spec spec, std::string goal, SessionConfig config, EngineRegistry registry, Sequent root)
    : spec_(std::move(spec)), goal_(std::move(goal)), config_(config), registry_(std::move(registry)) {
  AnalysisNode n{0, std::nullopt, std::move(root), spec_.signature, std::nullopt, "create"};
  nodes_.push_back(std::move(n));
}

Session Session::create(Spec spec, const std::string& goal, SessionConfig config, EngineRegistry registry) {
  try {
    check_well_formed(spec);
  } catch (const Error& e) {
    throw Error(ErrorCode::IllFormedSpec, e.what());
  }
  const NamedFormula* g = spec.find_goal(goal);
  if (!g) throw Error(ErrorCode::UnknownGoal, "no goal named '" + goal + "'");
  if (config.default_scope < 1) throw Error(ErrorCode::BadConfig, "default scope must be at least 1");
  std::vector<Formula> ante;
  for (const auto& ax : spec.axioms) ante.push_back(ax.formula);
  Sequent root(spec.signature.language(), std::move(ante), {g->formula});
  return Session(std::move(spec), goal, config, std::move(registry), std::move(root));
}

const AnalysisNode& Session::node(NodeId id) const {
  if (id >= nodes_.size()) throw Error(ErrorCode::UnknownNode, "no node " + std::to_string(id));
  return nodes_[id];
}

AnalysisNode& Session::mut(NodeId id) { return nodes_.at(id); }

NodeId Session::add_child(NodeId parent, Sequent s, Signature sig, std::size_t seq, const std::string& action) {
  AnalysisNode n{nodes_.size(), parent, std::move(s), std::move(sig), seq, action};
  nodes_.push_back(std::move(n));
  nodes_[parent].children.push_back(nodes_.back().id);
  return nodes_.back().id;
}

void Session::propagate(NodeId from, std::set<NodeId>& touched) {
  std::optional<NodeId> cur = from;
  while (cur) {
    AnalysisNode& n = nodes_[*cur];
    bool d = false;
    if (!n.pruned) {
      if (n.closed) {
        d = true;
      } else {
        bool any = false, all = true;
        for (NodeId c : n.children) {
          if (nodes_[c].pruned) continue;
          any = true;
          all = all && nodes_[c].discharged;
        }
        d = any && all;
      }
    }
    if (d != n.discharged) {
      n.discharged = d;
      touched.insert(n.id);
    }
    cur = n.parent;
  }
}

int Session::scope_param(const Params& p) const {
  auto it = p.find("scope");
  if (it == p.end()) return config_.default_scope;
  int v = 0;
  const std::string& t = it->second;
  auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || end != t.data() + t.size()) throw Error(ErrorCode::BadParameter, "scope is not an integer: " + t);
  if (v < 1) throw Error(ErrorCode::BadParameter, "scope must be at least 1");
  if (v > config_.ceiling())
    throw Error(ErrorCode::ScopeExceedsCeiling,
                "scope " + std::to_string(v) + " exceeds the ceiling " + std::to_string(config_.ceiling()));
  return v;
}

const ActionRecord& Session::commit(ActionRecord r, const std::set<NodeId>& touched) {
  r.seq = log_.size();
  for (NodeId id : touched)
    if (std::find(r.created.begin(), r.created.end(), id) == r.created.end()) r.updated.push_back(id);
  r.output_digest = sha256_hex(r.output);
  log_.push_back(std::move(r));
  return log_.back();
}

// ---------------------------------------------------------------------------

std::vector<ActionOffer> Session::applicable_actions(NodeId id) const {
  const AnalysisNode& n = node(id);
  std::vector<ActionOffer> out;
  bool live_children = std::any_of(n.children.begin(), n.children.end(), [&](NodeId c) { return !nodes_[c].pruned; });
  bool leaf = !n.pruned && !n.closed && !live_children;
  Language lang = n.language();

  if (leaf && !n.refutation) {
    if (const EngineEntry* ce = registry_.calculator_for(lang)) {
      for (const auto& ar : registry_.calculator(*ce).applicable_rules(n.sequent)) {
        ActionOffer o{"rule:" + ar.rule.id, {}, ar.candidates};
        for (const auto& p : ar.rule.params) o.params.push_back({p.name, std::string(to_string(p.kind)), p.required});
        out.push_back(std::move(o));
      }
    }
    if (registry_.finder_for(lang)) {
      const auto& ante = n.sequent.antecedents();
      const auto& cons = n.sequent.consequents();
      out.push_back({"validate", {scope_spec()}, {Params{}}});
      out.push_back({"validated-case", {{"case", "formula", true}, scope_spec()}, {}});
      if (!ante.empty()) out.push_back({"eliminate-superfluous", {scope_spec()}, {Params{}}});
      std::vector<Params> exists;
      for (std::size_t j = 0; j < cons.size(); ++j)
        if (cons[j].is_rel() && cons[j].rel().op() == RelFormulaOp::Exists) exists.push_back({{"j", std::to_string(j)}});
      if (!exists.empty())
        out.push_back({"suggest-witnesses", {{"j", "formula-index-right", true}, scope_spec()}, std::move(exists)});
      if (!ante.empty()) {
        std::vector<Params> cand;
        for (std::size_t i = 0; i < ante.size(); ++i) cand.push_back({{"i", std::to_string(i)}});
        out.push_back({"hypothesis-confidence", {{"i", "formula-index-left", true}, scope_spec()}, std::move(cand)});
      }
    }
    std::vector<Params> translators;
    for (const EngineEntry* te : registry_.translators_from(lang)) {
      try {
        registry_.translator(*te).translate(n.sequent, n.signature);
        translators.push_back({{"translator", te->id}});
      } catch (const Error&) {
        // outside the translatable fragment
      }
    }
    if (!translators.empty())
      out.push_back({"switch-language", {{"translator", "translator-id", true}}, std::move(translators)});
  }

  bool annotated = n.validated_scope || n.refutation || !n.suspects.empty();
  if (!n.pruned && ((id != 0 && live_children) || annotated)) out.push_back({"prune", {}, {Params{}}});
  if (!n.pruned && n.refutation) out.push_back({"dismiss-refutation", {}, {Params{}}});
  return out;
}

const ActionRecord& Session::apply_action(NodeId id, std::string_view action, const Params& params) {
  const AnalysisNode& target = node(id);
  auto offers = applicable_actions(id);
  auto offer = std::find_if(offers.begin(), offers.end(), [&](const ActionOffer& o) { return o.action == action; });
  if (offer == offers.end())
    throw Error(ErrorCode::ActionNotApplicable, "action '" + std::string(action) + "' is not applicable to node " +
                                                    std::to_string(id) + " (" + status_label(target) + ")");

  const std::size_t seq = log_.size();
  const Language lang = target.language();
  const Sequent sequent = target.sequent;
  const Signature sig = target.signature;
  std::set<NodeId> touched;
  ActionRecord rec;
  rec.target = id;
  rec.action = std::string(action);
  rec.params = params;

  auto run_finder = [&](const EngineEntry& fe, const Sequent& s, int scope) {
    CounterexampleReport rep = registry_.finder(fe).find(s, sig, scope, config_.ceiling());
    if (rep.outcome == Outcome::Unsupported) throw EngineFailure(fe.id, rep.reason);
    if (rep.outcome == Outcome::Refuted && !check_report(s, rep))
      throw EngineFailure(fe.id, "counterexample failed the independent check");
    return rep;
  };

  if (action.starts_with("rule:")) {
    const EngineEntry& ce = *registry_.calculator_for(lang);
    std::vector<Sequent> premises;
    try {
      premises = registry_.calculator(ce).apply_rule(sequent, sig, action.substr(5), params);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::RuleNotApplicable || e.code() == ErrorCode::UnknownRule)
        throw Error(ErrorCode::ActionNotApplicable, e.what());
      throw;
    }
    rec.engine = ce.id;
    for (auto& p : premises) {
      rec.output += print(p) + "\n";
      rec.created.push_back(add_child(id, std::move(p), sig, seq, rec.action));
    }
    if (premises.empty()) {
      mut(id).closed = true;
      touched.insert(id);
      rec.output = "closed\n";
    }
    propagate(id, touched);
    return commit(std::move(rec), touched);
  }

  if (action == "switch-language") {
    allow_only(params, {"translator"});
    const std::string& tid = required(params, "translator");
    const EngineEntry* te = registry_.find(tid);
    if (!te || te->family != EngineFamily::RhoTranslator || te->source != lang)
      throw Error(ErrorCode::BadParameter, "no translator '" + tid + "' from " + std::string(to_string(lang)));
    TranslationResult tr = [&] {
      try {
        return registry_.translator(*te).translate(sequent, sig);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::UnsupportedFormula) throw Error(ErrorCode::ActionNotApplicable, e.what());
        throw;
      }
    }();
    rec.engine = te->id;
    rec.output = print(tr.sequent) + "\n";
    for (const auto& [a, p] : tr.ledger.points) rec.output += a + " -> " + p + "\n";
    for (const auto& [s, c] : tr.ledger.sets) rec.output += s + " -> " + c + "\n";
    rec.created.push_back(add_child(id, std::move(tr.sequent), std::move(tr.signature), seq, rec.action));
    mut(id).translated = true;
    touched.insert(id);
    propagate(id, touched);
    return commit(std::move(rec), touched);
  }

  if (action == "prune") {
    allow_only(params, {});
    std::vector<NodeId> stack(target.children.begin(), target.children.end());
    std::vector<NodeId> pruned;
    while (!stack.empty()) {
      NodeId c = stack.back();
      stack.pop_back();
      AnalysisNode& cn = mut(c);
      if (!cn.pruned) {
        cn.pruned = true;
        cn.discharged = false;
        touched.insert(c);
        pruned.push_back(c);
      }
      stack.insert(stack.end(), cn.children.begin(), cn.children.end());
    }
    AnalysisNode& n = mut(id);
    n.closed = false;
    n.translated = false;
    n.validated_scope.reset();
    n.refutation.reset();
    n.suspects.clear();
    touched.insert(id);
    propagate(id, touched);
    std::sort(pruned.begin(), pruned.end());
    rec.output = "pruned " + join_ids(pruned) + "\n";
    return commit(std::move(rec), touched);
  }

  if (action == "dismiss-refutation") {
    allow_only(params, {});
    mut(id).refutation.reset();
    touched.insert(id);
    rec.output = "dismissed\n";
    return commit(std::move(rec), touched);
  }

  // The remaining actions all run the finder for the node's language.
  const EngineEntry& fe = *registry_.finder_for(lang);
  rec.engine = fe.id;
  const auto& ante = sequent.antecedents();
  const auto& cons = sequent.consequents();

  if (action == "validate") {
    allow_only(params, {"scope"});
    int scope = scope_param(params);
    CounterexampleReport rep = run_finder(fe, sequent, scope);
    AnalysisNode& n = mut(id);
    if (rep.outcome == Outcome::Refuted) {
      n.validated_scope.reset();
      n.refutation = rep;
    } else {
      n.validated_scope = scope;
    }
    touched.insert(id);
    rec.output = render(rep);
    return commit(std::move(rec), touched);
  }

  if (action == "validated-case") {
    allow_only(params, {"case", "scope"});
    Formula c = parse_formula(required(params, "case"), extend_with_free_constants(sig, sequent));
    if (c.language() != lang) throw Error(ErrorCode::BadParameter, "case formula is not in " + std::string(to_string(lang)));
    check_well_formed(c, sig);
    int scope = scope_param(params);
    std::vector<Sequent> branches;
    for (const Formula& extra : {c, Formula::negation(c)}) {
      auto a = ante;
      a.push_back(extra);
      branches.emplace_back(lang, std::move(a), cons);
    }
    for (const Sequent& b : branches) {
      CounterexampleReport rep = run_finder(fe, b, scope);
      rec.output += print(b) + "\n" + render(rep);
      if (rep.outcome == Outcome::Refuted) {
        rec.failed = true;
        commit(std::move(rec), touched);
        throw ValidationFailure(seq, b, rep, "case branch " + print(b) + " is refuted");
      }
    }
    for (auto& b : branches) {
      NodeId cid = add_child(id, std::move(b), sig, seq, rec.action);
      mut(cid).validated_scope = scope;
      rec.created.push_back(cid);
    }
    propagate(id, touched);
    return commit(std::move(rec), touched);
  }

  if (action == "eliminate-superfluous") {
    allow_only(params, {"scope"});
    int scope = scope_param(params);
    CounterexampleReport whole = run_finder(fe, sequent, scope);
    if (whole.outcome == Outcome::Refuted) {
      rec.failed = true;
      rec.output = render(whole);
      commit(std::move(rec), touched);
      throw ValidationFailure(seq, sequent, whole, "the sequent itself is refuted; nothing can be eliminated");
    }
    std::vector<bool> keep(ante.size(), true);
    std::vector<std::size_t> removed;
    auto reduced = [&] {
      std::vector<Formula> a;
      for (std::size_t k = 0; k < ante.size(); ++k)
        if (keep[k]) a.push_back(ante[k]);
      return Sequent(lang, std::move(a), cons);
    };
    for (std::size_t i = 0; i < ante.size(); ++i) {
      keep[i] = false;
      if (run_finder(fe, reduced(), scope).outcome == Outcome::NoneWithinScope) {
        removed.push_back(i);
      } else {
        keep[i] = true;
      }
    }
    Sequent child = reduced();
    rec.output = "removed [" + join_ids(removed) + "]\n" + print(child) + "\n";
    rec.created.push_back(add_child(id, std::move(child), sig, seq, rec.action));
    propagate(id, touched);
    return commit(std::move(rec), touched);
  }

  if (action == "suggest-witnesses") {
    allow_only(params, {"j", "scope"});
    std::size_t j = index_param(params, "j", cons.size());
    if (!cons[j].is_rel() || cons[j].rel().op() != RelFormulaOp::Exists)
      throw Error(ErrorCode::ActionNotApplicable, "consequent " + std::to_string(j) + " is not existential");
    int scope = scope_param(params);
    const RelFormula& ex = cons[j].rel();
    std::vector<Formula> rest;
    for (std::size_t k = 0; k < cons.size(); ++k)
      if (k != j) rest.push_back(cons[k]);
    std::set<std::string> atoms(sig.atoms().begin(), sig.atoms().end());
    for (const auto& a : free_atom_constants(sequent)) atoms.insert(a);
    std::vector<std::pair<std::uint64_t, std::string>> found;
    for (const auto& a : atoms) {
      auto r = rest;
      r.push_back(substitute(ex.body(), ex.bound_var(), AtomTerm::constant(a)));
      CounterexampleReport rep = run_finder(fe, Sequent(lang, ante, std::move(r)), scope);
      if (rep.outcome == Outcome::NoneWithinScope) found.emplace_back(rep.examined, a);
    }
    std::sort(found.begin(), found.end());
    for (const auto& [count, a] : found) {
      rec.witnesses.push_back(a);
      rec.output += a + " " + std::to_string(count) + "\n";
    }
    return commit(std::move(rec), touched);
  }

  if (action == "hypothesis-confidence") {
    allow_only(params, {"i", "scope"});
    std::size_t i = index_param(params, "i", ante.size());
    int scope = scope_param(params);
    std::vector<Formula> axioms;
    for (const auto& ax : spec_.axioms) axioms.push_back(ax.formula);
    CounterexampleReport rep = run_finder(fe, Sequent(lang, std::move(axioms), {ante[i]}), scope);
    if (rep.outcome == Outcome::Refuted) {
      mut(id).suspects.insert(i);
      touched.insert(id);
    }
    rec.output = render(rep);
    return commit(std::move(rec), touched);
  }

  throw Error(ErrorCode::ActionNotApplicable, "unknown action '" + std::string(action) + "'");
}

// ---------------------------------------------------------------------------

void run_script(Session& s, const std::vector<ScriptLine>& lines) {
  for (const auto& l : lines) {
    Params p;
    for (const auto& [k, v] : l.params) p.insert_or_assign(k, v);
    try {
      s.apply_action(l.node, l.action, p);
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(l.line) + ": " + e.what());
    }
  }
}

Session replay(const Spec& spec, const std::string& goal, const SessionConfig& config, const EngineRegistry& registry,
               const std::vector<ActionRecord>& log) {
  Session s = Session::create(spec, goal, config, registry);
  for (std::size_t k = 0; k < log.size(); ++k) {
    const ActionRecord& want = log[k];
    if (want.seq != k) throw ReplayDivergence(want.seq, "expected sequence number " + std::to_string(k));
    bool failed = false;
    try {
      s.apply_action(want.target, want.action, want.params);
    } catch (const ValidationFailure&) {
      failed = true;
    } catch (const Error& e) {
      throw ReplayDivergence(want.seq, e.what());
    }
    if (s.log().size() != k + 1) throw ReplayDivergence(want.seq, "no record was committed");
    const ActionRecord& got = s.log().back();
    if (failed != want.failed) throw ReplayDivergence(want.seq, failed ? "action failed" : "action did not fail");
    if (got.created != want.created) throw ReplayDivergence(want.seq, "created nodes differ");
    if (got.updated != want.updated) throw ReplayDivergence(want.seq, "updated nodes differ");
    if (got.engine != want.engine) throw ReplayDivergence(want.seq, "engine differs: " + got.engine);
    if (got.output_digest != want.output_digest) throw ReplayDivergence(want.seq, "engine output differs");
    if (got.witnesses != want.witnesses) throw ReplayDivergence(want.seq, "witnesses differ");
  }
  return s;
}

}  // namespace hg
