#include <charconv>

#include "calculus.hpp"
#include "hg/syntax.hpp"

namespace hg {

std::string_view to_string(ParamKind kind) {
  switch (kind) {
    case ParamKind::FormulaIndexLeft: return "formula-index-left";
    case ParamKind::FormulaIndexRight: return "formula-index-right";
    case ParamKind::Term: return "term";
    case ParamKind::Formula: return "formula";
    case ParamKind::FreshName: return "fresh-name";
    case ParamKind::AxiomSchemaId: return "axiom-schema-id";
    case ParamKind::Substitution: return "substitution";
  }
  return "?";
}

const RuleDescriptor* SequentCalculator::find_rule(std::string_view id) const {
  for (const auto& r : rules())
    if (r.id == id) return &r;
  return nullptr;
}

namespace kernel_detail {

const Signature& Ctx::extended() {
  if (!ext_) ext_ = extend_with_free_constants(sig, s);
  return *ext_;
}

TableCalculator::TableCalculator(Language lang, std::vector<RuleImpl> rules) : lang_(lang), impls_(std::move(rules)) {
  for (const auto& r : impls_) descs_.push_back(r.desc);
}

std::vector<ApplicableRule> TableCalculator::applicable_rules(const Sequent& s) const {
  std::vector<ApplicableRule> out;
  if (s.language() != lang_) return out;
  for (const auto& r : impls_) {
    auto c = r.candidates(s);
    if (!c.empty()) out.push_back({r.desc, std::move(c)});
  }
  return out;
}

std::vector<Sequent> TableCalculator::apply_rule(const Sequent& s, const Signature& sig, std::string_view rule_id,
                                                 const Params& params) const {
  for (const auto& r : impls_) {
    if (r.desc.id != rule_id) continue;
    if (s.language() != lang_)
      throw Error(ErrorCode::RuleNotApplicable, "rule `" + r.desc.id + "` needs a " + std::string(to_string(lang_)) +
                                                    " sequent");
    for (const auto& [k, _] : params) {
      bool known = false;
      for (const auto& p : r.desc.params) known = known || p.name == k;
      if (!known) throw Error(ErrorCode::BadParameter, "rule `" + r.desc.id + "` has no parameter `" + k + "`");
    }
    for (const auto& p : r.desc.params)
      if (p.required && !params.contains(p.name))
        throw Error(ErrorCode::BadParameter, "rule `" + r.desc.id + "` needs parameter `" + p.name + "`");
    Ctx ctx{s, sig, params, r.desc.id, std::nullopt};
    return r.apply(ctx);
  }
  throw Error(ErrorCode::UnknownRule, "unknown " + std::string(to_string(lang_)) + " rule `" + std::string(rule_id) + "`");
}

void not_applicable(const Ctx& ctx, const std::string& why) {
  throw Error(ErrorCode::RuleNotApplicable, std::string(ctx.rule) + ": " + why);
}

void bad_param(const Ctx& ctx, const std::string& why) {
  throw Error(ErrorCode::BadParameter, std::string(ctx.rule) + ": " + why);
}

const std::string& raw_param(const Ctx& ctx, const std::string& name) {
  auto it = ctx.params.find(name);
  if (it == ctx.params.end()) bad_param(ctx, "missing parameter `" + name + "`");
  return it->second;
}

std::optional<std::size_t> opt_index_param(const Ctx& ctx, const std::string& name, bool left) {
  auto it = ctx.params.find(name);
  if (it == ctx.params.end()) return std::nullopt;
  const std::string& v = it->second;
  std::size_t idx = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), idx);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty())
    bad_param(ctx, "`" + name + "` must be a formula index");
  const std::size_t n = left ? ctx.s.antecedents().size() : ctx.s.consequents().size();
  if (idx >= n)
    bad_param(ctx, "`" + name + "` = " + v + " is out of range (" + std::to_string(n) + " " +
                       (left ? "antecedents" : "consequents") + ")");
  return idx;
}

std::size_t index_param(const Ctx& ctx, const std::string& name, bool left) {
  auto idx = opt_index_param(ctx, name, left);
  if (!idx) bad_param(ctx, "missing parameter `" + name + "`");
  return *idx;
}

Target side_param(const Ctx& ctx) {
  auto i = opt_index_param(ctx, "i", true);
  auto j = opt_index_param(ctx, "j", false);
  if (i.has_value() == j.has_value()) bad_param(ctx, "give exactly one of `i` and `j`");
  return i ? Target{true, *i} : Target{false, *j};
}

std::string fresh_param(const Ctx& ctx, const std::string& name) {
  const std::string& v = raw_param(ctx, name);
  if (!is_plain_identifier(v)) bad_param(ctx, "`" + v + "` is not a valid name");
  if (all_names(ctx.s).contains(v) || ctx.sig.declares(v))
    throw Error(ErrorCode::FreshnessViolation, std::string(ctx.rule) + ": `" + v + "` is not fresh");
  return v;
}

Sequent replace(const Sequent& s, Target t, std::vector<Formula> with) {
  auto side = t.left ? s.antecedents() : s.consequents();
  side.erase(side.begin() + static_cast<std::ptrdiff_t>(t.index));
  side.insert(side.begin() + static_cast<std::ptrdiff_t>(t.index), with.begin(), with.end());
  return t.left ? Sequent(s.language(), side, s.consequents()) : Sequent(s.language(), s.antecedents(), side);
}

Sequent remove(const Sequent& s, Target t) { return replace(s, t, {}); }

Sequent add_left(const Sequent& s, std::vector<Formula> fs) {
  auto side = s.antecedents();
  side.insert(side.end(), fs.begin(), fs.end());
  return Sequent(s.language(), side, s.consequents());
}

Sequent add_right(const Sequent& s, std::vector<Formula> fs) {
  auto side = s.consequents();
  side.insert(side.end(), fs.begin(), fs.end());
  return Sequent(s.language(), s.antecedents(), side);
}

ParamSpec idx_left(const std::string& name, bool required) { return {name, ParamKind::FormulaIndexLeft, required}; }
ParamSpec idx_right(const std::string& name, bool required) { return {name, ParamKind::FormulaIndexRight, required}; }

std::vector<Params> scan(const Sequent& s, bool left, const std::function<bool(const Formula&)>& pred,
                         const std::string& key) {
  const auto& side = left ? s.antecedents() : s.consequents();
  const std::string k = key.empty() ? (left ? "i" : "j") : key;
  std::vector<Params> out;
  for (std::size_t i = 0; i < side.size(); ++i)
    if (pred(side[i])) out.push_back({{k, std::to_string(i)}});
  return out;
}

namespace {

std::function<bool(const Formula&)> is(Connective c) {
  return [c](const Formula& f) { return f.connective() == c; };
}

Target expect(Ctx& ctx, bool left, Connective c, const char* what) {
  Target t{left, index_param(ctx, left ? "i" : "j", left)};
  if (t.formula(ctx.s).connective() != c)
    not_applicable(ctx, std::string(left ? "antecedent " : "consequent ") + std::to_string(t.index) + " is not " +
                            what);
  return t;
}

}  // namespace

void add_structural_rules(std::vector<RuleImpl>& rules, Language lang) {
  using C = Connective;
  rules.push_back({{"axiom", lang, {idx_left(), idx_right()}, "close when an antecedent equals a consequent"},
                   [](const Sequent& s) {
                     std::vector<Params> out;
                     for (std::size_t i = 0; i < s.antecedents().size(); ++i)
                       for (std::size_t j = 0; j < s.consequents().size(); ++j)
                         if (s.antecedents()[i] == s.consequents()[j])
                           out.push_back({{"i", std::to_string(i)}, {"j", std::to_string(j)}});
                     return out;
                   },
                   [](Ctx& ctx) {
                     const auto i = index_param(ctx, "i", true), j = index_param(ctx, "j", false);
                     if (!(ctx.s.antecedents()[i] == ctx.s.consequents()[j]))
                       not_applicable(ctx, "antecedent and consequent differ");
                     return std::vector<Sequent>{};
                   }});

  rules.push_back({{"cut", lang, {{"formula", ParamKind::Formula, true}}, "split on a formula"},
                   [](const Sequent&) { return std::vector<Params>{Params{}}; },
                   [lang](Ctx& ctx) {
                     Formula f = parse_formula(raw_param(ctx, "formula"), ctx.extended());
                     if (f.language() != lang) bad_param(ctx, "cut formula is in the wrong language");
                     check_well_formed(f, ctx.extended());
                     return std::vector<Sequent>{add_right(ctx.s, {f}), add_left(ctx.s, {f})};
                   }});

  rules.push_back({{"hide-left", lang, {idx_left()}, "drop an antecedent"},
                   [](const Sequent& s) { return scan(s, true, [](const Formula&) { return true; }); },
                   [](Ctx& ctx) {
                     return std::vector<Sequent>{remove(ctx.s, {true, index_param(ctx, "i", true)})};
                   }});
  rules.push_back({{"hide-right", lang, {idx_right()}, "drop a consequent"},
                   [](const Sequent& s) { return scan(s, false, [](const Formula&) { return true; }); },
                   [](Ctx& ctx) {
                     return std::vector<Sequent>{remove(ctx.s, {false, index_param(ctx, "j", false)})};
                   }});

  rules.push_back({{"not-left", lang, {idx_left()}, "!A on the left becomes A on the right"},
                   [](const Sequent& s) { return scan(s, true, is(C::Not)); },
                   [](Ctx& ctx) {
                     auto t = expect(ctx, true, C::Not, "a negation");
                     auto f = t.formula(ctx.s).child(0);
                     return std::vector<Sequent>{add_right(remove(ctx.s, t), {f})};
                   }});
  rules.push_back({{"not-right", lang, {idx_right()}, "!A on the right becomes A on the left"},
                   [](const Sequent& s) { return scan(s, false, is(C::Not)); },
                   [](Ctx& ctx) {
                     auto t = expect(ctx, false, C::Not, "a negation");
                     auto f = t.formula(ctx.s).child(0);
                     return std::vector<Sequent>{add_left(remove(ctx.s, t), {f})};
                   }});

  rules.push_back({{"and-left", lang, {idx_left()}, "A && B on the left becomes A, B"},
                   [](const Sequent& s) { return scan(s, true, is(C::And)); },
                   [](Ctx& ctx) {
                     auto t = expect(ctx, true, C::And, "a conjunction");
                     const auto& f = t.formula(ctx.s);
                     return std::vector<Sequent>{replace(ctx.s, t, {f.child(0), f.child(1)})};
                   }});
  rules.push_back({{"and-right", lang, {idx_right()}, "prove both conjuncts"},
                   [](const Sequent& s) { return scan(s, false, is(C::And)); },
                   [](Ctx& ctx) {
                     auto t = expect(ctx, false, C::And, "a conjunction");
                     const auto& f = t.formula(ctx.s);
                     return std::vector<Sequent>{replace(ctx.s, t, {f.child(0)}), replace(ctx.s, t, {f.child(1)})};
                   }});

  rules.push_back({{"or-left", lang, {idx_left()}, "case split on a disjunction"},
                   [](const Sequent& s) { return scan(s, true, is(C::Or)); },
                   [](Ctx& ctx) {
                     auto t = expect(ctx, true, C::Or, "a disjunction");
                     const auto& f = t.formula(ctx.s);
                     return std::vector<Sequent>{replace(ctx.s, t, {f.child(0)}), replace(ctx.s, t, {f.child(1)})};
                   }});
  rules.push_back({{"or-right", lang, {idx_right()}, "A || B on the right becomes A, B"},
                   [](const Sequent& s) { return scan(s, false, is(C::Or)); },
                   [](Ctx& ctx) {
                     auto t = expect(ctx, false, C::Or, "a disjunction");
                     const auto& f = t.formula(ctx.s);
                     return std::vector<Sequent>{replace(ctx.s, t, {f.child(0), f.child(1)})};
                   }});

  rules.push_back({{"imp-left", lang, {idx_left()}, "prove the premise, use the conclusion"},
                   [](const Sequent& s) { return scan(s, true, is(C::Implies)); },
                   [](Ctx& ctx) {
                     auto t = expect(ctx, true, C::Implies, "an implication");
                     const auto& f = t.formula(ctx.s);
                     return std::vector<Sequent>{add_right(remove(ctx.s, t), {f.child(0)}),
                                                 replace(ctx.s, t, {f.child(1)})};
                   }});
  rules.push_back({{"imp-right", lang, {idx_right()}, "assume the premise"},
                   [](const Sequent& s) { return scan(s, false, is(C::Implies)); },
                   [](Ctx& ctx) {
                     auto t = expect(ctx, false, C::Implies, "an implication");
                     const auto& f = t.formula(ctx.s);
                     return std::vector<Sequent>{add_left(replace(ctx.s, t, {f.child(1)}), {f.child(0)})};
                   }});

  rules.push_back({{"iff-left", lang, {idx_left()}, "both sides hold or neither does"},
                   [](const Sequent& s) { return scan(s, true, is(C::Iff)); },
                   [](Ctx& ctx) {
                     auto t = expect(ctx, true, C::Iff, "an equivalence");
                     const auto& f = t.formula(ctx.s);
                     return std::vector<Sequent>{replace(ctx.s, t, {f.child(0), f.child(1)}),
                                                 add_right(remove(ctx.s, t), {f.child(0), f.child(1)})};
                   }});
  rules.push_back({{"iff-right", lang, {idx_right()}, "prove both directions"},
                   [](const Sequent& s) { return scan(s, false, is(C::Iff)); },
                   [](Ctx& ctx) {
                     auto t = expect(ctx, false, C::Iff, "an equivalence");
                     const auto& f = t.formula(ctx.s);
                     return std::vector<Sequent>{add_left(replace(ctx.s, t, {f.child(1)}), {f.child(0)}),
                                                 add_left(replace(ctx.s, t, {f.child(0)}), {f.child(1)})};
                   }});
}

}  // namespace kernel_detail

}  // namespace hg
