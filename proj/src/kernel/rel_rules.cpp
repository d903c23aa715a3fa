#include "calculus.hpp"
#include "hg/syntax.hpp"

namespace hg::kernel_detail {

namespace {

using E = RelExpr;
using RF = RelFormula;

const RF* rel_of(const Formula& f) { return f.is_rel() ? &f.rel() : nullptr; }

std::function<bool(const Formula&)> rel_op(RelFormulaOp op) {
  return [op](const Formula& f) { return f.is_rel() && f.rel().op() == op; };
}

std::set<std::string> taken_names(const Ctx& ctx) {
  auto names = all_names(ctx.s);
  for (const auto& r : ctx.sig.relations()) names.insert(r.name);
  for (const auto& a : ctx.sig.atoms()) names.insert(a);
  return names;
}

std::set<std::string> bound_names(const RF& f) {
  std::set<std::string> out;
  if (f.is_quantifier()) out.insert(f.bound_var());
  for (std::size_t i = 0; i < f.arg_count(); ++i) {
    auto sub = bound_names(f.arg(i));
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

// An atom constant to instantiate a quantifier with.
AtomTerm term_param(Ctx& ctx, const std::string& name) {
  const std::string& v = raw_param(ctx, name);
  if (!is_plain_identifier(v)) bad_param(ctx, "`" + v + "` is not a valid atom name");
  if (ctx.sig.relation_arity(v))
    throw Error(ErrorCode::ArityMismatch, std::string(ctx.rule) + ": `" + v + "` is a relation, not an atom");
  for (const auto& side : {ctx.s.antecedents(), ctx.s.consequents()})
    for (const auto& f : side)
      if (f.is_rel() && bound_names(f.rel()).contains(v))
        bad_param(ctx, "`" + v + "` is used as a bound variable in the sequent");
  return AtomTerm::constant(v);
}

const RF& expect_rel(Ctx& ctx, Target t, RelFormulaOp op, const char* what) {
  const RF* f = rel_of(t.formula(ctx.s));
  if (!f || f->op() != op)
    not_applicable(ctx, std::string(t.left ? "antecedent " : "consequent ") + std::to_string(t.index) + " is not " +
                            what);
  return *f;
}

RF member1(const AtomTerm& x, const E& e) { return RF::member({x}, e); }
RF member2(const AtomTerm& x, const AtomTerm& y, const E& e) { return RF::member({x, y}, e); }
RF atom_eq(const AtomTerm& x, const AtomTerm& y) { return RF::eq(x.as_expr(), y.as_expr()); }

// -- rewriting ---------------------------------------------------------------

E rewrite(const E& e, const E& from, const E& to, bool& changed) {
  if (e == from) {
    changed = true;
    return to;
  }
  if (e.is_leaf()) return e;
  if (e.arg_count() == 1) return E::unary(e.op(), rewrite(e.arg(0), from, to, changed));
  return E::binary(e.op(), rewrite(e.lhs(), from, to, changed), rewrite(e.rhs(), from, to, changed));
}

RF rewrite(const RF& f, const E& from, const E& to, bool& changed) {
  switch (f.op()) {
    case RelFormulaOp::Subset:
    case RelFormulaOp::Eq: {
      auto a = rewrite(f.expr(0), from, to, changed), b = rewrite(f.expr(1), from, to, changed);
      return f.op() == RelFormulaOp::Subset ? RF::subset(a, b) : RF::eq(a, b);
    }
    case RelFormulaOp::Member: {
      auto tuple = f.tuple();
      // a singleton equation also rewrites tuple positions
      if (from.op() == RelOp::AtomConst && to.op() == RelOp::AtomConst) {
        for (auto& t : tuple) {
          if (t.kind == AtomTerm::Kind::Const && t.name == from.name()) {
            t = AtomTerm::constant(to.name());
            changed = true;
          }
        }
      }
      return RF::member(tuple, rewrite(f.expr(0), from, to, changed));
    }
    case RelFormulaOp::Some:
    case RelFormulaOp::No:
    case RelFormulaOp::Lone:
    case RelFormulaOp::One: return RF::cardinality(f.op(), rewrite(f.expr(0), from, to, changed));
    case RelFormulaOp::Not: return RF::negation(rewrite(f.arg(0), from, to, changed));
    case RelFormulaOp::Forall:
    case RelFormulaOp::Exists: return RF::quantifier(f.op(), f.bound_var(), rewrite(f.body(), from, to, changed));
    default:
      return RF::connective(f.op(), rewrite(f.arg(0), from, to, changed), rewrite(f.arg(1), from, to, changed));
  }
}

// True iff rewriting `from` to `to` changes f. Tuple positions only count
// when both sides are atoms, so this depends on `to`.
bool rewrites(const RF& f, const E& from, const E& to) {
  bool changed = false;
  rewrite(f, from, to, changed);
  return changed;
}

// -- unfolding ---------------------------------------------------------------

RF unfold_member(Ctx& ctx, const RF& m, RelOp want) {
  const E& e = m.expr(0);
  const bool match = e.op() == want || (want == RelOp::Univ2 && e.op() == RelOp::Univ1) ||
                     (want == RelOp::None2 && e.op() == RelOp::None1);
  if (!match) not_applicable(ctx, "the member expression has the wrong operator");
  const auto& t = m.tuple();
  const int ar = static_cast<int>(t.size());
  auto fresh_var = [&](const std::string& base) { return fresh_name(base, taken_names(ctx)); };
  switch (e.op()) {
    case RelOp::Union: return RF::disj(RF::member(t, e.lhs()), RF::member(t, e.rhs()));
    case RelOp::Inter: return RF::conj(RF::member(t, e.lhs()), RF::member(t, e.rhs()));
    case RelOp::Diff: return RF::conj(RF::member(t, e.lhs()), RF::negation(RF::member(t, e.rhs())));
    case RelOp::Join: {
      const std::string z = fresh_var("z");
      const AtomTerm Z = AtomTerm::var(z);
      const int la = arity(e.lhs(), ctx.extended());
      const int rb = arity(e.rhs(), ctx.extended());
      if (la == 1) return RF::exists(z, RF::conj(member1(Z, e.lhs()), member2(Z, t[0], e.rhs())));
      if (rb == 1) return RF::exists(z, RF::conj(member2(t[0], Z, e.lhs()), member1(Z, e.rhs())));
      return RF::exists(z, RF::conj(member2(t[0], Z, e.lhs()), member2(Z, t[1], e.rhs())));
    }
    case RelOp::Product: return RF::conj(member1(t[0], e.lhs()), member1(t[1], e.rhs()));
    case RelOp::Transpose: return member2(t[1], t[0], e.arg(0));
    case RelOp::Iden: return atom_eq(t[0], t[1]);
    case RelOp::Univ1:
    case RelOp::Univ2: return RF::truth();
    case RelOp::None1:
    case RelOp::None2: return RF::falsity();
    case RelOp::TClosure: {
      const std::string z = fresh_var("z");
      const AtomTerm Z = AtomTerm::var(z);
      return RF::disj(member2(t[0], t[1], e.arg(0)),
                      RF::exists(z, RF::conj(member2(t[0], Z, e.arg(0)), member2(Z, t[1], e))));
    }
    case RelOp::RTClosure: return RF::disj(atom_eq(t[0], t[1]), member2(t[0], t[1], E::tclosure(e.arg(0))));
    default: break;
  }
  (void)ar;
  not_applicable(ctx, "nothing to unfold");
}

RF unfold_card(Ctx& ctx, const RF& f) {
  const E& e = f.expr(0);
  const int ar = arity(e, ctx.extended());
  auto names = taken_names(ctx);
  auto var = [&](const std::string& base) {
    auto v = fresh_name(base, names);
    names.insert(v);
    return v;
  };
  if (ar == 1) {
    const std::string x = var("x");
    const AtomTerm X = AtomTerm::var(x);
    switch (f.op()) {
      case RelFormulaOp::Some: return RF::exists(x, member1(X, e));
      case RelFormulaOp::No: return RF::forall(x, RF::negation(member1(X, e)));
      case RelFormulaOp::Lone: {
        const std::string y = var("y");
        const AtomTerm Y = AtomTerm::var(y);
        return RF::forall(x, RF::forall(y, RF::implies(RF::conj(member1(X, e), member1(Y, e)), atom_eq(X, Y))));
      }
      default: {
        const std::string y = var("y");
        const AtomTerm Y = AtomTerm::var(y);
        return RF::exists(x, RF::conj(member1(X, e), RF::forall(y, RF::implies(member1(Y, e), atom_eq(Y, X)))));
      }
    }
  }
  const std::string x = var("x"), y = var("y");
  const AtomTerm X = AtomTerm::var(x), Y = AtomTerm::var(y);
  switch (f.op()) {
    case RelFormulaOp::Some: return RF::exists(x, RF::exists(y, member2(X, Y, e)));
    case RelFormulaOp::No: return RF::forall(x, RF::forall(y, RF::negation(member2(X, Y, e))));
    case RelFormulaOp::Lone: {
      const std::string x2 = var("x"), y2 = var("y");
      const AtomTerm X2 = AtomTerm::var(x2), Y2 = AtomTerm::var(y2);
      auto body = RF::implies(RF::conj(member2(X, Y, e), member2(X2, Y2, e)), RF::conj(atom_eq(X, X2), atom_eq(Y, Y2)));
      return RF::forall(x, RF::forall(y, RF::forall(x2, RF::forall(y2, body))));
    }
    default: {
      const std::string x2 = var("x"), y2 = var("y");
      const AtomTerm X2 = AtomTerm::var(x2), Y2 = AtomTerm::var(y2);
      auto unique = RF::forall(
          x2, RF::forall(y2, RF::implies(member2(X2, Y2, e), RF::conj(atom_eq(X2, X), atom_eq(Y2, Y)))));
      return RF::exists(x, RF::exists(y, RF::conj(member2(X, Y, e), unique)));
    }
  }
}

std::vector<Params> both_sides(const Sequent& s, const std::function<bool(const Formula&)>& pred) {
  auto out = scan(s, true, pred);
  auto right = scan(s, false, pred);
  out.insert(out.end(), right.begin(), right.end());
  return out;
}

void add_member_unfold(std::vector<RuleImpl>& rules, const std::string& suffix, RelOp op) {
  auto pred = [op](const Formula& f) {
    if (!f.is_rel() || f.rel().op() != RelFormulaOp::Member) return false;
    const RelOp got = f.rel().expr(0).op();
    return got == op || (op == RelOp::Univ2 && got == RelOp::Univ1) || (op == RelOp::None2 && got == RelOp::None1);
  };
  rules.push_back({{"member-unfold-" + suffix,
                    Language::Rel,
                    {idx_left("i", false), idx_right("j", false)},
                    "unfold a membership in a " + suffix + " expression one step"},
                   [pred](const Sequent& s) { return both_sides(s, pred); },
                   [op](Ctx& ctx) {
                     auto t = side_param(ctx);
                     const RF& m = expect_rel(ctx, t, RelFormulaOp::Member, "a membership");
                     return std::vector<Sequent>{replace(ctx.s, t, {unfold_member(ctx, m, op)})};
                   }});
}

void add_card_unfold(std::vector<RuleImpl>& rules, const std::string& suffix, RelFormulaOp op) {
  rules.push_back({{"card-unfold-" + suffix,
                    Language::Rel,
                    {idx_left("i", false), idx_right("j", false)},
                    "rewrite `" + suffix + " e` with quantified memberships"},
                   [op](const Sequent& s) { return both_sides(s, rel_op(op)); },
                   [op, suffix](Ctx& ctx) {
                     auto t = side_param(ctx);
                     const RF& f = expect_rel(ctx, t, op, ("a `" + suffix + "` formula").c_str());
                     return std::vector<Sequent>{replace(ctx.s, t, {unfold_card(ctx, f)})};
                   }});
}

}  // namespace

std::vector<RuleImpl> rel_rules() {
  std::vector<RuleImpl> rules;
  add_structural_rules(rules, Language::Rel);
  const auto L = Language::Rel;

  rules.push_back({{"all-right", L, {idx_right(), {"fresh", ParamKind::FreshName, true}}, "introduce an eigenvariable"},
                   [](const Sequent& s) { return scan(s, false, rel_op(RelFormulaOp::Forall)); },
                   [](Ctx& ctx) {
                     Target t{false, index_param(ctx, "j", false)};
                     const RF& f = expect_rel(ctx, t, RelFormulaOp::Forall, "a universal");
                     const auto c = fresh_param(ctx, "fresh");
                     return std::vector<Sequent>{
                         replace(ctx.s, t, {substitute(f.body(), f.bound_var(), AtomTerm::constant(c))})};
                   }});
  rules.push_back({{"all-left", L, {idx_left(), {"term", ParamKind::Term, true}}, "instantiate a universal"},
                   [](const Sequent& s) { return scan(s, true, rel_op(RelFormulaOp::Forall)); },
                   [](Ctx& ctx) {
                     Target t{true, index_param(ctx, "i", true)};
                     const RF& f = expect_rel(ctx, t, RelFormulaOp::Forall, "a universal");
                     const auto a = term_param(ctx, "term");
                     return std::vector<Sequent>{add_left(ctx.s, {substitute(f.body(), f.bound_var(), a)})};
                   }});
  rules.push_back({{"ex-left", L, {idx_left(), {"fresh", ParamKind::FreshName, true}}, "introduce an eigenvariable"},
                   [](const Sequent& s) { return scan(s, true, rel_op(RelFormulaOp::Exists)); },
                   [](Ctx& ctx) {
                     Target t{true, index_param(ctx, "i", true)};
                     const RF& f = expect_rel(ctx, t, RelFormulaOp::Exists, "an existential");
                     const auto c = fresh_param(ctx, "fresh");
                     return std::vector<Sequent>{
                         replace(ctx.s, t, {substitute(f.body(), f.bound_var(), AtomTerm::constant(c))})};
                   }});
  rules.push_back({{"ex-right", L, {idx_right(), {"term", ParamKind::Term, true}}, "provide a witness"},
                   [](const Sequent& s) { return scan(s, false, rel_op(RelFormulaOp::Exists)); },
                   [](Ctx& ctx) {
                     Target t{false, index_param(ctx, "j", false)};
                     const RF& f = expect_rel(ctx, t, RelFormulaOp::Exists, "an existential");
                     const auto a = term_param(ctx, "term");
                     return std::vector<Sequent>{add_right(ctx.s, {substitute(f.body(), f.bound_var(), a)})};
                   }});

  rules.push_back({{"incl-ext",
                    L,
                    {idx_right(), {"fresh", ParamKind::FreshName, true}, {"fresh2", ParamKind::FreshName, false}},
                    "prove an inclusion elementwise"},
                   [](const Sequent& s) { return scan(s, false, rel_op(RelFormulaOp::Subset)); },
                   [](Ctx& ctx) {
                     Target t{false, index_param(ctx, "j", false)};
                     const RF& f = expect_rel(ctx, t, RelFormulaOp::Subset, "an inclusion");
                     const int ar = arity(f.expr(0), ctx.extended());
                     std::vector<AtomTerm> tuple{AtomTerm::constant(fresh_param(ctx, "fresh"))};
                     if (ar == 2) {
                       if (!ctx.params.contains("fresh2"))
                         throw Error(ErrorCode::ArityMismatch, "incl-ext: a binary inclusion needs `fresh2`");
                       const auto d = fresh_param(ctx, "fresh2");
                       if (d == tuple[0].name)
                         throw Error(ErrorCode::FreshnessViolation, "incl-ext: `fresh` and `fresh2` must differ");
                       tuple.push_back(AtomTerm::constant(d));
                     } else if (ctx.params.contains("fresh2")) {
                       throw Error(ErrorCode::ArityMismatch, "incl-ext: a set inclusion takes one fresh atom");
                     }
                     return std::vector<Sequent>{
                         replace(ctx.s, t, {RF::implies(RF::member(tuple, f.expr(0)), RF::member(tuple, f.expr(1)))})};
                   }});

  rules.push_back({{"eq-split", L, {idx_left("i", false), idx_right("j", false)}, "an equation is two inclusions"},
                   [](const Sequent& s) { return both_sides(s, rel_op(RelFormulaOp::Eq)); },
                   [](Ctx& ctx) {
                     auto t = side_param(ctx);
                     const RF& f = expect_rel(ctx, t, RelFormulaOp::Eq, "an equation");
                     auto ab = RF::subset(f.expr(0), f.expr(1)), ba = RF::subset(f.expr(1), f.expr(0));
                     if (t.left) return std::vector<Sequent>{replace(ctx.s, t, {ab, ba})};
                     return std::vector<Sequent>{replace(ctx.s, t, {ab}), replace(ctx.s, t, {ba})};
                   }});

  rules.push_back({{"leibniz",
                    L,
                    {idx_left(), idx_right("j", false), idx_left("h", false)},
                    "rewrite with an antecedent equation, left to right"},
                   [](const Sequent& s) {
                     std::vector<Params> out;
                     for (std::size_t i = 0; i < s.antecedents().size(); ++i) {
                       const RF* eq = rel_of(s.antecedents()[i]);
                       if (!eq || eq->op() != RelFormulaOp::Eq) continue;
                       for (std::size_t j = 0; j < s.consequents().size(); ++j)
                         if (rewrites(s.consequents()[j].rel(), eq->expr(0), eq->expr(1)))
                           out.push_back({{"i", std::to_string(i)}, {"j", std::to_string(j)}});
                       for (std::size_t h = 0; h < s.antecedents().size(); ++h)
                         if (h != i && rewrites(s.antecedents()[h].rel(), eq->expr(0), eq->expr(1)))
                           out.push_back({{"i", std::to_string(i)}, {"h", std::to_string(h)}});
                     }
                     return out;
                   },
                   [](Ctx& ctx) {
                     const auto i = index_param(ctx, "i", true);
                     const RF& eq = expect_rel(ctx, {true, i}, RelFormulaOp::Eq, "an equation");
                     auto j = opt_index_param(ctx, "j", false);
                     auto h = opt_index_param(ctx, "h", true);
                     if (j.has_value() == h.has_value()) bad_param(ctx, "give exactly one of `j` and `h`");
                     if (h && *h == i) bad_param(ctx, "cannot rewrite the equation with itself");
                     Target t = j ? Target{false, *j} : Target{true, *h};
                     bool changed = false;
                     auto out = rewrite(t.formula(ctx.s).rel(), eq.expr(0), eq.expr(1), changed);
                     if (!changed) not_applicable(ctx, "the target does not mention the left-hand side");
                     return std::vector<Sequent>{replace(ctx.s, t, {out})};
                   }});

  const std::pair<const char*, RelOp> member_ops[] = {
      {"union", RelOp::Union},   {"inter", RelOp::Inter},       {"diff", RelOp::Diff},
      {"join", RelOp::Join},     {"product", RelOp::Product},   {"transpose", RelOp::Transpose},
      {"iden", RelOp::Iden},     {"univ", RelOp::Univ2},        {"none", RelOp::None2},
      {"tclosure", RelOp::TClosure}, {"rtclosure", RelOp::RTClosure},
  };
  for (const auto& [name, op] : member_ops) add_member_unfold(rules, name, op);

  const std::pair<const char*, RelFormulaOp> card_ops[] = {
      {"some", RelFormulaOp::Some}, {"no", RelFormulaOp::No}, {"lone", RelFormulaOp::Lone}, {"one", RelFormulaOp::One}};
  for (const auto& [name, op] : card_ops) add_card_unfold(rules, name, op);

  return rules;
}

}  // namespace hg::kernel_detail
