#include "calculus.hpp"
#include "hg/syntax.hpp"

namespace hg::kernel_detail {

namespace {

using T = ForkTerm;
using FF = ForkFormula;

const FF* fork_of(const Formula& f) { return f.is_rel() ? nullptr : &f.fork(); }

std::function<bool(const Formula&)> fork_op(ForkFormulaOp op) {
  return [op](const Formula& f) { return !f.is_rel() && f.fork().op() == op; };
}

const FF& expect_fork(Ctx& ctx, Target t, ForkFormulaOp op, const char* what) {
  const FF* f = fork_of(t.formula(ctx.s));
  if (!f || f->op() != op)
    not_applicable(ctx, std::string(t.left ? "antecedent " : "consequent ") + std::to_string(t.index) + " is not " +
                            what);
  return *f;
}

std::vector<Params> both_sides(const Sequent& s, const std::function<bool(const Formula&)>& pred) {
  auto out = scan(s, true, pred);
  auto right = scan(s, false, pred);
  out.insert(out.end(), right.begin(), right.end());
  return out;
}

T rewrite(const T& t, const T& from, const T& to, bool& changed) {
  if (t == from) {
    changed = true;
    return to;
  }
  switch (t.arg_count()) {
    case 0: return t;
    case 1: return T::unary(t.op(), rewrite(t.arg(0), from, to, changed));
    default: return T::binary(t.op(), rewrite(t.lhs(), from, to, changed), rewrite(t.rhs(), from, to, changed));
  }
}

FF rewrite(const FF& f, const T& from, const T& to, bool& changed) {
  switch (f.op()) {
    case ForkFormulaOp::Eq: return FF::eq(rewrite(f.lhs(), from, to, changed), rewrite(f.rhs(), from, to, changed));
    case ForkFormulaOp::Leq: return FF::leq(rewrite(f.lhs(), from, to, changed), rewrite(f.rhs(), from, to, changed));
    case ForkFormulaOp::Not: return FF::negation(rewrite(f.arg(0), from, to, changed));
    default:
      return FF::connective(f.op(), rewrite(f.arg(0), from, to, changed), rewrite(f.arg(1), from, to, changed));
  }
}

bool mentions(const FF& f, const T& t) {
  bool changed = false;
  rewrite(f, t, t, changed);
  return changed;
}

// t + u = u, read back as t <= u
bool is_leq_form(const FF& f) {
  return f.op() == ForkFormulaOp::Eq && f.lhs().op() == ForkOp::Plus && f.lhs().rhs() == f.rhs();
}

void add_mono(std::vector<RuleImpl>& rules, const std::string& suffix, ForkOp op) {
  auto pred = [op](const Formula& f) {
    return !f.is_rel() && f.fork().op() == ForkFormulaOp::Leq && f.fork().lhs().op() == op &&
           f.fork().rhs().op() == op;
  };
  rules.push_back({{"mono-" + suffix, Language::Fork, {idx_right()},
                    "reduce an inclusion between two " + suffix + " terms to their arguments"},
                   [pred](const Sequent& s) { return scan(s, false, pred); },
                   [op](Ctx& ctx) {
                     Target t{false, index_param(ctx, "j", false)};
                     const FF& f = expect_fork(ctx, t, ForkFormulaOp::Leq, "an inclusion");
                     if (f.lhs().op() != op || f.rhs().op() != op)
                       not_applicable(ctx, "both sides must have the same outer operator");
                     std::vector<Sequent> out;
                     for (std::size_t k = 0; k < f.lhs().arg_count(); ++k)
                       if (!(f.lhs().arg(k) == f.rhs().arg(k)))
                         out.push_back(replace(ctx.s, t, {FF::leq(f.lhs().arg(k), f.rhs().arg(k))}));
                     return out;
                   }});
}

}  // namespace

std::vector<RuleImpl> fork_rules() {
  std::vector<RuleImpl> rules;
  add_structural_rules(rules, Language::Fork);
  const auto L = Language::Fork;

  rules.push_back({{"eq-refl", L, {idx_right()}, "close t = t"},
                   [](const Sequent& s) {
                     return scan(s, false, [](const Formula& f) {
                       return !f.is_rel() && f.fork().op() == ForkFormulaOp::Eq && f.fork().lhs() == f.fork().rhs();
                     });
                   },
                   [](Ctx& ctx) {
                     Target t{false, index_param(ctx, "j", false)};
                     const FF& f = expect_fork(ctx, t, ForkFormulaOp::Eq, "an equation");
                     if (!(f.lhs() == f.rhs())) not_applicable(ctx, "the two sides differ");
                     return std::vector<Sequent>{};
                   }});

  rules.push_back({{"eq-sym", L, {idx_left("i", false), idx_right("j", false)}, "swap the sides of an equation"},
                   [](const Sequent& s) { return both_sides(s, fork_op(ForkFormulaOp::Eq)); },
                   [](Ctx& ctx) {
                     auto t = side_param(ctx);
                     const FF& f = expect_fork(ctx, t, ForkFormulaOp::Eq, "an equation");
                     return std::vector<Sequent>{replace(ctx.s, t, {FF::eq(f.rhs(), f.lhs())})};
                   }});

  rules.push_back({{"leq-def", L, {idx_left("i", false), idx_right("j", false)}, "t <= u iff t + u = u"},
                   [](const Sequent& s) {
                     return both_sides(s, [](const Formula& f) {
                       return !f.is_rel() && (f.fork().op() == ForkFormulaOp::Leq || is_leq_form(f.fork()));
                     });
                   },
                   [](Ctx& ctx) {
                     auto t = side_param(ctx);
                     const FF* f = fork_of(t.formula(ctx.s));
                     if (f && f->op() == ForkFormulaOp::Leq)
                       return std::vector<Sequent>{replace(ctx.s, t, {FF::eq(T::plus(f->lhs(), f->rhs()), f->rhs())})};
                     if (f && is_leq_form(*f))
                       return std::vector<Sequent>{replace(ctx.s, t, {FF::leq(f->lhs().lhs(), f->rhs())})};
                     not_applicable(ctx, "expected `t <= u` or `t + u = u`");
                   }});

  rules.push_back({{"leibniz-eq",
                    L,
                    {idx_left(), idx_right("j", false), idx_left("h", false)},
                    "rewrite with an antecedent equation, left to right"},
                   [](const Sequent& s) {
                     std::vector<Params> out;
                     for (std::size_t i = 0; i < s.antecedents().size(); ++i) {
                       const FF* eq = fork_of(s.antecedents()[i]);
                       if (!eq || eq->op() != ForkFormulaOp::Eq) continue;
                       for (std::size_t j = 0; j < s.consequents().size(); ++j)
                         if (mentions(s.consequents()[j].fork(), eq->lhs()))
                           out.push_back({{"i", std::to_string(i)}, {"j", std::to_string(j)}});
                       for (std::size_t h = 0; h < s.antecedents().size(); ++h)
                         if (h != i && mentions(s.antecedents()[h].fork(), eq->lhs()))
                           out.push_back({{"i", std::to_string(i)}, {"h", std::to_string(h)}});
                     }
                     return out;
                   },
                   [](Ctx& ctx) {
                     const auto i = index_param(ctx, "i", true);
                     const FF& eq = expect_fork(ctx, {true, i}, ForkFormulaOp::Eq, "an equation");
                     auto j = opt_index_param(ctx, "j", false);
                     auto h = opt_index_param(ctx, "h", true);
                     if (j.has_value() == h.has_value()) bad_param(ctx, "give exactly one of `j` and `h`");
                     if (h && *h == i) bad_param(ctx, "cannot rewrite the equation with itself");
                     Target t = j ? Target{false, *j} : Target{true, *h};
                     bool changed = false;
                     auto out = rewrite(t.formula(ctx.s).fork(), eq.lhs(), eq.rhs(), changed);
                     if (!changed) not_applicable(ctx, "the target does not mention the left-hand side");
                     return std::vector<Sequent>{replace(ctx.s, t, {out})};
                   }});

  const std::pair<const char*, ForkOp> mono_ops[] = {{"plus", ForkOp::Plus}, {"dot", ForkOp::Dot},
                                                     {"comp", ForkOp::Comp}, {"conv", ForkOp::Conv},
                                                     {"star", ForkOp::Star}, {"fork", ForkOp::Fork}};
  for (const auto& [name, op] : mono_ops) add_mono(rules, name, op);

  rules.push_back({{"axiom-inst",
                    L,
                    {{"schema", ParamKind::AxiomSchemaId, true}, {"subst", ParamKind::Substitution, false}},
                    "add an instance of an axiom schema to the antecedents"},
                   [](const Sequent&) { return std::vector<Params>{Params{}}; },
                   [](Ctx& ctx) {
                     const std::string& schema = raw_param(ctx, "schema");
                     std::map<std::string, ForkTerm> subst;
                     if (auto it = ctx.params.find("subst"); it != ctx.params.end() && !it->second.empty())
                       subst = parse_substitution(it->second, ctx.extended());
                     return std::vector<Sequent>{add_left(ctx.s, {instantiate_axiom(schema, subst)})};
                   }});

  rules.push_back({{"star-induction", L, {idx_right()}, "from id <= x and r;x <= x conclude *r <= x"},
                   [](const Sequent& s) {
                     return scan(s, false, [](const Formula& f) {
                       return !f.is_rel() && f.fork().op() == ForkFormulaOp::Leq && f.fork().lhs().op() == ForkOp::Star;
                     });
                   },
                   [](Ctx& ctx) {
                     Target t{false, index_param(ctx, "j", false)};
                     const FF& f = expect_fork(ctx, t, ForkFormulaOp::Leq, "an inclusion");
                     if (f.lhs().op() != ForkOp::Star) not_applicable(ctx, "the left side is not a star");
                     const T& r = f.lhs().arg(0);
                     const T& x = f.rhs();
                     return std::vector<Sequent>{replace(ctx.s, t, {FF::leq(T::ident(), x)}),
                                                 replace(ctx.s, t, {FF::leq(T::comp(r, x), x)})};
                   }});

  rules.push_back({{"point-intro",
                    L,
                    {idx_left(), idx_left("k"), {"fresh", ParamKind::FreshName, true}},
                    "a nonzero partial identity contains a point"},
                   [](const Sequent& s) {
                     std::vector<Params> out;
                     const auto& ante = s.antecedents();
                     for (std::size_t i = 0; i < ante.size(); ++i) {
                       const FF* nz = fork_of(ante[i]);
                       if (!nz || nz->op() != ForkFormulaOp::Not || nz->arg(0).op() != ForkFormulaOp::Eq ||
                           nz->arg(0).rhs().op() != ForkOp::Zero)
                         continue;
                       for (std::size_t k = 0; k < ante.size(); ++k) {
                         const FF* le = fork_of(ante[k]);
                         if (le && le->op() == ForkFormulaOp::Leq && le->lhs() == nz->arg(0).lhs() &&
                             le->rhs().op() == ForkOp::Ident)
                           out.push_back({{"i", std::to_string(i)}, {"k", std::to_string(k)}});
                       }
                     }
                     return out;
                   },
                   [](Ctx& ctx) {
                     const auto i = index_param(ctx, "i", true), k = index_param(ctx, "k", true);
                     const FF& nz = expect_fork(ctx, {true, i}, ForkFormulaOp::Not, "`!(t = 0)`");
                     if (nz.arg(0).op() != ForkFormulaOp::Eq || nz.arg(0).rhs().op() != ForkOp::Zero)
                       not_applicable(ctx, "antecedent " + std::to_string(i) + " is not `!(t = 0)`");
                     const T& t = nz.arg(0).lhs();
                     const FF& le = expect_fork(ctx, {true, k}, ForkFormulaOp::Leq, "`t <= id`");
                     if (!(le.lhs() == t) || le.rhs().op() != ForkOp::Ident)
                       not_applicable(ctx, "antecedent " + std::to_string(k) + " is not `t <= id` for the same t");
                     const auto p = fresh_param(ctx, "fresh");
                     std::vector<Formula> added{FF::leq(T::point(p), t)};
                     for (const auto& ax : point_axioms(p)) added.push_back(ax);
                     return std::vector<Sequent>{add_left(ctx.s, added)};
                   }});

  return rules;
}

}  // namespace hg::kernel_detail
