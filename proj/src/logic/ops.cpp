#include <algorithm>
#include <functional>

#include "hg/logic.hpp"

namespace hg {

namespace {

[[noreturn]] void ill_formed(const std::string& msg) { throw Error(ErrorCode::IllFormed, msg); }

void collect_expr_names(const RelExpr& e, std::set<std::string>& out) {
  switch (e.op()) {
    case RelOp::Const:
    case RelOp::AtomConst:
    case RelOp::Var:
      out.insert(e.name());
      break;
    default:
      for (std::size_t i = 0; i < e.arg_count(); ++i) collect_expr_names(e.arg(i), out);
  }
}

void collect_expr_atoms(const RelExpr& e, std::set<std::string>& out) {
  if (e.op() == RelOp::AtomConst) {
    out.insert(e.name());
    return;
  }
  for (std::size_t i = 0; i < e.arg_count(); ++i) collect_expr_atoms(e.arg(i), out);
}

void collect_expr_vars(const RelExpr& e, const std::set<std::string>& bound, std::set<std::string>& out) {
  if (e.op() == RelOp::Var) {
    if (!bound.contains(e.name())) out.insert(e.name());
    return;
  }
  for (std::size_t i = 0; i < e.arg_count(); ++i) collect_expr_vars(e.arg(i), bound, out);
}

void collect_free_vars(const RelFormula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  for (const auto& e : f.exprs()) collect_expr_vars(e, bound, out);
  for (const auto& t : f.tuple())
    if (t.kind == AtomTerm::Kind::Var && !bound.contains(t.name)) out.insert(t.name);
  if (f.is_quantifier()) {
    const bool was_bound = bound.contains(f.bound_var());
    bound.insert(f.bound_var());
    collect_free_vars(f.body(), bound, out);
    if (!was_bound) bound.erase(f.bound_var());
    return;
  }
  for (std::size_t i = 0; i < f.arg_count(); ++i) collect_free_vars(f.arg(i), bound, out);
}

void collect_fork_names(const ForkTerm& t, std::set<std::string>& out, bool points_only) {
  if (t.op() == ForkOp::Point || (!points_only && t.op() == ForkOp::Const)) out.insert(t.name());
  for (std::size_t i = 0; i < t.arg_count(); ++i) collect_fork_names(t.arg(i), out, points_only);
}

void collect_fork_names(const ForkFormula& f, std::set<std::string>& out, bool points_only) {
  if (f.is_atomic()) {
    collect_fork_names(f.lhs(), out, points_only);
    collect_fork_names(f.rhs(), out, points_only);
    return;
  }
  for (std::size_t i = 0; i < f.arg_count(); ++i) collect_fork_names(f.arg(i), out, points_only);
}

void collect_rel_names(const RelFormula& f, std::set<std::string>& out) {
  for (const auto& e : f.exprs()) collect_expr_names(e, out);
  for (const auto& t : f.tuple()) out.insert(t.name);
  if (f.is_quantifier()) out.insert(f.bound_var());
  for (std::size_t i = 0; i < f.arg_count(); ++i) collect_rel_names(f.arg(i), out);
}

void collect_rel_atoms(const RelFormula& f, std::set<std::string>& out) {
  for (const auto& e : f.exprs()) collect_expr_atoms(e, out);
  for (const auto& t : f.tuple())
    if (t.kind == AtomTerm::Kind::Const) out.insert(t.name);
  for (std::size_t i = 0; i < f.arg_count(); ++i) collect_rel_atoms(f.arg(i), out);
}

RelExpr subst_expr(const RelExpr& e, const std::string& x, const AtomTerm& t) {
  if (e.op() == RelOp::Var) return e.name() == x ? t.as_expr() : e;
  if (e.is_leaf()) return e;
  if (e.arg_count() == 1) return RelExpr::unary(e.op(), subst_expr(e.arg(0), x, t));
  return RelExpr::binary(e.op(), subst_expr(e.lhs(), x, t), subst_expr(e.rhs(), x, t));
}

void check_fork_term(const ForkTerm& t, const Signature& sig, bool allow_undeclared) {
  switch (t.op()) {
    case ForkOp::Const: {
      auto k = sig.fork_kind(t.name());
      if (!k) ill_formed("undeclared FORK constant " + t.name());
      if (*k != ForkConstKind::Relation) ill_formed(t.name() + " is a point, not a relation constant");
      return;
    }
    case ForkOp::Point: {
      auto k = sig.fork_kind(t.name());
      if (!k) {
        if (!allow_undeclared) ill_formed("undeclared point " + t.name());
        return;
      }
      if (*k != ForkConstKind::Point) ill_formed(t.name() + " is not a point constant");
      return;
    }
    default:
      for (std::size_t i = 0; i < t.arg_count(); ++i) check_fork_term(t.arg(i), sig, allow_undeclared);
  }
}

void check_fork_formula(const ForkFormula& f, const Signature& sig, bool allow_undeclared) {
  if (f.is_atomic()) {
    check_fork_term(f.lhs(), sig, allow_undeclared);
    check_fork_term(f.rhs(), sig, allow_undeclared);
    return;
  }
  for (std::size_t i = 0; i < f.arg_count(); ++i) check_fork_formula(f.arg(i), sig, allow_undeclared);
}

void check_rel_atoms(const RelExpr& e, const Signature& sig, bool allow_undeclared) {
  if (e.op() == RelOp::AtomConst) {
    if (sig.relation_arity(e.name())) ill_formed(e.name() + " is a relation, not an atom");
    if (!allow_undeclared && !sig.is_atom(e.name())) ill_formed("undeclared atom " + e.name());
  }
  for (std::size_t i = 0; i < e.arg_count(); ++i) check_rel_atoms(e.arg(i), sig, allow_undeclared);
}

void check_rel_formula(const RelFormula& f, const Signature& sig, bool allow_undeclared,
                       std::vector<std::string>& bound) {
  auto check_expr = [&](const RelExpr& e) {
    check_rel_atoms(e, sig, allow_undeclared);
    std::set<std::string> free;
    collect_expr_vars(e, {bound.begin(), bound.end()}, free);
    if (!free.empty()) ill_formed("free variable " + *free.begin());
    return arity(e, sig);
  };
  switch (f.op()) {
    case RelFormulaOp::Subset:
    case RelFormulaOp::Eq:
      if (check_expr(f.expr(0)) != check_expr(f.expr(1))) ill_formed("comparison of different arities");
      return;
    case RelFormulaOp::Member: {
      const int a = check_expr(f.expr(0));
      if (static_cast<std::size_t>(a) != f.tuple().size()) ill_formed("member tuple does not match arity");
      for (const auto& t : f.tuple()) {
        if (t.kind == AtomTerm::Kind::Var) {
          if (std::find(bound.begin(), bound.end(), t.name) == bound.end())
            ill_formed("free variable " + t.name);
        } else {
          if (sig.relation_arity(t.name)) ill_formed(t.name + " is a relation, not an atom");
          if (!allow_undeclared && !sig.is_atom(t.name)) ill_formed("undeclared atom " + t.name);
        }
      }
      return;
    }
    case RelFormulaOp::Some:
    case RelFormulaOp::No:
    case RelFormulaOp::Lone:
    case RelFormulaOp::One:
      check_expr(f.expr(0));
      return;
    case RelFormulaOp::Forall:
    case RelFormulaOp::Exists:
      if (sig.declares(f.bound_var())) ill_formed("bound variable shadows declared name " + f.bound_var());
      bound.push_back(f.bound_var());
      check_rel_formula(f.body(), sig, allow_undeclared, bound);
      bound.pop_back();
      return;
    default:
      for (std::size_t i = 0; i < f.arg_count(); ++i) check_rel_formula(f.arg(i), sig, allow_undeclared, bound);
  }
}

}  // namespace

int arity(const RelExpr& e, const Signature& sig) {
  switch (e.op()) {
    case RelOp::Const: {
      auto a = sig.relation_arity(e.name());
      if (!a) ill_formed("undeclared relation " + e.name());
      return *a;
    }
    case RelOp::AtomConst:
      if (sig.relation_arity(e.name())) ill_formed(e.name() + " is a relation, not an atom");
      return 1;
    case RelOp::Var:
    case RelOp::Univ1:
    case RelOp::None1:
      return 1;
    case RelOp::Iden:
    case RelOp::Univ2:
    case RelOp::None2:
      return 2;
    case RelOp::Union:
    case RelOp::Inter:
    case RelOp::Diff: {
      const int a = arity(e.lhs(), sig);
      const int b = arity(e.rhs(), sig);
      if (a != b) ill_formed("operands of different arities");
      return a;
    }
    case RelOp::Join: {
      const int a = arity(e.lhs(), sig);
      const int b = arity(e.rhs(), sig);
      if (a == 1 && b == 1) ill_formed("join of two arity-1 expressions");
      return a + b - 2;
    }
    case RelOp::Product:
      if (arity(e.lhs(), sig) != 1 || arity(e.rhs(), sig) != 1) ill_formed("product needs arity-1 operands");
      return 2;
    case RelOp::Transpose:
    case RelOp::TClosure:
    case RelOp::RTClosure:
      if (arity(e.arg(0), sig) != 2) ill_formed("transpose/closure of an arity-1 expression");
      return 2;
  }
  ill_formed("unknown REL operator");
}

void check_well_formed(const Formula& f, const Signature& sig, bool allow_undeclared_atoms) {
  if (f.language() != sig.language()) ill_formed("formula and signature languages differ");
  if (f.is_rel()) {
    std::vector<std::string> bound;
    check_rel_formula(f.rel(), sig, allow_undeclared_atoms, bound);
  } else {
    check_fork_formula(f.fork(), sig, allow_undeclared_atoms);
  }
}

void check_well_formed(const Sequent& s, const Signature& sig, bool allow_undeclared_atoms) {
  if (s.language() != sig.language()) ill_formed("sequent and signature languages differ");
  for (const auto& f : s.antecedents()) check_well_formed(f, sig, allow_undeclared_atoms);
  for (const auto& f : s.consequents()) check_well_formed(f, sig, allow_undeclared_atoms);
}

void check_well_formed(const Spec& spec) {
  std::set<std::string> names;
  for (const auto* list : {&spec.axioms, &spec.goals}) {
    for (const auto& nf : *list) {
      if (!names.insert(nf.name).second) throw Error(ErrorCode::DuplicateName, "duplicate name " + nf.name);
      check_well_formed(nf.formula, spec.signature, false);
    }
  }
}

RelFormula substitute(const RelFormula& f, const std::string& x, const AtomTerm& t) {
  auto subst_term = [&](const AtomTerm& a) {
    return (a.kind == AtomTerm::Kind::Var && a.name == x) ? t : a;
  };
  switch (f.op()) {
    case RelFormulaOp::Subset:
      return RelFormula::subset(subst_expr(f.expr(0), x, t), subst_expr(f.expr(1), x, t));
    case RelFormulaOp::Eq:
      return RelFormula::eq(subst_expr(f.expr(0), x, t), subst_expr(f.expr(1), x, t));
    case RelFormulaOp::Member: {
      std::vector<AtomTerm> tuple;
      for (const auto& a : f.tuple()) tuple.push_back(subst_term(a));
      return RelFormula::member(std::move(tuple), subst_expr(f.expr(0), x, t));
    }
    case RelFormulaOp::Some:
    case RelFormulaOp::No:
    case RelFormulaOp::Lone:
    case RelFormulaOp::One:
      return RelFormula::cardinality(f.op(), subst_expr(f.expr(0), x, t));
    case RelFormulaOp::Not:
      return RelFormula::negation(substitute(f.arg(0), x, t));
    case RelFormulaOp::And:
    case RelFormulaOp::Or:
    case RelFormulaOp::Implies:
    case RelFormulaOp::Iff:
      return RelFormula::connective(f.op(), substitute(f.arg(0), x, t), substitute(f.arg(1), x, t));
    case RelFormulaOp::Forall:
    case RelFormulaOp::Exists: {
      if (f.bound_var() == x) return f;  // shadowed
      const auto body_free = free_variables(f.body());
      if (!body_free.contains(x)) return f;
      if (t.kind == AtomTerm::Kind::Var && t.name == f.bound_var()) {
        // rename the binder so the substituted variable is not captured
        std::set<std::string> avoid = all_names(Formula(f.body()));
        avoid.insert(t.name);
        avoid.insert(x);
        const std::string renamed = fresh_name(f.bound_var(), avoid);
        RelFormula body = substitute(f.body(), f.bound_var(), AtomTerm::var(renamed));
        return RelFormula::quantifier(f.op(), renamed, substitute(body, x, t));
      }
      return RelFormula::quantifier(f.op(), f.bound_var(), substitute(f.body(), x, t));
    }
  }
  return f;
}

std::set<std::string> free_variables(const RelFormula& f) {
  std::set<std::string> bound;
  std::set<std::string> out;
  collect_free_vars(f, bound, out);
  return out;
}

std::set<std::string> free_atom_constants(const Formula& f) {
  std::set<std::string> out;
  if (f.is_rel())
    collect_rel_atoms(f.rel(), out);
  else
    collect_fork_names(f.fork(), out, true);
  return out;
}

std::set<std::string> free_atom_constants(const Sequent& s) {
  std::set<std::string> out;
  for (const auto* side : {&s.antecedents(), &s.consequents()})
    for (const auto& f : *side) out.merge(free_atom_constants(f));
  return out;
}

std::set<std::string> all_names(const Formula& f) {
  std::set<std::string> out;
  if (f.is_rel())
    collect_rel_names(f.rel(), out);
  else
    collect_fork_names(f.fork(), out, false);
  return out;
}

std::set<std::string> all_names(const Sequent& s) {
  std::set<std::string> out;
  for (const auto* side : {&s.antecedents(), &s.consequents()})
    for (const auto& f : *side) out.merge(all_names(f));
  return out;
}

Formula fold_sequent(const Sequent& s) {
  const Language lang = s.language();
  auto fold = [&](const std::vector<Formula>& fs, Connective c, const Formula& empty) {
    if (fs.empty()) return empty;
    Formula acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = Formula::binary(c, acc, fs[i]);
    return acc;
  };
  Formula lhs = fold(s.antecedents(), Connective::And, Formula::truth(lang));
  Formula rhs = fold(s.consequents(), Connective::Or, Formula::falsity(lang));
  return Formula::binary(Connective::Implies, lhs, rhs);
}

Signature extend_with_free_constants(const Signature& sig, const Sequent& s) {
  Signature out = sig;
  for (const auto& name : free_atom_constants(s)) {
    if (sig.declares(name)) continue;
    if (sig.language() == Language::Rel)
      out.add_atom(name);
    else
      out.add_fork_constant(name, ForkConstKind::Point);
  }
  return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  if (!avoid.contains(base)) return base;
  for (int i = 1;; ++i) {
    std::string candidate = base + std::to_string(i);
    if (!avoid.contains(candidate)) return candidate;
  }
}

}  // namespace hg
