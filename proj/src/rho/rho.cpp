#include "hg/rho.hpp"

#include <algorithm>

#include "../modelfinder/masks.hpp"
#include "hg/kernel.hpp"

namespace hg {

using namespace masks;

namespace {

using T = ForkTerm;
using FF = ForkFormula;

[[noreturn]] void unsupported(const std::string& msg) { throw Error(ErrorCode::UnsupportedFormula, msg); }

std::string unique(std::string name, std::set<std::string>& taken) {
  while (taken.contains(name)) name += '\'';
  taken.insert(name);
  return name;
}

T translate(const RelExpr& e, const Signature& sig, const TranslationLedger& ledger) {
  const auto tr = [&](const RelExpr& x) { return translate(x, sig, ledger); };
  switch (e.op()) {
    case RelOp::Const: {
      if (arity(e, sig) == 2) return T::constant(e.name());
      auto it = ledger.sets.find(e.name());
      if (it == ledger.sets.end()) throw Error(ErrorCode::IllFormed, "set `" + e.name() + "` has no ledger entry");
      return T::constant(it->second);
    }
    case RelOp::AtomConst: {
      auto it = ledger.points.find(e.name());
      if (it == ledger.points.end()) throw Error(ErrorCode::IllFormed, "atom `" + e.name() + "` has no ledger entry");
      return T::point(it->second);
    }
    case RelOp::Var: unsupported("variable `" + e.name() + "` (eliminate quantifiers first)");
    case RelOp::Iden: return T::ident();
    case RelOp::Univ1: return T::ident();
    case RelOp::Univ2: return T::one();
    case RelOp::None1:
    case RelOp::None2: return T::zero();
    case RelOp::Union: return T::plus(tr(e.lhs()), tr(e.rhs()));
    case RelOp::Inter: return T::dot(tr(e.lhs()), tr(e.rhs()));
    case RelOp::Diff:
      if (arity(e, sig) == 1) return T::dot(tr(e.lhs()), T::dot(T::compl_of(tr(e.rhs())), T::ident()));
      return T::dot(tr(e.lhs()), T::compl_of(tr(e.rhs())));
    case RelOp::Join: {
      const int la = arity(e.lhs(), sig), ra = arity(e.rhs(), sig);
      if (la == 2 && ra == 2) return T::comp(tr(e.lhs()), tr(e.rhs()));
      // set.rel is the range of s';r, rel.set the domain of r;s', both as partial identities
      if (la == 1) return T::dot(T::comp(T::one(), T::comp(tr(e.lhs()), tr(e.rhs()))), T::ident());
      return T::dot(T::comp(T::comp(tr(e.lhs()), tr(e.rhs())), T::one()), T::ident());
    }
    case RelOp::Product: return T::comp(tr(e.lhs()), T::comp(T::one(), tr(e.rhs())));
    case RelOp::Transpose: return T::conv(tr(e.arg(0)));
    case RelOp::TClosure: {
      auto a = tr(e.arg(0));
      return T::comp(a, T::star(a));
    }
    case RelOp::RTClosure: return T::star(tr(e.arg(0)));
  }
  throw Error(ErrorCode::IllFormed, "unknown expression");
}

T point_of(const AtomTerm& a, const TranslationLedger& ledger) {
  if (a.kind == AtomTerm::Kind::Var) unsupported("variable `" + a.name + "` (eliminate quantifiers first)");
  auto it = ledger.points.find(a.name);
  if (it == ledger.points.end()) throw Error(ErrorCode::IllFormed, "atom `" + a.name + "` has no ledger entry");
  return T::point(it->second);
}

FF translate(const RelFormula& f, const Signature& sig, const TranslationLedger& ledger) {
  const auto te = [&](const RelExpr& x) { return translate(x, sig, ledger); };
  const auto tf = [&](const RelFormula& x) { return translate(x, sig, ledger); };
  switch (f.op()) {
    case RelFormulaOp::Subset: return FF::leq(te(f.expr(0)), te(f.expr(1)));
    case RelFormulaOp::Eq: return FF::eq(te(f.expr(0)), te(f.expr(1)));
    case RelFormulaOp::Member: {
      const auto& t = f.tuple();
      if (t.size() == 1) return FF::negation(FF::eq(T::dot(point_of(t[0], ledger), te(f.expr(0))), T::zero()));
      return FF::negation(FF::eq(
          T::comp(point_of(t[0], ledger), T::comp(te(f.expr(0)), point_of(t[1], ledger))), T::zero()));
    }
    case RelFormulaOp::Some: return FF::negation(FF::eq(te(f.expr(0)), T::zero()));
    case RelFormulaOp::No: return FF::eq(te(f.expr(0)), T::zero());
    case RelFormulaOp::Lone:
    case RelFormulaOp::One: {
      if (arity(f.expr(0), sig) == 2) unsupported("lone/one of a binary relation");
      auto e = te(f.expr(0));
      auto lone = FF::leq(T::comp(e, T::comp(T::one(), e)), T::ident());
      if (f.op() == RelFormulaOp::Lone) return lone;
      return FF::conj(lone, FF::negation(FF::eq(e, T::zero())));
    }
    case RelFormulaOp::Not: return FF::negation(tf(f.arg(0)));
    case RelFormulaOp::And: return FF::conj(tf(f.arg(0)), tf(f.arg(1)));
    case RelFormulaOp::Or: return FF::disj(tf(f.arg(0)), tf(f.arg(1)));
    case RelFormulaOp::Implies: return FF::implies(tf(f.arg(0)), tf(f.arg(1)));
    case RelFormulaOp::Iff: return FF::iff(tf(f.arg(0)), tf(f.arg(1)));
    case RelFormulaOp::Forall:
    case RelFormulaOp::Exists: unsupported("quantifier over `" + f.bound_var() + "`");
  }
  throw Error(ErrorCode::IllFormed, "unknown formula");
}

class Rel2Fork : public RhoTranslator {
 public:
  std::string_view id() const override { return "rel2fork"; }
  Language source() const override { return Language::Rel; }
  Language target() const override { return Language::Fork; }
  TranslationResult translate(const Sequent& s, const Signature& sig) const override {
    return translate_sequent(s, sig);
  }
};

}  // namespace

TranslationLedger make_ledger(const Signature& sig, const std::set<std::string>& atoms,
                              const std::set<std::string>& taken) {
  std::set<std::string> used = taken;
  for (const auto& r : sig.relations())
    if (r.arity == 2) used.insert(r.name);
  TranslationLedger out;
  for (const auto& r : sig.relations())
    if (r.arity == 1) out.sets[r.name] = unique(r.name + "'", used);
  for (const auto& a : atoms) out.points[a] = unique("p_" + a, used);
  return out;
}

Signature translated_signature(const Signature& sig, const TranslationLedger& ledger) {
  Signature out(Language::Fork);
  for (const auto& r : sig.relations())
    out.add_fork_constant(r.arity == 2 ? r.name : ledger.sets.at(r.name), ForkConstKind::Relation);
  for (const auto& [_, p] : ledger.points) out.add_fork_constant(p, ForkConstKind::Point);
  return out;
}

ForkTerm translate_term(const RelExpr& e, const Signature& sig, const TranslationLedger& ledger) {
  return translate(e, sig, ledger);
}

ForkFormula translate_formula(const RelFormula& f, const Signature& sig, const TranslationLedger& ledger) {
  return translate(f, sig, ledger);
}

TranslationResult translate_sequent(const Sequent& s, const Signature& sig) {
  if (s.language() != Language::Rel) throw Error(ErrorCode::IllFormed, "only REL sequents translate");
  TranslationLedger ledger = make_ledger(sig, free_atom_constants(s), all_names(s));
  const Signature ext = extend_with_free_constants(sig, s);

  auto side = [&](const std::vector<Formula>& fs, const char* what) {
    std::vector<Formula> out;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      try {
        out.emplace_back(translate(fs[i].rel(), ext, ledger));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::UnsupportedFormula) throw;
        throw Error(ErrorCode::UnsupportedFormula, std::string(what) + " " + std::to_string(i) + ": " + e.what());
      }
    }
    return out;
  };
  auto ante = side(s.antecedents(), "antecedent");
  auto cons = side(s.consequents(), "consequent");

  TranslationResult r{Sequent(Language::Fork, {}, {}), ledger, translated_signature(sig, ledger), {}, {}};
  std::vector<Formula> lead;
  for (const auto& [_, p] : ledger.points)
    for (const auto& ax : point_axioms(p)) {
      r.point_axioms.push_back(ax);
      lead.emplace_back(ax);
    }
  for (const auto& [_, c] : ledger.sets) r.set_axioms.push_back(FF::leq(T::constant(c), T::ident()));
  lead.insert(lead.end(), ante.begin(), ante.end());
  r.sequent = Sequent(Language::Fork, std::move(lead), std::move(cons));
  return r;
}

// ---------------------------------------------------------------------------
// Reduct semantics

CompiledReduct::CompiledReduct(const ForkFormula& f, const Vocabulary& vocab, const TranslationLedger& ledger) {
  root_ = compile(f, vocab, ledger);
}

CompiledReduct::CompiledReduct(const ForkTerm& t, const Vocabulary& vocab, const TranslationLedger& ledger) {
  root_ = compile(t, vocab, ledger);
}

int CompiledReduct::compile(const ForkTerm& t, const Vocabulary& vocab, const TranslationLedger& ledger) {
  Node n{static_cast<int>(t.op())};
  switch (t.op()) {
    case ForkOp::Fork: throw Error(ErrorCode::ForkNotInterpretable, "fork has no finite reduct semantics");
    case ForkOp::Const: {
      std::string rel = t.name();
      for (const auto& [s, c] : ledger.sets)
        if (c == t.name()) {
          rel = s;
          n.set = true;
        }
      for (std::size_t i = 0; i < vocab.relations.size(); ++i)
        if (vocab.relations[i].name == rel && (vocab.relations[i].arity == 1) == n.set) n.slot = static_cast<int>(i);
      if (n.slot < 0) throw Error(ErrorCode::IllFormed, "constant `" + t.name() + "` is not interpreted");
      break;
    }
    case ForkOp::Point: {
      std::string atom;
      for (const auto& [a, p] : ledger.points)
        if (p == t.name()) atom = a;
      for (std::size_t i = 0; i < vocab.atoms.size(); ++i)
        if (!atom.empty() && vocab.atoms[i] == atom) n.slot = static_cast<int>(i);
      if (n.slot < 0) throw Error(ErrorCode::IllFormed, "point `" + t.name() + "` is not interpreted");
      break;
    }
    default:
      if (t.arg_count() >= 1) n.a = compile(t.arg(0), vocab, ledger);
      if (t.arg_count() == 2) n.b = compile(t.arg(1), vocab, ledger);
  }
  nodes_.push_back(n);
  return static_cast<int>(nodes_.size()) - 1;
}

int CompiledReduct::compile(const ForkFormula& f, const Vocabulary& vocab, const TranslationLedger& ledger) {
  Node n{100 + static_cast<int>(f.op())};
  if (f.op() == ForkFormulaOp::Eq || f.op() == ForkFormulaOp::Leq) {
    n.a = compile(f.lhs(), vocab, ledger);
    n.b = compile(f.rhs(), vocab, ledger);
  } else {
    n.a = compile(f.arg(0), vocab, ledger);
    if (f.op() != ForkFormulaOp::Not) n.b = compile(f.arg(1), vocab, ledger);
  }
  nodes_.push_back(n);
  return static_cast<int>(nodes_.size()) - 1;
}

std::uint64_t CompiledReduct::term(int idx, const PackedInterpretation& p) const {
  const Node& n = nodes_[static_cast<std::size_t>(idx)];
  const int sz = p.size;
  switch (static_cast<ForkOp>(n.op)) {
    case ForkOp::Const: {
      const std::uint64_t m = p.masks[static_cast<std::size_t>(n.slot)];
      if (!n.set) return m;
      std::uint64_t d = 0;
      for (int i = 0; i < sz; ++i)
        if (m >> i & 1) d |= std::uint64_t{1} << (i * sz + i);
      return d;
    }
    case ForkOp::Point: {
      const int a = p.atoms[static_cast<std::size_t>(n.slot)];
      return std::uint64_t{1} << (a * sz + a);
    }
    case ForkOp::Zero: return 0;
    case ForkOp::One: return full_mask(sz * sz);
    case ForkOp::Ident: return diag_mask(sz);
    case ForkOp::Plus: return term(n.a, p) | term(n.b, p);
    case ForkOp::Dot: return term(n.a, p) & term(n.b, p);
    case ForkOp::Compl: return ~term(n.a, p) & full_mask(sz * sz);
    case ForkOp::Comp: return compose(term(n.a, p), term(n.b, p), sz);
    case ForkOp::Conv: return transpose_mask(term(n.a, p), sz);
    case ForkOp::Star: return closure_mask(term(n.a, p), sz) | diag_mask(sz);
    case ForkOp::Fork: break;
  }
  throw Error(ErrorCode::ForkNotInterpretable, "fork has no finite reduct semantics");
}

bool CompiledReduct::formula(int idx, const PackedInterpretation& p) const {
  const Node& n = nodes_[static_cast<std::size_t>(idx)];
  switch (static_cast<ForkFormulaOp>(n.op - 100)) {
    case ForkFormulaOp::Eq: return term(n.a, p) == term(n.b, p);
    case ForkFormulaOp::Leq: return (term(n.a, p) & ~term(n.b, p)) == 0;
    case ForkFormulaOp::Not: return !formula(n.a, p);
    case ForkFormulaOp::And: return formula(n.a, p) && formula(n.b, p);
    case ForkFormulaOp::Or: return formula(n.a, p) || formula(n.b, p);
    case ForkFormulaOp::Implies: return !formula(n.a, p) || formula(n.b, p);
    case ForkFormulaOp::Iff: return formula(n.a, p) == formula(n.b, p);
  }
  return false;
}

bool CompiledReduct::holds(const PackedInterpretation& p) const { return formula(root_, p); }

std::uint64_t CompiledReduct::value(const PackedInterpretation& p) const { return term(root_, p); }

namespace {

// Every relation and atom of the interpretation, in its own order.
Vocabulary vocabulary_of(const FiniteInterpretation& interp) {
  Vocabulary v;
  for (const auto& r : interp.relations) v.relations.push_back({r.name, r.arity});
  for (const auto& a : interp.atoms) v.atoms.push_back(a.name);
  std::sort(v.atoms.begin(), v.atoms.end());
  return v;
}

}  // namespace

TupleSet reduct_interpret(const ForkTerm& t, const FiniteInterpretation& interp, const TranslationLedger& ledger) {
  const Vocabulary v = vocabulary_of(interp);
  CompiledReduct c(t, v, ledger);
  const auto p = pack(v, interp);
  TupleSet out;
  const std::uint64_t m = c.value(p);
  const int n = interp.size;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (m >> (i * n + j) & 1) out.insert({i, j});
  return out;
}

bool reduct_holds(const ForkFormula& f, const FiniteInterpretation& interp, const TranslationLedger& ledger) {
  const Vocabulary v = vocabulary_of(interp);
  return CompiledReduct(f, v, ledger).holds(pack(v, interp));
}

bool reduct_holds(const Sequent& s, const FiniteInterpretation& interp, const TranslationLedger& ledger) {
  return reduct_holds(fold_sequent(s).fork(), interp, ledger);
}

const RhoTranslator& rel2fork_translator() {
  static const Rel2Fork t;
  return t;
}

}  // namespace hg
