#include "hg/modelfinder.hpp"

#include "masks.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace hg {

using namespace masks;

namespace {

[[noreturn]] void ill_formed(const std::string& msg) { throw Error(ErrorCode::IllFormed, msg); }

int relation_index(const Vocabulary& v, std::string_view name) {
  for (std::size_t i = 0; i < v.relations.size(); ++i)
    if (v.relations[i].name == name) return static_cast<int>(i);
  return -1;
}

int atom_index(const Vocabulary& v, std::string_view name) {
  auto it = std::lower_bound(v.atoms.begin(), v.atoms.end(), name);
  if (it == v.atoms.end() || *it != name) return -1;
  return static_cast<int>(it - v.atoms.begin());
}

void collect_constants(const RelExpr& e, std::set<std::string>& rels, std::set<std::string>& atoms) {
  if (e.op() == RelOp::Const) rels.insert(e.name());
  if (e.op() == RelOp::AtomConst) atoms.insert(e.name());
  for (std::size_t i = 0; i < e.arg_count(); ++i) collect_constants(e.arg(i), rels, atoms);
}

void collect_constants(const RelFormula& f, std::set<std::string>& rels, std::set<std::string>& atoms) {
  for (const auto& e : f.exprs()) collect_constants(e, rels, atoms);
  for (const auto& t : f.tuple())
    if (t.kind == AtomTerm::Kind::Const) atoms.insert(t.name);
  for (std::size_t i = 0; i < f.arg_count(); ++i) collect_constants(f.arg(i), rels, atoms);
}

// Vocabulary of an interpretation, in its own order (atoms sorted).
Vocabulary vocabulary_of(const FiniteInterpretation& interp) {
  Vocabulary v;
  for (const auto& r : interp.relations) v.relations.push_back({r.name, r.arity});
  for (const auto& a : interp.atoms) v.atoms.push_back(a.name);
  std::sort(v.atoms.begin(), v.atoms.end());
  return v;
}

bool next_permutation_is_smaller(const PackedInterpretation& p, const Vocabulary& vocab, std::vector<int>& perm) {
  // p is canonical iff no relabelling of the universe yields a lexicographically
  // smaller (masks..., atoms...) key.
  const int n = p.size;
  std::iota(perm.begin(), perm.end(), 0);
  while (std::next_permutation(perm.begin(), perm.end())) {
    int cmp = 0;
    for (std::size_t r = 0; r < p.masks.size() && cmp == 0; ++r) {
      std::uint64_t m = 0;
      const std::uint64_t src = p.masks[r];
      if (vocab.relations[r].arity == 1) {
        for (int i = 0; i < n; ++i)
          if (src >> i & 1) m |= std::uint64_t{1} << perm[i];
      } else {
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            if (src >> (i * n + j) & 1) m |= std::uint64_t{1} << (perm[i] * n + perm[j]);
      }
      if (m != src) cmp = m < src ? -1 : 1;
    }
    for (std::size_t a = 0; a < p.atoms.size() && cmp == 0; ++a) {
      const int v = perm[p.atoms[a]];
      if (v != p.atoms[a]) cmp = v < p.atoms[a] ? -1 : 1;
    }
    if (cmp < 0) return true;
  }
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// FiniteInterpretation

const FiniteInterpretation::Relation* FiniteInterpretation::relation(std::string_view name) const {
  for (const auto& r : relations)
    if (r.name == name) return &r;
  return nullptr;
}

std::optional<int> FiniteInterpretation::atom(std::string_view name) const {
  for (const auto& a : atoms)
    if (a.name == name) return a.value;
  return std::nullopt;
}

void FiniteInterpretation::set_relation(std::string name, int arity, TupleSet tuples) {
  for (auto& r : relations) {
    if (r.name == name) {
      r.arity = arity;
      r.tuples = std::move(tuples);
      return;
    }
  }
  relations.push_back({std::move(name), arity, std::move(tuples)});
}

void FiniteInterpretation::set_atom(std::string name, int value) {
  for (auto& a : atoms) {
    if (a.name == name) {
      a.value = value;
      return;
    }
  }
  atoms.push_back({std::move(name), value});
}

bool FiniteInterpretation::in_bounds() const {
  if (size < 1 || size > kMaxUniverse) return false;
  for (const auto& r : relations) {
    if (r.arity != 1 && r.arity != 2) return false;
    for (const auto& t : r.tuples) {
      if (static_cast<int>(t.size()) != r.arity) return false;
      for (int x : t)
        if (x < 0 || x >= size) return false;
    }
  }
  for (const auto& a : atoms)
    if (a.value < 0 || a.value >= size) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Packing

FiniteInterpretation unpack(const Vocabulary& vocab, const PackedInterpretation& p) {
  FiniteInterpretation out;
  out.size = p.size;
  const int n = p.size;
  for (std::size_t r = 0; r < vocab.relations.size(); ++r) {
    TupleSet ts;
    const std::uint64_t m = p.masks[r];
    if (vocab.relations[r].arity == 1) {
      for (int i = 0; i < n; ++i)
        if (m >> i & 1) ts.insert({i});
    } else {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (m >> (i * n + j) & 1) ts.insert({i, j});
    }
    out.relations.push_back({vocab.relations[r].name, vocab.relations[r].arity, std::move(ts)});
  }
  for (std::size_t a = 0; a < vocab.atoms.size(); ++a) out.atoms.push_back({vocab.atoms[a], p.atoms[a]});
  return out;
}

PackedInterpretation pack(const Vocabulary& vocab, const FiniteInterpretation& interp) {
  if (!interp.in_bounds()) ill_formed("interpretation out of bounds");
  PackedInterpretation p;
  p.size = interp.size;
  const int n = interp.size;
  for (const auto& decl : vocab.relations) {
    const auto* r = interp.relation(decl.name);
    if (!r) ill_formed("relation `" + decl.name + "` is not interpreted");
    if (r->arity != decl.arity) ill_formed("relation `" + decl.name + "` interpreted with the wrong arity");
    std::uint64_t m = 0;
    for (const auto& t : r->tuples) m |= std::uint64_t{1} << (decl.arity == 1 ? t[0] : t[0] * n + t[1]);
    p.masks.push_back(m);
  }
  for (const auto& name : vocab.atoms) {
    auto v = interp.atom(name);
    if (!v) ill_formed("atom `" + name + "` is not interpreted");
    p.atoms.push_back(*v);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Compiled evaluation

struct CompiledFormula::Ctx {
  int n;
  std::uint64_t full1, full2, diag;
  const std::uint64_t* masks;
  const int* atoms;
  int vars[64];
};

CompiledFormula::CompiledFormula(const RelFormula& f, const Vocabulary& vocab)
    : relation_count_(static_cast<int>(vocab.relations.size())), atom_count_(static_cast<int>(vocab.atoms.size())) {
  std::vector<std::string> scope;
  root_ = compile_formula(f, vocab, scope);
}

int CompiledFormula::compile_expr(const RelExpr& e, const Vocabulary& vocab, std::vector<std::string>& scope,
                                  int& arity_out) {
  ExprNode node{e.op(), 0, -1, -1, -1};
  switch (e.op()) {
    case RelOp::Const: {
      node.slot = relation_index(vocab, e.name());
      if (node.slot < 0) ill_formed("relation `" + e.name() + "` is not interpreted");
      node.arity = vocab.relations[static_cast<std::size_t>(node.slot)].arity;
      break;
    }
    case RelOp::AtomConst:
      node.slot = atom_index(vocab, e.name());
      if (node.slot < 0) ill_formed("atom `" + e.name() + "` is not interpreted");
      node.arity = 1;
      break;
    case RelOp::Var: {
      auto it = std::find(scope.rbegin(), scope.rend(), e.name());
      if (it == scope.rend()) ill_formed("free variable `" + e.name() + "`");
      node.slot = static_cast<int>(scope.rend() - it) - 1;
      node.arity = 1;
      break;
    }
    case RelOp::Iden:
    case RelOp::Univ2:
    case RelOp::None2: node.arity = 2; break;
    case RelOp::Univ1:
    case RelOp::None1: node.arity = 1; break;
    case RelOp::Transpose:
    case RelOp::TClosure:
    case RelOp::RTClosure: {
      int a = 0;
      node.a = compile_expr(e.arg(0), vocab, scope, a);
      if (a != 2) ill_formed("unary relational operator applied to a set");
      node.arity = 2;
      break;
    }
    default: {
      int a = 0, b = 0;
      node.a = compile_expr(e.lhs(), vocab, scope, a);
      node.b = compile_expr(e.rhs(), vocab, scope, b);
      if (e.op() == RelOp::Join) {
        if (a == 1 && b == 1) ill_formed("join of two sets");
        node.arity = a + b - 2;
        // encode the operand arities in the slot: 0 (1,2), 1 (2,1), 2 (2,2)
        node.slot = a == 1 ? 0 : b == 1 ? 1 : 2;
      } else if (e.op() == RelOp::Product) {
        if (a != 1 || b != 1) ill_formed("product of non-sets");
        node.arity = 2;
      } else {
        if (a != b) ill_formed("operands of different arity");
        node.arity = a;
      }
    }
  }
  arity_out = node.arity;
  exprs_.push_back(node);
  return static_cast<int>(exprs_.size()) - 1;
}

int CompiledFormula::compile_formula(const RelFormula& f, const Vocabulary& vocab, std::vector<std::string>& scope) {
  FormulaNode node{f.op(), -1, -1, 0, 0, -1, -1, -1};
  auto term = [&](const AtomTerm& t) {
    if (t.kind == AtomTerm::Kind::Const) {
      const int slot = atom_index(vocab, t.name);
      if (slot < 0) ill_formed("atom `" + t.name + "` is not interpreted");
      return slot;
    }
    auto it = std::find(scope.rbegin(), scope.rend(), t.name);
    if (it == scope.rend()) ill_formed("free variable `" + t.name + "`");
    return -1 - (static_cast<int>(scope.rend() - it) - 1);
  };
  switch (f.op()) {
    case RelFormulaOp::Subset:
    case RelFormulaOp::Eq: {
      int a = 0, b = 0;
      node.e0 = compile_expr(f.expr(0), vocab, scope, a);
      node.e1 = compile_expr(f.expr(1), vocab, scope, b);
      if (a != b) ill_formed("comparison of different arities");
      break;
    }
    case RelFormulaOp::Member: {
      int a = 0;
      node.e0 = compile_expr(f.expr(0), vocab, scope, a);
      if (a != static_cast<int>(f.tuple().size())) ill_formed("tuple size does not match arity");
      node.t0 = term(f.tuple()[0]);
      if (a == 2) node.t1 = term(f.tuple()[1]);
      node.e1 = a;
      break;
    }
    case RelFormulaOp::Some:
    case RelFormulaOp::No:
    case RelFormulaOp::Lone:
    case RelFormulaOp::One: {
      int a = 0;
      node.e0 = compile_expr(f.expr(0), vocab, scope, a);
      break;
    }
    case RelFormulaOp::Not: node.a = compile_formula(f.arg(0), vocab, scope); break;
    case RelFormulaOp::Forall:
    case RelFormulaOp::Exists:
      scope.push_back(f.bound_var());
      if (static_cast<int>(scope.size()) > 64) ill_formed("quantifier nesting too deep");
      node.var = static_cast<int>(scope.size()) - 1;
      max_vars_ = std::max(max_vars_, static_cast<int>(scope.size()));
      node.a = compile_formula(f.body(), vocab, scope);
      scope.pop_back();
      break;
    default:
      node.a = compile_formula(f.arg(0), vocab, scope);
      node.b = compile_formula(f.arg(1), vocab, scope);
  }
  formulas_.push_back(node);
  return static_cast<int>(formulas_.size()) - 1;
}

std::uint64_t CompiledFormula::eval_expr(int idx, Ctx& ctx) const {
  const ExprNode& node = exprs_[static_cast<std::size_t>(idx)];
  const int n = ctx.n;
  switch (node.op) {
    case RelOp::Const: return ctx.masks[node.slot];
    case RelOp::AtomConst: return std::uint64_t{1} << ctx.atoms[node.slot];
    case RelOp::Var: return std::uint64_t{1} << ctx.vars[node.slot];
    case RelOp::Iden: return ctx.diag;
    case RelOp::Univ1: return ctx.full1;
    case RelOp::Univ2: return ctx.full2;
    case RelOp::None1:
    case RelOp::None2: return 0;
    case RelOp::Union: return eval_expr(node.a, ctx) | eval_expr(node.b, ctx);
    case RelOp::Inter: return eval_expr(node.a, ctx) & eval_expr(node.b, ctx);
    case RelOp::Diff: return eval_expr(node.a, ctx) & ~eval_expr(node.b, ctx);
    case RelOp::Transpose: return transpose_mask(eval_expr(node.a, ctx), n);
    case RelOp::TClosure: return closure_mask(eval_expr(node.a, ctx), n);
    case RelOp::RTClosure: return closure_mask(eval_expr(node.a, ctx), n) | ctx.diag;
    case RelOp::Product: {
      std::uint64_t s = eval_expr(node.a, ctx);
      const std::uint64_t t = eval_expr(node.b, ctx);
      std::uint64_t out = 0;
      while (s) {
        out |= t << (std::countr_zero(s) * n);
        s &= s - 1;
      }
      return out;
    }
    case RelOp::Join: {
      const std::uint64_t a = eval_expr(node.a, ctx);
      const std::uint64_t b = eval_expr(node.b, ctx);
      if (node.slot == 2) return compose(a, b, n);
      if (node.slot == 0) {
        std::uint64_t s = a, out = 0;
        while (s) {
          out |= row(b, std::countr_zero(s), n);
          s &= s - 1;
        }
        return out;
      }
      std::uint64_t out = 0;
      for (int i = 0; i < n; ++i)
        if (row(a, i, n) & b) out |= std::uint64_t{1} << i;
      return out;
    }
  }
  return 0;
}

bool CompiledFormula::eval_formula(int idx, Ctx& ctx) const {
  const FormulaNode& node = formulas_[static_cast<std::size_t>(idx)];
  auto term = [&](int t) { return t >= 0 ? ctx.atoms[t] : ctx.vars[-1 - t]; };
  switch (node.op) {
    case RelFormulaOp::Subset: return (eval_expr(node.e0, ctx) & ~eval_expr(node.e1, ctx)) == 0;
    case RelFormulaOp::Eq: return eval_expr(node.e0, ctx) == eval_expr(node.e1, ctx);
    case RelFormulaOp::Member: {
      const std::uint64_t m = eval_expr(node.e0, ctx);
      const int bit = node.e1 == 1 ? term(node.t0) : term(node.t0) * ctx.n + term(node.t1);
      return m >> bit & 1;
    }
    case RelFormulaOp::Some: return eval_expr(node.e0, ctx) != 0;
    case RelFormulaOp::No: return eval_expr(node.e0, ctx) == 0;
    case RelFormulaOp::Lone: return std::popcount(eval_expr(node.e0, ctx)) <= 1;
    case RelFormulaOp::One: return std::popcount(eval_expr(node.e0, ctx)) == 1;
    case RelFormulaOp::Not: return !eval_formula(node.a, ctx);
    case RelFormulaOp::And: return eval_formula(node.a, ctx) && eval_formula(node.b, ctx);
    case RelFormulaOp::Or: return eval_formula(node.a, ctx) || eval_formula(node.b, ctx);
    case RelFormulaOp::Implies: return !eval_formula(node.a, ctx) || eval_formula(node.b, ctx);
    case RelFormulaOp::Iff: return eval_formula(node.a, ctx) == eval_formula(node.b, ctx);
    case RelFormulaOp::Forall:
      for (int v = 0; v < ctx.n; ++v) {
        ctx.vars[node.var] = v;
        if (!eval_formula(node.a, ctx)) return false;
      }
      return true;
    case RelFormulaOp::Exists:
      for (int v = 0; v < ctx.n; ++v) {
        ctx.vars[node.var] = v;
        if (eval_formula(node.a, ctx)) return true;
      }
      return false;
  }
  return false;
}

bool CompiledFormula::holds(const PackedInterpretation& p) const {
  if (static_cast<int>(p.masks.size()) != relation_count_ || static_cast<int>(p.atoms.size()) != atom_count_)
    ill_formed("packed interpretation does not match the vocabulary");
  Ctx ctx{};
  ctx.n = p.size;
  ctx.full1 = full_mask(p.size);
  ctx.full2 = full_mask(p.size * p.size);
  ctx.diag = diag_mask(p.size);
  ctx.masks = p.masks.data();
  ctx.atoms = p.atoms.data();
  return eval_formula(root_, ctx);
}

// ---------------------------------------------------------------------------
// Evaluation on explicit interpretations

TupleSet evaluate(const RelExpr& e, const FiniteInterpretation& interp) {
  // Tuple membership is tested through fresh atom constants bound to each
  // candidate tuple in turn.
  const Vocabulary vocab = vocabulary_of(interp);
  const PackedInterpretation p = pack(vocab, interp);
  Signature sig;
  for (const auto& r : vocab.relations) sig.add_relation(r.name, r.arity);
  for (const auto& a : vocab.atoms) sig.add_atom(a);
  const int ar = arity(e, sig);

  std::set<std::string> avoid;
  for (const auto& r : vocab.relations) avoid.insert(r.name);
  avoid.insert(vocab.atoms.begin(), vocab.atoms.end());
  std::vector<std::string> probes;
  for (int i = 0; i < ar; ++i) {
    probes.push_back(fresh_name("e", avoid));
    avoid.insert(probes.back());
  }
  Vocabulary v2 = vocab;
  std::vector<AtomTerm> tuple;
  for (const auto& nm : probes) {
    v2.atoms.insert(std::lower_bound(v2.atoms.begin(), v2.atoms.end(), nm), nm);
    tuple.push_back(AtomTerm::constant(nm));
  }
  const CompiledFormula member(RelFormula::member(tuple, e), v2);

  TupleSet out;
  PackedInterpretation p2;
  p2.size = p.size;
  p2.masks = p.masks;
  const int n = interp.size;
  for (int k = 0; k < (ar == 1 ? n : n * n); ++k) {
    const Tuple t = ar == 1 ? Tuple{k} : Tuple{k / n, k % n};
    p2.atoms.clear();
    for (const auto& nm : v2.atoms) {
      auto it = std::find(probes.begin(), probes.end(), nm);
      p2.atoms.push_back(it != probes.end() ? t[static_cast<std::size_t>(it - probes.begin())] : *interp.atom(nm));
    }
    if (member.holds(p2)) out.insert(t);
  }
  return out;
}

bool holds(const RelFormula& f, const FiniteInterpretation& interp) {
  const Vocabulary vocab = vocabulary_of(interp);
  const PackedInterpretation p = pack(vocab, interp);
  return CompiledFormula(f, vocab).holds(p);
}

bool holds(const Sequent& s, const FiniteInterpretation& interp) {
  if (s.language() != Language::Rel) ill_formed("finite semantics is defined for REL sequents only");
  return holds(fold_sequent(s).rel(), interp);
}

// ---------------------------------------------------------------------------
// Enumeration

Vocabulary vocabulary_of(const RelFormula& f, const Signature& sig, VocabularyMode mode) {
  if (sig.language() != Language::Rel) ill_formed("the finder needs a REL signature");
  std::set<std::string> rels, atoms;
  collect_constants(f, rels, atoms);
  Vocabulary v;
  for (const auto& r : rels)
    if (!sig.relation_arity(r)) ill_formed("undeclared relation `" + r + "`");
  for (const auto& r : sig.relations())
    if (mode == VocabularyMode::Declared || rels.contains(r.name)) v.relations.push_back(r);
  if (mode == VocabularyMode::Declared) atoms.insert(sig.atoms().begin(), sig.atoms().end());
  v.atoms.assign(atoms.begin(), atoms.end());
  return v;
}

void enumerate(const Vocabulary& vocab, int n, const std::function<bool(const PackedInterpretation&)>& visit) {
  if (n < 1 || n > kMaxUniverse) throw Error(ErrorCode::BadParameter, "universe size out of range");
  PackedInterpretation p;
  p.size = n;
  p.masks.assign(vocab.relations.size(), 0);
  p.atoms.assign(vocab.atoms.size(), 0);
  std::vector<std::uint64_t> limit;
  for (const auto& r : vocab.relations) limit.push_back(full_mask(r.arity == 1 ? n : n * n));

  // odometer: the last position varies fastest
  const std::size_t R = p.masks.size(), A = p.atoms.size();
  while (true) {
    if (!visit(p)) return;
    std::size_t pos = R + A;
    while (pos > 0) {
      --pos;
      if (pos >= R) {
        int& v = p.atoms[pos - R];
        if (v + 1 < n) {
          ++v;
          break;
        }
        v = 0;
      } else {
        std::uint64_t& m = p.masks[pos];
        if (m != limit[pos]) {
          ++m;
          break;
        }
        m = 0;
      }
      if (pos == 0) return;
    }
    if (R + A == 0) return;
  }
}

std::uint64_t interpretation_count(const Vocabulary& vocab, int n) {
  unsigned bits = 0;
  for (const auto& r : vocab.relations) bits += static_cast<unsigned>(r.arity == 1 ? n : n * n);
  if (bits >= 64) return ~std::uint64_t{0};
  std::uint64_t count = std::uint64_t{1} << bits;
  for (std::size_t i = 0; i < vocab.atoms.size(); ++i) {
    if (count > ~std::uint64_t{0} / static_cast<std::uint64_t>(n)) return ~std::uint64_t{0};
    count *= static_cast<std::uint64_t>(n);
  }
  return count;
}

int scope_ceiling_from_env() {
  if (const char* env = std::getenv("HG_SCOPE_CEILING")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= kMaxUniverse) return static_cast<int>(v);
  }
  return kDefaultScopeCeiling;
}

std::string_view to_string(CounterexampleReport::Outcome o) {
  switch (o) {
    case CounterexampleReport::Outcome::Refuted: return "refuted";
    case CounterexampleReport::Outcome::NoneWithinScope: return "none-within-scope";
    case CounterexampleReport::Outcome::Unsupported: return "unsupported";
  }
  return "?";
}

CounterexampleReport find_counterexample(const RelFormula& f, const Signature& sig, int scope,
                                         const FinderOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const int ceiling = opts.ceiling > 0 ? std::min(opts.ceiling, kMaxUniverse) : scope_ceiling_from_env();
  if (scope < 1) throw Error(ErrorCode::BadParameter, "scope must be at least 1");
  if (scope > ceiling)
    throw Error(ErrorCode::ScopeExceedsCeiling,
                "scope " + std::to_string(scope) + " exceeds the ceiling " + std::to_string(ceiling));
  if (!free_variables(f).empty()) ill_formed("formula has free variables");

  const Vocabulary vocab = vocabulary_of(f, sig, opts.vocabulary);
  const CompiledFormula compiled(f, vocab);

  CounterexampleReport report;
  report.scope = scope;
  std::vector<int> perm;
  for (int n = 1; n <= scope && !report.interpretation; ++n) {
    perm.assign(static_cast<std::size_t>(n), 0);
    enumerate(vocab, n, [&](const PackedInterpretation& p) {
      if (opts.symmetry == Symmetry::Canonical && next_permutation_is_smaller(p, vocab, perm)) return true;
      ++report.examined;
      if (compiled.holds(p)) return true;
      report.interpretation = unpack(vocab, p);
      return false;
    });
  }
  report.outcome = report.interpretation ? CounterexampleReport::Outcome::Refuted
                                         : CounterexampleReport::Outcome::NoneWithinScope;
  report.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start);
  return report;
}

CounterexampleReport find_counterexample(const Sequent& s, const Signature& sig, int scope,
                                         const FinderOptions& opts) {
  if (s.language() != Language::Rel) {
    CounterexampleReport r;
    r.outcome = CounterexampleReport::Outcome::Unsupported;
    r.scope = scope;
    r.reason = "no counterexample finder for FORK";
    return r;
  }
  return find_counterexample(fold_sequent(s).rel(), sig, scope, opts);
}

bool check_report(const Sequent& s, const CounterexampleReport& report) {
  if (report.outcome != CounterexampleReport::Outcome::Refuted || !report.interpretation) return false;
  const auto& interp = *report.interpretation;
  if (!interp.in_bounds() || s.language() != Language::Rel) return false;
  try {
    return !holds(s, interp);
  } catch (const Error&) {
    return false;
  }
}

std::string render(const FiniteInterpretation& interp) {
  std::ostringstream os;
  os << "|U| = " << interp.size << '\n';
  for (const auto& r : interp.relations) {
    os << r.name << " = {";
    bool first = true;
    for (const auto& t : r.tuples) {
      os << (first ? "" : ",") << '(';
      for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
      os << ')';
      first = false;
    }
    os << "}\n";
  }
  for (const auto& a : interp.atoms) os << a.name << " = " << a.value << '\n';
  return os.str();
}

std::string render(const CounterexampleReport& report) {
  std::ostringstream os;
  switch (report.outcome) {
    case CounterexampleReport::Outcome::NoneWithinScope:
      os << "no counterexample within scope " << report.scope << " (" << report.examined << " interpretations)\n";
      break;
    case CounterexampleReport::Outcome::Refuted:
      os << "counterexample within scope " << report.scope << " (" << report.examined << " interpretations)\n"
         << render(*report.interpretation);
      break;
    case CounterexampleReport::Outcome::Unsupported: os << "unsupported: " << report.reason << '\n'; break;
  }
  return os.str();
}

}  // namespace hg
