#include <utility>

#include "hg/logic.hpp"

namespace hg {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  // splitmix-style combine; only used for in-memory fast inequality checks
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::uint64_t hash_string(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

std::string_view to_string(Language lang) {
  return lang == Language::Rel ? "REL" : "FORK";
}

std::optional<Language> parse_language(std::string_view text) {
  if (text == "REL") return Language::Rel;
  if (text == "FORK") return Language::Fork;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Signature

void Signature::add_relation(std::string name, int arity) {
  if (lang_ != Language::Rel) throw Error(ErrorCode::IllFormed, "relation arities are REL-only: " + name);
  if (arity != 1 && arity != 2)
    throw Error(ErrorCode::IllFormed, "arity of " + name + " must be 1 or 2");
  if (declares(name)) throw Error(ErrorCode::DuplicateName, "duplicate name " + name);
  relations_.push_back({std::move(name), arity});
}

void Signature::add_atom(std::string name) {
  if (lang_ != Language::Rel) throw Error(ErrorCode::IllFormed, "atom constants are REL-only: " + name);
  if (declares(name)) throw Error(ErrorCode::DuplicateName, "duplicate name " + name);
  atoms_.push_back(std::move(name));
}

void Signature::add_fork_constant(std::string name, ForkConstKind kind) {
  if (lang_ != Language::Fork) throw Error(ErrorCode::IllFormed, "FORK constant in REL signature: " + name);
  if (declares(name)) throw Error(ErrorCode::DuplicateName, "duplicate name " + name);
  fork_constants_.push_back({std::move(name), kind});
}

bool Signature::declares(std::string_view name) const {
  for (const auto& r : relations_)
    if (r.name == name) return true;
  for (const auto& a : atoms_)
    if (a == name) return true;
  for (const auto& c : fork_constants_)
    if (c.name == name) return true;
  return false;
}

std::optional<int> Signature::relation_arity(std::string_view name) const {
  for (const auto& r : relations_)
    if (r.name == name) return r.arity;
  return std::nullopt;
}

bool Signature::is_atom(std::string_view name) const {
  for (const auto& a : atoms_)
    if (a == name) return true;
  return false;
}

std::optional<ForkConstKind> Signature::fork_kind(std::string_view name) const {
  for (const auto& c : fork_constants_)
    if (c.name == name) return c.kind;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// RelExpr

RelExpr RelExpr::make(RelOp op, std::string name, std::vector<RelExpr> args) {
  std::size_t size = 1;
  std::uint64_t h = mix(static_cast<std::uint64_t>(op) + 1, hash_string(name));
  for (const auto& a : args) {
    size += a.size();
    h = mix(h, a.hash());
  }
  return RelExpr(std::make_shared<const Node>(Node{op, std::move(name), std::move(args), size, h}));
}

RelExpr RelExpr::constant(std::string name) { return make(RelOp::Const, std::move(name), {}); }
RelExpr RelExpr::atom(std::string name) { return make(RelOp::AtomConst, std::move(name), {}); }
RelExpr RelExpr::var(std::string name) { return make(RelOp::Var, std::move(name), {}); }
RelExpr RelExpr::iden() { return make(RelOp::Iden, {}, {}); }
RelExpr RelExpr::univ(int arity) { return make(arity == 1 ? RelOp::Univ1 : RelOp::Univ2, {}, {}); }
RelExpr RelExpr::none(int arity) { return make(arity == 1 ? RelOp::None1 : RelOp::None2, {}, {}); }

RelExpr RelExpr::binary(RelOp op, RelExpr a, RelExpr b) {
  if (!is_binary_op(op)) throw Error(ErrorCode::IllFormed, "not a binary REL operator");
  return make(op, {}, {std::move(a), std::move(b)});
}

RelExpr RelExpr::unary(RelOp op, RelExpr a) {
  if (!is_unary_op(op)) throw Error(ErrorCode::IllFormed, "not a unary REL operator");
  return make(op, {}, {std::move(a)});
}

RelExpr RelExpr::union_of(RelExpr a, RelExpr b) { return binary(RelOp::Union, std::move(a), std::move(b)); }
RelExpr RelExpr::inter(RelExpr a, RelExpr b) { return binary(RelOp::Inter, std::move(a), std::move(b)); }
RelExpr RelExpr::diff(RelExpr a, RelExpr b) { return binary(RelOp::Diff, std::move(a), std::move(b)); }
RelExpr RelExpr::join(RelExpr a, RelExpr b) { return binary(RelOp::Join, std::move(a), std::move(b)); }
RelExpr RelExpr::product(RelExpr a, RelExpr b) { return binary(RelOp::Product, std::move(a), std::move(b)); }
RelExpr RelExpr::transpose(RelExpr a) { return unary(RelOp::Transpose, std::move(a)); }
RelExpr RelExpr::tclosure(RelExpr a) { return unary(RelOp::TClosure, std::move(a)); }
RelExpr RelExpr::rtclosure(RelExpr a) { return unary(RelOp::RTClosure, std::move(a)); }

bool operator==(const RelExpr& a, const RelExpr& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.op() != b.op() || a.name() != b.name() ||
      a.arg_count() != b.arg_count())
    return false;
  for (std::size_t i = 0; i < a.arg_count(); ++i)
    if (!(a.arg(i) == b.arg(i))) return false;
  return true;
}

bool is_binary_op(RelOp op) {
  switch (op) {
    case RelOp::Union:
    case RelOp::Inter:
    case RelOp::Diff:
    case RelOp::Join:
    case RelOp::Product:
      return true;
    default:
      return false;
  }
}

bool is_unary_op(RelOp op) {
  return op == RelOp::Transpose || op == RelOp::TClosure || op == RelOp::RTClosure;
}

RelExpr AtomTerm::as_expr() const {
  return kind == Kind::Const ? RelExpr::atom(name) : RelExpr::var(name);
}

// ---------------------------------------------------------------------------
// RelFormula

RelFormula RelFormula::make(RelFormulaOp op, std::vector<RelExpr> exprs, std::vector<AtomTerm> tuple,
                            std::vector<RelFormula> args, std::string var) {
  std::size_t size = 1;
  std::uint64_t h = mix(static_cast<std::uint64_t>(op) + 101, hash_string(var));
  for (const auto& e : exprs) {
    size += e.size();
    h = mix(h, e.hash());
  }
  for (const auto& t : tuple) h = mix(h, hash_string(t.name) + static_cast<std::uint64_t>(t.kind));
  for (const auto& a : args) {
    size += a.size();
    h = mix(h, a.hash());
  }
  return RelFormula(std::make_shared<const Node>(
      Node{op, std::move(exprs), std::move(tuple), std::move(args), std::move(var), size, h}));
}

RelFormula RelFormula::subset(RelExpr a, RelExpr b) {
  return make(RelFormulaOp::Subset, {std::move(a), std::move(b)}, {}, {}, {});
}
RelFormula RelFormula::eq(RelExpr a, RelExpr b) {
  return make(RelFormulaOp::Eq, {std::move(a), std::move(b)}, {}, {}, {});
}
RelFormula RelFormula::member(std::vector<AtomTerm> tuple, RelExpr e) {
  if (tuple.empty() || tuple.size() > 2)
    throw Error(ErrorCode::IllFormed, "member tuples have one or two components");
  return make(RelFormulaOp::Member, {std::move(e)}, std::move(tuple), {}, {});
}
RelFormula RelFormula::cardinality(RelFormulaOp op, RelExpr e) {
  if (op != RelFormulaOp::Some && op != RelFormulaOp::No && op != RelFormulaOp::Lone &&
      op != RelFormulaOp::One)
    throw Error(ErrorCode::IllFormed, "not a cardinality operator");
  return make(op, {std::move(e)}, {}, {}, {});
}
RelFormula RelFormula::some(RelExpr e) { return cardinality(RelFormulaOp::Some, std::move(e)); }
RelFormula RelFormula::no(RelExpr e) { return cardinality(RelFormulaOp::No, std::move(e)); }
RelFormula RelFormula::lone(RelExpr e) { return cardinality(RelFormulaOp::Lone, std::move(e)); }
RelFormula RelFormula::one(RelExpr e) { return cardinality(RelFormulaOp::One, std::move(e)); }

RelFormula RelFormula::negation(RelFormula f) {
  return make(RelFormulaOp::Not, {}, {}, {std::move(f)}, {});
}
RelFormula RelFormula::connective(RelFormulaOp op, RelFormula a, RelFormula b) {
  if (op != RelFormulaOp::And && op != RelFormulaOp::Or && op != RelFormulaOp::Implies &&
      op != RelFormulaOp::Iff)
    throw Error(ErrorCode::IllFormed, "not a binary connective");
  return make(op, {}, {}, {std::move(a), std::move(b)}, {});
}
RelFormula RelFormula::conj(RelFormula a, RelFormula b) {
  return connective(RelFormulaOp::And, std::move(a), std::move(b));
}
RelFormula RelFormula::disj(RelFormula a, RelFormula b) {
  return connective(RelFormulaOp::Or, std::move(a), std::move(b));
}
RelFormula RelFormula::implies(RelFormula a, RelFormula b) {
  return connective(RelFormulaOp::Implies, std::move(a), std::move(b));
}
RelFormula RelFormula::iff(RelFormula a, RelFormula b) {
  return connective(RelFormulaOp::Iff, std::move(a), std::move(b));
}
RelFormula RelFormula::quantifier(RelFormulaOp op, std::string var, RelFormula body) {
  if (op != RelFormulaOp::Forall && op != RelFormulaOp::Exists)
    throw Error(ErrorCode::IllFormed, "not a quantifier");
  return make(op, {}, {}, {std::move(body)}, std::move(var));
}
RelFormula RelFormula::forall(std::string var, RelFormula body) {
  return quantifier(RelFormulaOp::Forall, std::move(var), std::move(body));
}
RelFormula RelFormula::exists(std::string var, RelFormula body) {
  return quantifier(RelFormulaOp::Exists, std::move(var), std::move(body));
}

RelFormula RelFormula::truth() { return subset(RelExpr::none(2), RelExpr::none(2)); }
RelFormula RelFormula::falsity() { return negation(truth()); }

bool RelFormula::is_atomic() const {
  switch (op()) {
    case RelFormulaOp::Subset:
    case RelFormulaOp::Eq:
    case RelFormulaOp::Member:
    case RelFormulaOp::Some:
    case RelFormulaOp::No:
    case RelFormulaOp::Lone:
    case RelFormulaOp::One:
      return true;
    default:
      return false;
  }
}

bool operator==(const RelFormula& a, const RelFormula& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.op() != b.op() || a.node_->var != b.node_->var ||
      a.node_->tuple != b.node_->tuple || a.node_->exprs.size() != b.node_->exprs.size() ||
      a.node_->args.size() != b.node_->args.size())
    return false;
  for (std::size_t i = 0; i < a.node_->exprs.size(); ++i)
    if (!(a.node_->exprs[i] == b.node_->exprs[i])) return false;
  for (std::size_t i = 0; i < a.node_->args.size(); ++i)
    if (!(a.node_->args[i] == b.node_->args[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// ForkTerm

ForkTerm ForkTerm::make(ForkOp op, std::string name, std::vector<ForkTerm> args) {
  std::size_t size = 1;
  bool has_fork = op == ForkOp::Fork;
  std::uint64_t h = mix(static_cast<std::uint64_t>(op) + 211, hash_string(name));
  for (const auto& a : args) {
    size += a.size();
    has_fork = has_fork || a.contains_fork();
    h = mix(h, a.hash());
  }
  return ForkTerm(
      std::make_shared<const Node>(Node{op, std::move(name), std::move(args), size, h, has_fork}));
}

ForkTerm ForkTerm::constant(std::string name) { return make(ForkOp::Const, std::move(name), {}); }
ForkTerm ForkTerm::point(std::string name) { return make(ForkOp::Point, std::move(name), {}); }
ForkTerm ForkTerm::zero() { return make(ForkOp::Zero, {}, {}); }
ForkTerm ForkTerm::one() { return make(ForkOp::One, {}, {}); }
ForkTerm ForkTerm::ident() { return make(ForkOp::Ident, {}, {}); }

ForkTerm ForkTerm::binary(ForkOp op, ForkTerm a, ForkTerm b) {
  if (op != ForkOp::Plus && op != ForkOp::Dot && op != ForkOp::Comp && op != ForkOp::Fork)
    throw Error(ErrorCode::IllFormed, "not a binary FORK operator");
  return make(op, {}, {std::move(a), std::move(b)});
}

ForkTerm ForkTerm::unary(ForkOp op, ForkTerm a) {
  if (op != ForkOp::Compl && op != ForkOp::Conv && op != ForkOp::Star)
    throw Error(ErrorCode::IllFormed, "not a unary FORK operator");
  return make(op, {}, {std::move(a)});
}

ForkTerm ForkTerm::plus(ForkTerm a, ForkTerm b) { return binary(ForkOp::Plus, std::move(a), std::move(b)); }
ForkTerm ForkTerm::dot(ForkTerm a, ForkTerm b) { return binary(ForkOp::Dot, std::move(a), std::move(b)); }
ForkTerm ForkTerm::comp(ForkTerm a, ForkTerm b) { return binary(ForkOp::Comp, std::move(a), std::move(b)); }
ForkTerm ForkTerm::fork(ForkTerm a, ForkTerm b) { return binary(ForkOp::Fork, std::move(a), std::move(b)); }
ForkTerm ForkTerm::compl_of(ForkTerm a) { return unary(ForkOp::Compl, std::move(a)); }
ForkTerm ForkTerm::conv(ForkTerm a) { return unary(ForkOp::Conv, std::move(a)); }
ForkTerm ForkTerm::star(ForkTerm a) { return unary(ForkOp::Star, std::move(a)); }
ForkTerm ForkTerm::pi() { return conv(fork(ident(), one())); }
ForkTerm ForkTerm::rho() { return conv(fork(one(), ident())); }

bool operator==(const ForkTerm& a, const ForkTerm& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.op() != b.op() || a.name() != b.name() ||
      a.arg_count() != b.arg_count())
    return false;
  for (std::size_t i = 0; i < a.arg_count(); ++i)
    if (!(a.arg(i) == b.arg(i))) return false;
  return true;
}

// ---------------------------------------------------------------------------
// ForkFormula

ForkFormula ForkFormula::make(ForkFormulaOp op, std::vector<ForkTerm> terms,
                              std::vector<ForkFormula> args) {
  std::size_t size = 1;
  bool has_fork = false;
  std::uint64_t h = static_cast<std::uint64_t>(op) + 307;
  for (const auto& t : terms) {
    size += t.size();
    has_fork = has_fork || t.contains_fork();
    h = mix(h, t.hash());
  }
  for (const auto& a : args) {
    size += a.size();
    has_fork = has_fork || a.contains_fork();
    h = mix(h, a.hash());
  }
  return ForkFormula(
      std::make_shared<const Node>(Node{op, std::move(terms), std::move(args), size, h, has_fork}));
}

ForkFormula ForkFormula::eq(ForkTerm a, ForkTerm b) {
  return make(ForkFormulaOp::Eq, {std::move(a), std::move(b)}, {});
}
ForkFormula ForkFormula::leq(ForkTerm a, ForkTerm b) {
  return make(ForkFormulaOp::Leq, {std::move(a), std::move(b)}, {});
}
ForkFormula ForkFormula::negation(ForkFormula f) { return make(ForkFormulaOp::Not, {}, {std::move(f)}); }
ForkFormula ForkFormula::connective(ForkFormulaOp op, ForkFormula a, ForkFormula b) {
  if (op != ForkFormulaOp::And && op != ForkFormulaOp::Or && op != ForkFormulaOp::Implies &&
      op != ForkFormulaOp::Iff)
    throw Error(ErrorCode::IllFormed, "not a binary connective");
  return make(op, {}, {std::move(a), std::move(b)});
}
ForkFormula ForkFormula::conj(ForkFormula a, ForkFormula b) {
  return connective(ForkFormulaOp::And, std::move(a), std::move(b));
}
ForkFormula ForkFormula::disj(ForkFormula a, ForkFormula b) {
  return connective(ForkFormulaOp::Or, std::move(a), std::move(b));
}
ForkFormula ForkFormula::implies(ForkFormula a, ForkFormula b) {
  return connective(ForkFormulaOp::Implies, std::move(a), std::move(b));
}
ForkFormula ForkFormula::iff(ForkFormula a, ForkFormula b) {
  return connective(ForkFormulaOp::Iff, std::move(a), std::move(b));
}
ForkFormula ForkFormula::truth() { return eq(ForkTerm::zero(), ForkTerm::zero()); }
ForkFormula ForkFormula::falsity() { return negation(truth()); }

bool operator==(const ForkFormula& a, const ForkFormula& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.op() != b.op() || a.node_->terms.size() != b.node_->terms.size() ||
      a.node_->args.size() != b.node_->args.size())
    return false;
  for (std::size_t i = 0; i < a.node_->terms.size(); ++i)
    if (!(a.node_->terms[i] == b.node_->terms[i])) return false;
  for (std::size_t i = 0; i < a.node_->args.size(); ++i)
    if (!(a.node_->args[i] == b.node_->args[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Formula / Sequent / Spec

const RelFormula& Formula::rel() const {
  if (!is_rel()) throw Error(ErrorCode::IllFormed, "expected a REL formula");
  return std::get<RelFormula>(v_);
}

const ForkFormula& Formula::fork() const {
  if (is_rel()) throw Error(ErrorCode::IllFormed, "expected a FORK formula");
  return std::get<ForkFormula>(v_);
}

Connective Formula::connective() const {
  if (is_rel()) {
    switch (rel().op()) {
      case RelFormulaOp::Not: return Connective::Not;
      case RelFormulaOp::And: return Connective::And;
      case RelFormulaOp::Or: return Connective::Or;
      case RelFormulaOp::Implies: return Connective::Implies;
      case RelFormulaOp::Iff: return Connective::Iff;
      case RelFormulaOp::Forall: return Connective::Forall;
      case RelFormulaOp::Exists: return Connective::Exists;
      default: return Connective::Atomic;
    }
  }
  switch (fork().op()) {
    case ForkFormulaOp::Not: return Connective::Not;
    case ForkFormulaOp::And: return Connective::And;
    case ForkFormulaOp::Or: return Connective::Or;
    case ForkFormulaOp::Implies: return Connective::Implies;
    case ForkFormulaOp::Iff: return Connective::Iff;
    default: return Connective::Atomic;
  }
}

Formula Formula::child(std::size_t i) const {
  const Connective c = connective();
  if (c == Connective::Atomic || c == Connective::Forall || c == Connective::Exists)
    throw Error(ErrorCode::IllFormed, "formula has no propositional children");
  if (is_rel()) return rel().arg(i);
  return fork().arg(i);
}

Formula Formula::negation(const Formula& f) {
  if (f.is_rel()) return RelFormula::negation(f.rel());
  return ForkFormula::negation(f.fork());
}

Formula Formula::binary(Connective c, const Formula& a, const Formula& b) {
  if (a.language() != b.language()) throw Error(ErrorCode::IllFormed, "mixed-language connective");
  if (a.is_rel()) {
    RelFormulaOp op;
    switch (c) {
      case Connective::And: op = RelFormulaOp::And; break;
      case Connective::Or: op = RelFormulaOp::Or; break;
      case Connective::Implies: op = RelFormulaOp::Implies; break;
      case Connective::Iff: op = RelFormulaOp::Iff; break;
      default: throw Error(ErrorCode::IllFormed, "not a binary connective");
    }
    return RelFormula::connective(op, a.rel(), b.rel());
  }
  ForkFormulaOp op;
  switch (c) {
    case Connective::And: op = ForkFormulaOp::And; break;
    case Connective::Or: op = ForkFormulaOp::Or; break;
    case Connective::Implies: op = ForkFormulaOp::Implies; break;
    case Connective::Iff: op = ForkFormulaOp::Iff; break;
    default: throw Error(ErrorCode::IllFormed, "not a binary connective");
  }
  return ForkFormula::connective(op, a.fork(), b.fork());
}

Formula Formula::truth(Language lang) {
  if (lang == Language::Rel) return RelFormula::truth();
  return ForkFormula::truth();
}

Formula Formula::falsity(Language lang) {
  if (lang == Language::Rel) return RelFormula::falsity();
  return ForkFormula::falsity();
}

std::size_t Formula::size() const { return is_rel() ? rel().size() : fork().size(); }
std::uint64_t Formula::hash() const { return is_rel() ? rel().hash() : fork().hash(); }

Sequent::Sequent(Language lang, std::vector<Formula> antecedents, std::vector<Formula> consequents)
    : lang_(lang), ante_(std::move(antecedents)), cons_(std::move(consequents)) {
  for (const auto* side : {&ante_, &cons_})
    for (const auto& f : *side)
      if (f.language() != lang_)
        throw Error(ErrorCode::IllFormed, "mixed-language sequent");
}

const NamedFormula* Spec::find_goal(std::string_view name) const {
  for (const auto& g : goals)
    if (g.name == name) return &g;
  return nullptr;
}

}  // namespace hg
