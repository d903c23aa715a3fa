#pragma once

// Signatures, the REL and FORK abstract syntax, sequents and specs.
//
// REL is the relational (Alloy-kernel) language with relations of arity 1
// and 2, atom constants and first-order quantification over atoms. FORK is
// the quantifier-free equational language of fork algebras. Every AST value
// is an immutable handle onto a shared node, so copies are cheap and values
// may be shared freely between threads.

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hg/error.hpp"

namespace hg {

enum class Language { Rel, Fork };

std::string_view to_string(Language lang);
std::optional<Language> parse_language(std::string_view text);

// ---------------------------------------------------------------------------
// Signatures

struct RelationDecl {
  std::string name;
  int arity = 2;  // 1 or 2
  bool operator==(const RelationDecl&) const = default;
};

enum class ForkConstKind { Relation, Point };

struct ForkConstDecl {
  std::string name;
  ForkConstKind kind = ForkConstKind::Relation;
  bool operator==(const ForkConstDecl&) const = default;
};

class Signature {
 public:
  Signature() = default;
  explicit Signature(Language lang) : lang_(lang) {}

  Language language() const { return lang_; }

  // Throws DuplicateName on a clash with any declared name, IllFormed on a
  // declaration that does not belong to this signature's language.
  void add_relation(std::string name, int arity);
  void add_atom(std::string name);
  void add_fork_constant(std::string name, ForkConstKind kind);

  const std::vector<RelationDecl>& relations() const { return relations_; }
  const std::vector<std::string>& atoms() const { return atoms_; }
  const std::vector<ForkConstDecl>& fork_constants() const { return fork_constants_; }

  bool declares(std::string_view name) const;
  std::optional<int> relation_arity(std::string_view name) const;
  bool is_atom(std::string_view name) const;
  std::optional<ForkConstKind> fork_kind(std::string_view name) const;

  bool operator==(const Signature&) const = default;

 private:
  Language lang_ = Language::Rel;
  std::vector<RelationDecl> relations_;
  std::vector<std::string> atoms_;
  std::vector<ForkConstDecl> fork_constants_;
};

// ---------------------------------------------------------------------------
// REL

enum class RelOp {
  Const,
  AtomConst,
  Var,
  Iden,
  Univ1,
  Univ2,
  None1,
  None2,
  Union,
  Inter,
  Diff,
  Join,
  Product,
  Transpose,
  TClosure,
  RTClosure,
};

class RelExpr {
 public:
  static RelExpr constant(std::string name);
  static RelExpr atom(std::string name);
  static RelExpr var(std::string name);
  static RelExpr iden();
  static RelExpr univ(int arity);
  static RelExpr none(int arity);
  static RelExpr union_of(RelExpr a, RelExpr b);
  static RelExpr inter(RelExpr a, RelExpr b);
  static RelExpr diff(RelExpr a, RelExpr b);
  static RelExpr join(RelExpr a, RelExpr b);
  static RelExpr product(RelExpr a, RelExpr b);
  static RelExpr transpose(RelExpr a);
  static RelExpr tclosure(RelExpr a);
  static RelExpr rtclosure(RelExpr a);
  static RelExpr binary(RelOp op, RelExpr a, RelExpr b);
  static RelExpr unary(RelOp op, RelExpr a);

  RelOp op() const { return node_->op; }
  const std::string& name() const { return node_->name; }
  std::size_t arg_count() const { return node_->args.size(); }
  const RelExpr& arg(std::size_t i) const { return node_->args[i]; }
  const RelExpr& lhs() const { return node_->args[0]; }
  const RelExpr& rhs() const { return node_->args[1]; }
  std::size_t size() const { return node_->size; }
  std::uint64_t hash() const { return node_->hash; }

  bool is_leaf() const { return node_->args.empty(); }

  friend bool operator==(const RelExpr& a, const RelExpr& b);

 private:
  struct Node {
    RelOp op;
    std::string name;
    std::vector<RelExpr> args;
    std::size_t size;
    std::uint64_t hash;
  };
  explicit RelExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static RelExpr make(RelOp op, std::string name, std::vector<RelExpr> args);

  std::shared_ptr<const Node> node_;
};

bool is_binary_op(RelOp op);
bool is_unary_op(RelOp op);

// An atom-valued term: an atom constant or a bound variable.
struct AtomTerm {
  enum class Kind { Const, Var };
  Kind kind = Kind::Const;
  std::string name;

  static AtomTerm constant(std::string n) { return {Kind::Const, std::move(n)}; }
  static AtomTerm var(std::string n) { return {Kind::Var, std::move(n)}; }
  RelExpr as_expr() const;
  bool operator==(const AtomTerm&) const = default;
};

enum class RelFormulaOp {
  Subset,
  Eq,
  Member,
  Some,
  No,
  Lone,
  One,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Forall,
  Exists,
};

class RelFormula {
 public:
  static RelFormula subset(RelExpr a, RelExpr b);
  static RelFormula eq(RelExpr a, RelExpr b);
  static RelFormula member(std::vector<AtomTerm> tuple, RelExpr e);
  static RelFormula some(RelExpr e);
  static RelFormula no(RelExpr e);
  static RelFormula lone(RelExpr e);
  static RelFormula one(RelExpr e);
  static RelFormula cardinality(RelFormulaOp op, RelExpr e);
  static RelFormula negation(RelFormula f);
  static RelFormula conj(RelFormula a, RelFormula b);
  static RelFormula disj(RelFormula a, RelFormula b);
  static RelFormula implies(RelFormula a, RelFormula b);
  static RelFormula iff(RelFormula a, RelFormula b);
  static RelFormula connective(RelFormulaOp op, RelFormula a, RelFormula b);
  static RelFormula forall(std::string var, RelFormula body);
  static RelFormula exists(std::string var, RelFormula body);
  static RelFormula quantifier(RelFormulaOp op, std::string var, RelFormula body);

  // subset(none2, none2) and its negation.
  static RelFormula truth();
  static RelFormula falsity();

  RelFormulaOp op() const { return node_->op; }
  const std::vector<RelExpr>& exprs() const { return node_->exprs; }
  const RelExpr& expr(std::size_t i = 0) const { return node_->exprs[i]; }
  const std::vector<AtomTerm>& tuple() const { return node_->tuple; }
  std::size_t arg_count() const { return node_->args.size(); }
  const RelFormula& arg(std::size_t i) const { return node_->args[i]; }
  const RelFormula& body() const { return node_->args[0]; }
  const std::string& bound_var() const { return node_->var; }
  std::size_t size() const { return node_->size; }
  std::uint64_t hash() const { return node_->hash; }

  bool is_atomic() const;
  bool is_quantifier() const { return op() == RelFormulaOp::Forall || op() == RelFormulaOp::Exists; }

  friend bool operator==(const RelFormula& a, const RelFormula& b);

 private:
  struct Node {
    RelFormulaOp op;
    std::vector<RelExpr> exprs;
    std::vector<AtomTerm> tuple;
    std::vector<RelFormula> args;
    std::string var;
    std::size_t size;
    std::uint64_t hash;
  };
  explicit RelFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static RelFormula make(RelFormulaOp op, std::vector<RelExpr> exprs, std::vector<AtomTerm> tuple,
                         std::vector<RelFormula> args, std::string var);

  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// FORK

enum class ForkOp { Const, Point, Zero, One, Ident, Plus, Dot, Compl, Comp, Conv, Fork, Star };

class ForkTerm {
 public:
  static ForkTerm constant(std::string name);
  static ForkTerm point(std::string name);
  static ForkTerm zero();
  static ForkTerm one();
  static ForkTerm ident();
  static ForkTerm plus(ForkTerm a, ForkTerm b);
  static ForkTerm dot(ForkTerm a, ForkTerm b);
  static ForkTerm compl_of(ForkTerm a);
  static ForkTerm comp(ForkTerm a, ForkTerm b);
  static ForkTerm conv(ForkTerm a);
  static ForkTerm fork(ForkTerm a, ForkTerm b);
  static ForkTerm star(ForkTerm a);
  static ForkTerm binary(ForkOp op, ForkTerm a, ForkTerm b);
  static ForkTerm unary(ForkOp op, ForkTerm a);
  // Projections, stored expanded: pi = conv(fork(ident, one)), rho = conv(fork(one, ident)).
  static ForkTerm pi();
  static ForkTerm rho();

  ForkOp op() const { return node_->op; }
  const std::string& name() const { return node_->name; }
  std::size_t arg_count() const { return node_->args.size(); }
  const ForkTerm& arg(std::size_t i) const { return node_->args[i]; }
  const ForkTerm& lhs() const { return node_->args[0]; }
  const ForkTerm& rhs() const { return node_->args[1]; }
  std::size_t size() const { return node_->size; }
  std::uint64_t hash() const { return node_->hash; }
  bool contains_fork() const { return node_->has_fork; }

  friend bool operator==(const ForkTerm& a, const ForkTerm& b);

 private:
  struct Node {
    ForkOp op;
    std::string name;
    std::vector<ForkTerm> args;
    std::size_t size;
    std::uint64_t hash;
    bool has_fork;
  };
  explicit ForkTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static ForkTerm make(ForkOp op, std::string name, std::vector<ForkTerm> args);

  std::shared_ptr<const Node> node_;
};

enum class ForkFormulaOp { Eq, Leq, Not, And, Or, Implies, Iff };

class ForkFormula {
 public:
  static ForkFormula eq(ForkTerm a, ForkTerm b);
  static ForkFormula leq(ForkTerm a, ForkTerm b);
  static ForkFormula negation(ForkFormula f);
  static ForkFormula conj(ForkFormula a, ForkFormula b);
  static ForkFormula disj(ForkFormula a, ForkFormula b);
  static ForkFormula implies(ForkFormula a, ForkFormula b);
  static ForkFormula iff(ForkFormula a, ForkFormula b);
  static ForkFormula connective(ForkFormulaOp op, ForkFormula a, ForkFormula b);

  // eqf(zero, zero) and its negation.
  static ForkFormula truth();
  static ForkFormula falsity();

  ForkFormulaOp op() const { return node_->op; }
  const ForkTerm& term(std::size_t i) const { return node_->terms[i]; }
  const ForkTerm& lhs() const { return node_->terms[0]; }
  const ForkTerm& rhs() const { return node_->terms[1]; }
  std::size_t arg_count() const { return node_->args.size(); }
  const ForkFormula& arg(std::size_t i) const { return node_->args[i]; }
  std::size_t size() const { return node_->size; }
  std::uint64_t hash() const { return node_->hash; }
  bool contains_fork() const { return node_->has_fork; }

  bool is_atomic() const { return op() == ForkFormulaOp::Eq || op() == ForkFormulaOp::Leq; }

  friend bool operator==(const ForkFormula& a, const ForkFormula& b);

 private:
  struct Node {
    ForkFormulaOp op;
    std::vector<ForkTerm> terms;
    std::vector<ForkFormula> args;
    std::size_t size;
    std::uint64_t hash;
    bool has_fork;
  };
  explicit ForkFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static ForkFormula make(ForkFormulaOp op, std::vector<ForkTerm> terms, std::vector<ForkFormula> args);

  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Language-generic formulas and sequents

enum class Connective { Atomic, Not, And, Or, Implies, Iff, Forall, Exists };

class Formula {
 public:
  Formula(RelFormula f) : v_(std::move(f)) {}    // NOLINT(google-explicit-constructor)
  Formula(ForkFormula f) : v_(std::move(f)) {}   // NOLINT(google-explicit-constructor)

  Language language() const { return v_.index() == 0 ? Language::Rel : Language::Fork; }
  bool is_rel() const { return v_.index() == 0; }
  const RelFormula& rel() const;
  const ForkFormula& fork() const;

  Connective connective() const;
  // Immediate propositional sub-formulas (Not: 1, binary connectives: 2).
  // Quantifier bodies are not exposed here; use rel().body().
  Formula child(std::size_t i) const;

  static Formula negation(const Formula& f);
  static Formula binary(Connective c, const Formula& a, const Formula& b);
  static Formula truth(Language lang);
  static Formula falsity(Language lang);

  std::size_t size() const;
  std::uint64_t hash() const;

  friend bool operator==(const Formula& a, const Formula& b) { return a.v_ == b.v_; }

 private:
  std::variant<RelFormula, ForkFormula> v_;
};

class Sequent {
 public:
  // Throws IllFormed when a formula is not in `lang`.
  Sequent(Language lang, std::vector<Formula> antecedents, std::vector<Formula> consequents);

  Language language() const { return lang_; }
  const std::vector<Formula>& antecedents() const { return ante_; }
  const std::vector<Formula>& consequents() const { return cons_; }

  bool operator==(const Sequent&) const = default;

 private:
  Language lang_;
  std::vector<Formula> ante_;
  std::vector<Formula> cons_;
};

struct NamedFormula {
  std::string name;
  Formula formula;
  bool operator==(const NamedFormula&) const = default;
};

struct Spec {
  Signature signature;
  std::vector<NamedFormula> axioms;
  std::vector<NamedFormula> goals;

  const NamedFormula* find_goal(std::string_view name) const;
  bool operator==(const Spec&) const = default;
};

// ---------------------------------------------------------------------------
// Structural operations

// Derived arity of a REL expression; bound variables have arity 1.
// Throws IllFormed for excluded operator/arity combinations and undeclared
// constants.
int arity(const RelExpr& e, const Signature& sig);

// Throws IllFormed unless the formula is closed and every expression in it is
// well-formed over `sig`. Atom constants that `sig` does not declare are
// accepted when `allow_undeclared_atoms` is set (eigenvariables).
void check_well_formed(const Formula& f, const Signature& sig, bool allow_undeclared_atoms = true);
void check_well_formed(const Sequent& s, const Signature& sig, bool allow_undeclared_atoms = true);
void check_well_formed(const Spec& spec);

// Capture-avoiding substitution of the free variable `x` by `t`.
RelFormula substitute(const RelFormula& f, const std::string& x, const AtomTerm& t);

std::set<std::string> free_variables(const RelFormula& f);

// Atom constants of a REL formula, or point constants of a FORK formula.
std::set<std::string> free_atom_constants(const Formula& f);
std::set<std::string> free_atom_constants(const Sequent& s);

// Every identifier occurring in the formula (constants, atoms, points,
// variables); used to pick names that cannot clash.
std::set<std::string> all_names(const Formula& f);
std::set<std::string> all_names(const Sequent& s);

// (/\ antecedents) -> (\/ consequents) with the fixed empty-side encodings.
Formula fold_sequent(const Sequent& s);

// `sig` extended with the atom (REL) or point (FORK) constants of `s` that it
// does not declare, in lexicographic order.
Signature extend_with_free_constants(const Signature& sig, const Sequent& s);

// First name in base, base1, base2, ... not contained in `avoid`.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

}  // namespace hg
