#pragma once

// Bounded counterexample search for REL.
//
// Interpretations are enumerated exhaustively for universe sizes 1..k. For a
// fixed size the order is: relations in declaration order (the first one is
// the outermost loop), each ranging over its tuple bitmask in ascending order,
// then atom constants sorted by name, each ranging over 0..n-1 (again the
// first is outermost). Tuple (i, j) of a binary relation is bit i*n + j,
// element i of a set is bit i. The first falsifying interpretation in this
// order is the reported witness.

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hg/logic.hpp"

namespace hg {

using Tuple = std::vector<int>;
using TupleSet = std::set<Tuple>;

struct FiniteInterpretation {
  struct Relation {
    std::string name;
    int arity = 2;
    TupleSet tuples;
    bool operator==(const Relation&) const = default;
  };
  struct Atom {
    std::string name;
    int value = 0;
    bool operator==(const Atom&) const = default;
  };

  int size = 1;
  std::vector<Relation> relations;
  std::vector<Atom> atoms;

  const Relation* relation(std::string_view name) const;
  std::optional<int> atom(std::string_view name) const;
  void set_relation(std::string name, int arity, TupleSet tuples);
  void set_atom(std::string name, int value);

  // Every tuple has the declared arity and lies in 0..size-1, atoms likewise.
  bool in_bounds() const;

  bool operator==(const FiniteInterpretation&) const = default;
};

// Throws IllFormed on unassigned constants, free variables or bad arities.
TupleSet evaluate(const RelExpr& e, const FiniteInterpretation& interp);
bool holds(const RelFormula& f, const FiniteInterpretation& interp);
bool holds(const Sequent& s, const FiniteInterpretation& interp);

// Constants a search ranges over. Atoms are kept sorted by name.
struct Vocabulary {
  std::vector<RelationDecl> relations;
  std::vector<std::string> atoms;
  bool operator==(const Vocabulary&) const = default;
};

enum class VocabularyMode {
  Occurring,  // only the constants occurring in the formula
  Declared,   // every declared constant, plus undeclared atoms occurring
};

// Relations keep the signature's declaration order; atoms not declared in
// `sig` are accepted (eigenvariables). Throws IllFormed on undeclared relations.
Vocabulary vocabulary_of(const RelFormula& f, const Signature& sig, VocabularyMode mode);

// An interpretation in packed form: masks[i] interprets vocab.relations[i],
// atoms[i] interprets vocab.atoms[i].
struct PackedInterpretation {
  int size = 1;
  std::vector<std::uint64_t> masks;
  std::vector<int> atoms;
};

FiniteInterpretation unpack(const Vocabulary& vocab, const PackedInterpretation& p);
PackedInterpretation pack(const Vocabulary& vocab, const FiniteInterpretation& interp);

// A formula compiled against a vocabulary for repeated evaluation.
class CompiledFormula {
 public:
  CompiledFormula(const RelFormula& f, const Vocabulary& vocab);
  bool holds(const PackedInterpretation& p) const;

 private:
  struct ExprNode {
    RelOp op;
    int arity;
    int slot;
    int a;
    int b;
  };
  struct FormulaNode {
    RelFormulaOp op;
    int e0, e1;  // expression nodes
    int t0, t1;  // atom slot (>= 0) or variable slot (-1 - k)
    int a, b;    // sub-formula nodes
    int var;     // bound variable slot
  };
  struct Ctx;

  int compile_expr(const RelExpr& e, const Vocabulary& vocab, std::vector<std::string>& scope, int& arity_out);
  int compile_formula(const RelFormula& f, const Vocabulary& vocab, std::vector<std::string>& scope);
  std::uint64_t eval_expr(int idx, Ctx& ctx) const;
  bool eval_formula(int idx, Ctx& ctx) const;

  int relation_count_ = 0;
  int atom_count_ = 0;
  std::vector<ExprNode> exprs_;
  std::vector<FormulaNode> formulas_;
  int root_ = 0;
  int max_vars_ = 0;
};

// Visits every interpretation of `vocab` with universe size `n` in search
// order; stops early when `visit` returns false.
void enumerate(const Vocabulary& vocab, int n, const std::function<bool(const PackedInterpretation&)>& visit);

// Number of interpretations of `vocab` at size n (saturating).
std::uint64_t interpretation_count(const Vocabulary& vocab, int n);

inline constexpr int kMaxUniverse = 8;
inline constexpr int kDefaultScopeCeiling = 5;

// HG_SCOPE_CEILING if set to 1..8, otherwise 5.
int scope_ceiling_from_env();

enum class Symmetry { Off, Canonical };

struct FinderOptions {
  VocabularyMode vocabulary = VocabularyMode::Occurring;
  Symmetry symmetry = Symmetry::Off;
  int ceiling = 0;  // 0: scope_ceiling_from_env()
};

struct CounterexampleReport {
  enum class Outcome { Refuted, NoneWithinScope, Unsupported };
  Outcome outcome = Outcome::NoneWithinScope;
  int scope = 0;
  std::uint64_t examined = 0;  // interpretations evaluated, including the witness
  std::optional<FiniteInterpretation> interpretation;
  std::string reason;  // Unsupported only
  std::chrono::nanoseconds elapsed{0};
};

std::string_view to_string(CounterexampleReport::Outcome o);

// Throws ScopeExceedsCeiling when scope exceeds the ceiling, BadParameter when
// scope < 1, IllFormed for formulas outside the signature.
CounterexampleReport find_counterexample(const RelFormula& f, const Signature& sig, int scope,
                                         const FinderOptions& opts = {});
// Folds the sequent first; atoms free in the sequent join the vocabulary.
CounterexampleReport find_counterexample(const Sequent& s, const Signature& sig, int scope,
                                         const FinderOptions& opts = {});

// True iff the report is Refuted and its interpretation is in bounds, assigns
// every constant of `s` and falsifies fold_sequent(s).
bool check_report(const Sequent& s, const CounterexampleReport& report);

// `|U| = n`, then `r = {(0,1),(1,0)}` per relation, then `a = 0` per atom.
std::string render(const FiniteInterpretation& interp);
// Deterministic text; elapsed time is not part of it.
std::string render(const CounterexampleReport& report);

}  // namespace hg
