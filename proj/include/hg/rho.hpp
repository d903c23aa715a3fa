#pragma once

// REL -> FORK translation and the finite FORK reduct used to test it.
//
// Binary relations keep their names. A set s becomes the partial identity
// s' and an atom a becomes the point p_a (primes are appended on clashes).
// Only quantifier-free formulas translate; binary lone/one are rejected.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hg/logic.hpp"
#include "hg/modelfinder.hpp"

namespace hg {

struct TranslationLedger {
  std::map<std::string, std::string> points;  // REL atom -> FORK point
  std::map<std::string, std::string> sets;    // REL set -> FORK constant
  bool operator==(const TranslationLedger&) const = default;
};

// Ledger names for every set declared in `sig` and for `atoms`, avoiding
// `taken` and the binary relations of `sig`. translate_sequent passes the
// atoms of the sequent only.
TranslationLedger make_ledger(const Signature& sig, const std::set<std::string>& atoms,
                              const std::set<std::string>& taken = {});

// The FORK signature matching a ledger: binary relations, set constants and
// points.
Signature translated_signature(const Signature& sig, const TranslationLedger& ledger);

struct TranslationResult {
  Sequent sequent;
  TranslationLedger ledger;
  Signature signature;
  // The three axioms of each point, in the order they lead the antecedents.
  std::vector<ForkFormula> point_axioms;
  // s' <= id for each set constant; recorded here, not added to the sequent.
  std::vector<ForkFormula> set_axioms;
};

// `sig` is the REL vocabulary; atoms free in the input need not be declared.
// Throws UnsupportedFormula for variables/quantifiers and binary lone/one,
// IllFormed for constants missing from the ledger.
ForkTerm translate_term(const RelExpr& e, const Signature& sig, const TranslationLedger& ledger);
ForkFormula translate_formula(const RelFormula& f, const Signature& sig, const TranslationLedger& ledger);
// The UnsupportedFormula message names the offending position ("antecedent 0").
TranslationResult translate_sequent(const Sequent& s, const Signature& sig);

// Reduct semantics over a REL interpretation: shared binary names, s' as the
// diagonal of s, p_a as {(a, a)}. Throws ForkNotInterpretable on fork (and
// hence pi/rho), IllFormed on constants the interpretation does not cover.
TupleSet reduct_interpret(const ForkTerm& t, const FiniteInterpretation& interp, const TranslationLedger& ledger);
bool reduct_holds(const ForkFormula& f, const FiniteInterpretation& interp, const TranslationLedger& ledger);
bool reduct_holds(const Sequent& s, const FiniteInterpretation& interp, const TranslationLedger& ledger);

// A FORK formula compiled against a REL vocabulary, for sweeps over packed
// interpretations.
class CompiledReduct {
 public:
  CompiledReduct(const ForkFormula& f, const Vocabulary& vocab, const TranslationLedger& ledger);
  CompiledReduct(const ForkTerm& t, const Vocabulary& vocab, const TranslationLedger& ledger);
  // holds() for a formula, value() for a term
  bool holds(const PackedInterpretation& p) const;
  std::uint64_t value(const PackedInterpretation& p) const;

 private:
  struct Node {
    int op;  // ForkOp or 100 + ForkFormulaOp
    int a = -1, b = -1;
    int slot = -1;   // relation index for constants, atom index for points
    bool set = false;  // constant is a set read as a diagonal
  };
  int compile(const ForkTerm& t, const Vocabulary& vocab, const TranslationLedger& ledger);
  int compile(const ForkFormula& f, const Vocabulary& vocab, const TranslationLedger& ledger);
  std::uint64_t term(int idx, const PackedInterpretation& p) const;
  bool formula(int idx, const PackedInterpretation& p) const;
  std::vector<Node> nodes_;
  int root_ = 0;
};

// The translator family interface.
class RhoTranslator {
 public:
  virtual ~RhoTranslator() = default;
  virtual std::string_view id() const = 0;
  virtual Language source() const = 0;
  virtual Language target() const = 0;
  virtual TranslationResult translate(const Sequent& s, const Signature& sig) const = 0;
};

// id "rel2fork"
const RhoTranslator& rel2fork_translator();

}  // namespace hg
