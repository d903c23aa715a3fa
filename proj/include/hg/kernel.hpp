#pragma once

// Sequent calculators for REL and FORK.
//
// A rule takes a sequent and string-valued parameters and returns the premise
// sequents; an empty premise list closes the goal. Formula indices count
// from 0, `i`/`h`/`k` address antecedents and `j` consequents. A rule that
// rewrites a formula on its own side keeps the result at the same position;
// formulas moved to the other side are appended there.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hg/logic.hpp"

namespace hg {

enum class ParamKind {
  FormulaIndexLeft,
  FormulaIndexRight,
  Term,
  Formula,
  FreshName,
  AxiomSchemaId,
  Substitution,
};

std::string_view to_string(ParamKind kind);

struct ParamSpec {
  std::string name;
  ParamKind kind;
  bool required = true;
};

struct RuleDescriptor {
  std::string id;
  Language language;
  std::vector<ParamSpec> params;
  std::string description;
};

using Params = std::map<std::string, std::string>;

struct ApplicableRule {
  RuleDescriptor rule;
  // Index parameters witnessing applicability, one map per candidate.
  // Term, formula and fresh-name parameters are left unbound.
  std::vector<Params> candidates;
};

class SequentCalculator {
 public:
  virtual ~SequentCalculator() = default;

  virtual Language language() const = 0;
  virtual const std::vector<RuleDescriptor>& rules() const = 0;
  virtual std::vector<ApplicableRule> applicable_rules(const Sequent& s) const = 0;

  // `sig` is the vocabulary of the node; term and formula parameters are
  // parsed against it extended with the free constants of `s`.
  // Throws UnknownRule, RuleNotApplicable, FreshnessViolation, ArityMismatch,
  // UnknownSchema, MissingMetavariable or BadParameter.
  virtual std::vector<Sequent> apply_rule(const Sequent& s, const Signature& sig, std::string_view rule_id,
                                          const Params& params) const = 0;

  const RuleDescriptor* find_rule(std::string_view id) const;
};

const SequentCalculator& rel_calculator();
const SequentCalculator& fork_calculator();
const SequentCalculator& calculator_for(Language lang);

std::vector<RuleDescriptor> list_rules(Language lang);
// "REL" or "FORK"; anything else throws UnknownLanguage.
std::vector<RuleDescriptor> list_rules(std::string_view language_id);

std::vector<ApplicableRule> applicable_rules(const Sequent& s);
std::vector<Sequent> apply_rule(const Sequent& s, const Signature& sig, std::string_view rule_id,
                                const Params& params);

// FORK axiom schemas. The point schemas (point-le-ident, point-nonzero,
// point-atomic) only accept a point constant for x.
const std::vector<std::string>& axiom_schemas();
std::vector<std::string> schema_metavariables(std::string_view schema);
ForkFormula instantiate_axiom(std::string_view schema, const std::map<std::string, ForkTerm>& subst);

// p <= id, !(p = 0), p;1;p <= p
std::vector<ForkFormula> point_axioms(const std::string& point);

}  // namespace hg
