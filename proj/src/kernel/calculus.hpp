#pragma once

// Shared plumbing for the rule tables of both calculators.

#include <functional>
#include <optional>

#include "hg/kernel.hpp"

namespace hg::kernel_detail {

struct Ctx {
  const Sequent& s;
  const Signature& sig;
  const Params& params;
  std::string_view rule;

  // sig extended with the free atoms/points of s
  const Signature& extended();
  std::optional<Signature> ext_;
};

struct RuleImpl {
  RuleDescriptor desc;
  std::function<std::vector<Params>(const Sequent&)> candidates;
  std::function<std::vector<Sequent>(Ctx&)> apply;
};

class TableCalculator : public SequentCalculator {
 public:
  TableCalculator(Language lang, std::vector<RuleImpl> rules);
  Language language() const override { return lang_; }
  const std::vector<RuleDescriptor>& rules() const override { return descs_; }
  std::vector<ApplicableRule> applicable_rules(const Sequent& s) const override;
  std::vector<Sequent> apply_rule(const Sequent& s, const Signature& sig, std::string_view rule_id,
                                  const Params& params) const override;

 private:
  Language lang_;
  std::vector<RuleImpl> impls_;
  std::vector<RuleDescriptor> descs_;
};

[[noreturn]] void not_applicable(const Ctx& ctx, const std::string& why);
[[noreturn]] void bad_param(const Ctx& ctx, const std::string& why);

// Index parameter `name` (antecedent when left) that must be present.
std::size_t index_param(const Ctx& ctx, const std::string& name, bool left);
std::optional<std::size_t> opt_index_param(const Ctx& ctx, const std::string& name, bool left);

struct Target {
  bool left;
  std::size_t index;
  const Formula& formula(const Sequent& s) const {
    return left ? s.antecedents()[index] : s.consequents()[index];
  }
};
// Exactly one of `i` (antecedent) or `j` (consequent).
Target side_param(const Ctx& ctx);

// Checked fresh name: an identifier that occurs nowhere in the sequent and is
// not declared in the signature.
std::string fresh_param(const Ctx& ctx, const std::string& name);
const std::string& raw_param(const Ctx& ctx, const std::string& name);

// Premise construction
Sequent replace(const Sequent& s, Target t, std::vector<Formula> with);
Sequent remove(const Sequent& s, Target t);
Sequent add_left(const Sequent& s, std::vector<Formula> fs);
Sequent add_right(const Sequent& s, std::vector<Formula> fs);

ParamSpec idx_left(const std::string& name = "i", bool required = true);
ParamSpec idx_right(const std::string& name = "j", bool required = true);

// Candidates: every index on one side whose formula satisfies `pred`.
std::vector<Params> scan(const Sequent& s, bool left, const std::function<bool(const Formula&)>& pred,
                         const std::string& key = "");

// axiom, cut, hide-*, and the propositional left/right rules.
void add_structural_rules(std::vector<RuleImpl>& rules, Language lang);

std::vector<RuleImpl> rel_rules();
std::vector<RuleImpl> fork_rules();

}  // namespace hg::kernel_detail
