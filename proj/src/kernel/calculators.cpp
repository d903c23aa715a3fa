#include "calculus.hpp"

namespace hg {

const SequentCalculator& rel_calculator() {
  static const kernel_detail::TableCalculator calc(Language::Rel, kernel_detail::rel_rules());
  return calc;
}

const SequentCalculator& fork_calculator() {
  static const kernel_detail::TableCalculator calc(Language::Fork, kernel_detail::fork_rules());
  return calc;
}

const SequentCalculator& calculator_for(Language lang) {
  return lang == Language::Rel ? rel_calculator() : fork_calculator();
}

std::vector<RuleDescriptor> list_rules(Language lang) { return calculator_for(lang).rules(); }

std::vector<RuleDescriptor> list_rules(std::string_view language_id) {
  if (language_id == "REL") return list_rules(Language::Rel);
  if (language_id == "FORK") return list_rules(Language::Fork);
  throw Error(ErrorCode::UnknownLanguage, "unknown language `" + std::string(language_id) + "`");
}

std::vector<ApplicableRule> applicable_rules(const Sequent& s) {
  return calculator_for(s.language()).applicable_rules(s);
}

std::vector<Sequent> apply_rule(const Sequent& s, const Signature& sig, std::string_view rule_id,
                                const Params& params) {
  return calculator_for(s.language()).apply_rule(s, sig, rule_id, params);
}

}  // namespace hg
