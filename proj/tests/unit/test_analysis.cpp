#include <fstream>
#include <functional>
#include <sstream>

#include "doctest.h"
#include "hg/analysis.hpp"
#include "hg/syntax.hpp"
#include "support/gen.hpp"

using namespace hg;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Spec corpus_spec(const std::string& file) { return parse_spec(slurp(std::string(HG_CORPUS_DIR) + file)); }

SessionConfig cfg() {
  SessionConfig c;
  c.scope_ceiling = 5;
  return c;
}

Session make(const std::string& spec_text, const std::string& goal) {
  return Session::create(parse_spec(spec_text), goal, cfg());
}

std::set<std::string> offered(const Session& s, NodeId id) {
  std::set<std::string> out;
  for (const auto& o : s.applicable_actions(id)) out.insert(o.action);
  return out;
}

bool has_rule_offer(const Session& s, NodeId id) {
  for (const auto& o : s.applicable_actions(id))
    if (o.action.starts_with("rule:")) return true;
  return false;
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::IllFormed;
}

const char* kRS = "lang REL; rel r, s : 2; assert rins: r in s; assert same: r in s => r in s;";

// Discharge recomputed from scratch.
bool discharged_oracle(const Session& s, NodeId id) {
  const auto& n = s.node(id);
  if (n.pruned) return false;
  if (n.closed) return true;
  bool any = false;
  for (NodeId c : n.children) {
    if (s.node(c).pruned) continue;
    any = true;
    if (!discharged_oracle(s, c)) return false;
  }
  return any;
}

}  // namespace

TEST_CASE("create_session") {
  auto trans = Session::create(corpus_spec("/rel/trans.hg"), "trans", cfg());
  CHECK(print(trans.root().sequent) == "r in s, s in t |- r in t");
  CHECK(trans.root().status() == NodeStatus::Open);
  CHECK(trans.root().language() == Language::Rel);
  CHECK(trans.log().empty());

  auto bare = make(kRS, "rins");
  CHECK(print(bare.root().sequent) == "|- r in s");

  CHECK(code_of([&] { make(kRS, "nope"); }) == ErrorCode::UnknownGoal);

  Spec bad = parse_spec(kRS);
  bad.axioms.push_back({"f", RelFormula::some(RelExpr::constant("q"))});
  CHECK(code_of([&] { Session::create(bad, "rins"); }) == ErrorCode::IllFormedSpec);
}

TEST_CASE("applicable actions follow the guards") {
  auto s = make("lang REL; rel r : 2; fact f: r in r; assert g: r in r;", "g");
  auto root = offered(s, 0);
  for (const char* a : {"rule:axiom", "validate", "validated-case", "switch-language", "eliminate-superfluous",
                        "hypothesis-confidence"})
    CHECK(root.contains(a));
  CHECK_FALSE(root.contains("prune"));
  CHECK_FALSE(root.contains("suggest-witnesses"));
  CHECK_FALSE(root.contains("dismiss-refutation"));
  CHECK(code_of([&] { s.applicable_actions(7); }) == ErrorCode::UnknownNode);

  // FORK child: no finder, no translator from FORK
  s.apply_action(0, "switch-language", {{"translator", "rel2fork"}});
  auto fork = offered(s, 1);
  CHECK(fork.contains("rule:axiom"));
  CHECK_FALSE(fork.contains("validate"));
  CHECK_FALSE(fork.contains("switch-language"));
  CHECK_FALSE(fork.contains("validated-case"));

  // a discharged non-root node offers only prune
  auto t = make(kRS, "same");
  t.apply_action(0, "rule:imp-right", {{"j", "0"}});
  t.apply_action(1, "rule:cut", {{"formula", "r in s"}});
  t.apply_action(2, "rule:axiom", {{"i", "0"}, {"j", "0"}});
  t.apply_action(3, "rule:axiom", {{"i", "0"}, {"j", "0"}});
  CHECK(t.node(1).status() == NodeStatus::Discharged);
  CHECK(offered(t, 1) == std::set<std::string>{"prune"});
  CHECK(offered(t, 0).empty());
}

TEST_CASE("rule actions and discharge propagation") {
  auto s = make(kRS, "same");
  const auto& r0 = s.apply_action(0, "rule:imp-right", {{"j", "0"}});
  CHECK(r0.seq == 0);
  CHECK(r0.engine == "rel-lk");
  CHECK(r0.created == std::vector<NodeId>{1});
  CHECK(print(s.node(1).sequent) == "r in s |- r in s");
  CHECK(s.root().status() == NodeStatus::Open);
  CHECK(*s.node(1).provenance == 0);
  CHECK(s.node(1).provenance_action == "rule:imp-right");

  const auto& r1 = s.apply_action(1, "rule:axiom", {{"i", "0"}, {"j", "0"}});
  CHECK(r1.seq == 1);
  CHECK(r1.created.empty());
  CHECK(r1.updated == std::vector<NodeId>{0, 1});
  CHECK(s.node(1).status() == NodeStatus::Closed);
  CHECK(s.root().status() == NodeStatus::Discharged);

  // closed nodes take no further rules
  CHECK(code_of([&] { s.apply_action(1, "rule:axiom", {{"i", "0"}, {"j", "0"}}); }) ==
        ErrorCode::ActionNotApplicable);
  CHECK(s.log().size() == 2);
}

TEST_CASE("rejected requests leave no trace") {
  auto s = make(kRS, "rins");
  const auto before = tree_digest(s);
  CHECK(code_of([&] { s.apply_action(0, "rule:and-right", {{"j", "0"}}); }) == ErrorCode::ActionNotApplicable);
  CHECK(code_of([&] { s.apply_action(0, "rule:no-such-rule", {}); }) == ErrorCode::ActionNotApplicable);
  CHECK(code_of([&] { s.apply_action(0, "frobnicate", {}); }) == ErrorCode::ActionNotApplicable);
  CHECK(code_of([&] { s.apply_action(9, "validate", {}); }) == ErrorCode::UnknownNode);
  CHECK(code_of([&] { s.apply_action(0, "validate", {{"scope", "9"}}); }) == ErrorCode::ScopeExceedsCeiling);
  CHECK(code_of([&] { s.apply_action(0, "validate", {{"scope", "two"}}); }) == ErrorCode::BadParameter);
  CHECK(code_of([&] { s.apply_action(0, "validate", {{"depth", "2"}}); }) == ErrorCode::BadParameter);
  CHECK(code_of([&] { s.apply_action(0, "rule:cut", {{"formula", "r in"}}); }) == ErrorCode::ParseError);
  CHECK(code_of([&] { s.apply_action(0, "switch-language", {{"translator", "x"}}); }) == ErrorCode::BadParameter);
  CHECK(s.log().empty());
  CHECK(tree_digest(s) == before);
}

TEST_CASE("validate annotates without discharging") {
  auto s = make(kRS, "rins");
  const auto& rec = s.apply_action(0, "validate", {{"scope", "1"}});
  CHECK(rec.engine == "rel-enum");
  CHECK(s.root().status() == NodeStatus::Refuted);
  REQUIRE(s.root().refutation);
  CHECK(check_report(s.root().sequent, *s.root().refutation));
  CHECK(render(*s.root().refutation->interpretation) == render([] {
          FiniteInterpretation i;
          i.size = 1;
          i.set_relation("r", 2, {{0, 0}});
          i.set_relation("s", 2, {});
          return i;
        }()));
  CHECK(rec.output == render(*s.root().refutation));
  CHECK(rec.output_digest == sha256_hex(rec.output));

  // refuted: no rule actions until dismissed
  CHECK_FALSE(has_rule_offer(s, 0));
  CHECK(offered(s, 0) == std::set<std::string>{"prune", "dismiss-refutation"});
  CHECK(code_of([&] { s.apply_action(0, "rule:cut", {{"formula", "r in s"}}); }) == ErrorCode::ActionNotApplicable);
  s.apply_action(0, "dismiss-refutation", {});
  CHECK(s.root().status() == NodeStatus::Open);
  CHECK(has_rule_offer(s, 0));

  auto v = make(kRS, "same");
  v.apply_action(0, "validate", {{"scope", "2"}});
  CHECK(v.root().status() == NodeStatus::Validated);
  CHECK(status_label(v.root()) == "Validated(2)");
  CHECK_FALSE(v.root().discharged);
  CHECK(has_rule_offer(v, 0));
  v.apply_action(0, "prune", {});
  CHECK(v.root().status() == NodeStatus::Open);
}

TEST_CASE("validated-case") {
  auto s = make(kRS, "rins");
  try {
    s.apply_action(0, "validated-case", {{"case", "no r"}, {"scope", "2"}});
    FAIL("expected ValidationFailed");
  } catch (const ValidationFailure& e) {
    CHECK(e.code() == ErrorCode::ValidationFailed);
    CHECK(e.seq() == 0);
    CHECK(print(e.refuted()) == "!no r |- r in s");
    CHECK(check_report(e.refuted(), e.report()));
  }
  CHECK(s.root().children.empty());
  REQUIRE(s.log().size() == 1);
  CHECK(s.log()[0].failed);
  CHECK(s.log()[0].created.empty());
  CHECK(s.root().status() == NodeStatus::Open);

  auto t = Session::create(corpus_spec("/rel/trans.hg"), "trans", cfg());
  const auto& rec = t.apply_action(0, "validated-case", {{"case", "some r"}, {"scope", "2"}});
  CHECK(rec.created == std::vector<NodeId>{1, 2});
  CHECK(print(t.node(1).sequent) == "r in s, s in t, some r |- r in t");
  CHECK(print(t.node(2).sequent) == "r in s, s in t, !some r |- r in t");
  CHECK(status_label(t.node(1)) == "Validated(2)");
  CHECK(status_label(t.node(2)) == "Validated(2)");
  CHECK(t.root().status() == NodeStatus::Open);
}

TEST_CASE("eliminate-superfluous drops by weakening only") {
  auto s = make("lang REL; rel r, s, t : 2; set u; fact a: some u; fact b: r in s; fact c: u in u; fact d: s in t;"
                "assert g: r in t;",
                "g");
  const auto& rec = s.apply_action(0, "eliminate-superfluous", {{"scope", "2"}});
  REQUIRE(rec.created.size() == 1);
  const Sequent& child = s.node(rec.created[0]).sequent;
  CHECK(print(child) == "r in s, s in t |- r in t");

  // rebuild the child from the parent with hide-left only
  Sequent cur = s.root().sequent;
  for (std::size_t k = cur.antecedents().size(); k-- > 0;) {
    const auto& a = cur.antecedents()[k];
    if (std::find(child.antecedents().begin(), child.antecedents().end(), a) == child.antecedents().end())
      cur = apply_rule(cur, s.spec().signature, "hide-left", {{"i", std::to_string(k)}}).at(0);
  }
  CHECK(cur == child);
  CHECK(find_counterexample(child, s.spec().signature, 2).outcome == CounterexampleReport::Outcome::NoneWithinScope);

  auto bad = make(kRS, "rins");
  bad.apply_action(0, "rule:cut", {{"formula", "some r"}});
  CHECK(code_of([&] { bad.apply_action(2, "eliminate-superfluous", {{"scope", "1"}}); }) ==
        ErrorCode::ValidationFailed);
  CHECK(bad.log().back().failed);
  CHECK(bad.node(2).children.empty());
}

TEST_CASE("suggest-witnesses") {
  auto s = Session::create(corpus_spec("/rel/swap.hg"), "wit", cfg());
  CHECK(offered(s, 0).contains("suggest-witnesses"));
  const auto before = tree_digest(s);
  const auto& rec = s.apply_action(0, "suggest-witnesses", {{"j", "0"}, {"scope", "2"}});
  CHECK(rec.witnesses == std::vector<std::string>{"a"});
  CHECK(rec.created.empty());
  CHECK(rec.updated.empty());
  CHECK(tree_digest(s) == before);
  CHECK(code_of([&] { s.apply_action(0, "suggest-witnesses", {{"j", "3"}}); }) == ErrorCode::BadParameter);
}

TEST_CASE("hypothesis-confidence flags hypotheses the axioms do not support") {
  auto t = Session::create(corpus_spec("/rel/trans.hg"), "trans", cfg());
  t.apply_action(0, "validated-case", {{"case", "some r"}, {"scope", "2"}});
  t.apply_action(1, "hypothesis-confidence", {{"i", "0"}, {"scope", "2"}});
  CHECK(t.node(1).suspects.empty());
  const auto& rec = t.apply_action(1, "hypothesis-confidence", {{"i", "2"}, {"scope", "2"}});
  CHECK(t.node(1).suspects == std::set<std::size_t>{2});
  CHECK(rec.updated == std::vector<NodeId>{1});
  t.apply_action(1, "prune", {});
  CHECK(t.node(1).suspects.empty());
  CHECK(t.node(1).status() == NodeStatus::Open);
}

TEST_CASE("switch-language and the transitivity proof") {
  auto s = Session::create(corpus_spec("/rel/trans.hg"), "trans", cfg());
  const auto& rec = s.apply_action(0, "switch-language", {{"translator", "rel2fork"}});
  CHECK(rec.engine == "rel2fork");
  CHECK(print(s.node(1).sequent) == "r <= s, s <= t |- r <= t");
  CHECK(s.node(1).language() == Language::Fork);
  CHECK(s.node(1).signature.language() == Language::Fork);
  CHECK(s.root().status() == NodeStatus::Translated);

  auto p = Session::create(corpus_spec("/rel/trans.hg"), "trans", cfg());
  run_script(p, parse_script(slurp(std::string(HG_CORPUS_DIR) + "/rel/trans.hgs")));
  CHECK(p.root().status() == NodeStatus::Discharged);
  CHECK(p.root().discharged);
  auto q = replay(p.spec(), p.goal(), p.config(), p.registry(), p.log());
  CHECK(tree_digest(q) == tree_digest(p));
  CHECK(canonical_tree(q) == canonical_tree(p));
}

TEST_CASE("scripted proofs discharge only finder-valid roots") {
  struct Case {
    const char* spec;
    const char* goal;
    const char* script;
  };
  for (const Case& c : {Case{"/rel/trans.hg", "trans", "/rel/trans.hgs"}, Case{"/rel/swap.hg", "swap", "/rel/swap.hgs"},
                        Case{"/rel/swap.hg", "wit", "/rel/wit.hgs"}}) {
    CAPTURE(c.script);
    auto s = Session::create(corpus_spec(c.spec), c.goal, cfg());
    run_script(s, parse_script(slurp(std::string(HG_CORPUS_DIR) + c.script)));
    CHECK(s.root().discharged);
    CHECK(find_counterexample(s.root().sequent, s.spec().signature, 3).outcome ==
          CounterexampleReport::Outcome::NoneWithinScope);
  }
}

TEST_CASE("prune retains the subtree and excludes it from discharge") {
  auto s = make(kRS, "same");
  s.apply_action(0, "rule:imp-right", {{"j", "0"}});
  s.apply_action(1, "rule:cut", {{"formula", "r in s"}});
  s.apply_action(2, "rule:axiom", {{"i", "0"}, {"j", "0"}});
  s.apply_action(3, "rule:axiom", {{"i", "0"}, {"j", "0"}});
  REQUIRE(s.root().discharged);
  const auto& rec = s.apply_action(1, "prune", {});
  CHECK(rec.updated == std::vector<NodeId>{0, 1, 2, 3});
  CHECK(s.nodes().size() == 4);
  CHECK(s.node(2).status() == NodeStatus::Pruned);
  CHECK(s.node(3).status() == NodeStatus::Pruned);
  CHECK(s.node(1).status() == NodeStatus::Open);
  CHECK(s.root().status() == NodeStatus::Open);
  CHECK(offered(s, 2).empty());
  // reopened: a fresh attempt succeeds alongside the pruned one
  s.apply_action(1, "rule:axiom", {{"i", "0"}, {"j", "0"}});
  CHECK(s.root().discharged);
  CHECK(s.node(1).children == std::vector<NodeId>{2, 3});
}

TEST_CASE("engine registry from configuration") {
  const char* text = R"(# engines
[engine]
id = "rel-lk"
family = "sequent-calculator"
source = "REL"

[engine]
id = rel-enum
family = counterexample-finder
source = REL
target = none
)";
  auto reg = EngineRegistry::from_config(text);
  REQUIRE(reg.entries().size() == 2);
  CHECK(reg.find("rel-enum")->family == EngineFamily::CounterexampleFinder);
  CHECK(EngineRegistry::from_config(reg.to_config()) == reg);
  CHECK(EngineRegistry::from_config(EngineRegistry::defaults().to_config()) == EngineRegistry::defaults());

  auto s = Session::create(parse_spec(kRS), "rins", cfg(), reg);
  auto ids = offered(s, 0);
  CHECK(ids.contains("validate"));
  CHECK_FALSE(ids.contains("switch-language"));

  auto none = Session::create(parse_spec(kRS), "rins", cfg(), EngineRegistry::from_config(""));
  CHECK(offered(none, 0).empty());

  CHECK(code_of([] { EngineRegistry::from_config("[engine]\nid = z3\nfamily = counterexample-finder\nsource = REL\n"); }) ==
        ErrorCode::UnknownEngine);
  CHECK(code_of([] { EngineRegistry::from_config("[engine]\nid = rel-lk\nfamily = rho-translator\nsource = REL\n"); }) ==
        ErrorCode::BadConfig);
  CHECK(code_of([] { EngineRegistry::from_config("[engine]\nid = rel-lk\nfamily = sequent-calculator\n"); }) ==
        ErrorCode::BadConfig);
  CHECK(code_of([] { EngineRegistry::from_config("id = rel-lk\n"); }) == ErrorCode::BadConfig);
  CHECK(code_of([] { EngineRegistry::from_config("[engines]\n"); }) == ErrorCode::BadConfig);
  CHECK(code_of([] {
          EngineRegistry::from_config(
              "[engine]\nid=rel-lk\nfamily=sequent-calculator\nsource=REL\n"
              "[engine]\nid=rel-lk\nfamily=sequent-calculator\nsource=REL\n");
        }) == ErrorCode::BadConfig);
}

TEST_CASE("replay and digests") {
  auto fresh = make(kRS, "same");
  auto empty = replay(fresh.spec(), fresh.goal(), fresh.config(), fresh.registry(), {});
  CHECK(tree_digest(empty) == tree_digest(fresh));
  CHECK(tree_digest(fresh).size() == 64);

  auto s = make(kRS, "same");
  s.apply_action(0, "rule:imp-right", {{"j", "0"}});
  auto open_digest = tree_digest(s);
  s.apply_action(1, "validate", {{"scope", "1"}});
  CHECK(tree_digest(s) != open_digest);

  auto log = s.log();
  log[0].action = "rule:no-such-rule";
  try {
    replay(s.spec(), s.goal(), s.config(), s.registry(), log);
    FAIL("expected divergence");
  } catch (const ReplayDivergence& e) {
    CHECK(e.seq() == 0);
  }
  log = s.log();
  log[1].output_digest = sha256_hex("tampered");
  try {
    replay(s.spec(), s.goal(), s.config(), s.registry(), log);
    FAIL("expected divergence");
  } catch (const ReplayDivergence& e) {
    CHECK(e.seq() == 1);
  }
  log = s.log();
  log[1].seq = 5;
  CHECK(code_of([&] { replay(s.spec(), s.goal(), s.config(), s.registry(), log); }) == ErrorCode::ReplayDivergence);
  // the digest input has no addresses or times: a known value
  CHECK(canonical_tree(fresh) == "0|-|Open|REL||- r in s => r in s|create\n");
}

// ---------------------------------------------------------------------------
// Random action sequences

namespace {

std::string fill_param(hgtest::Rng& rng, const Session& s, const AnalysisNode& n, const ActionParamSpec& p,
                       const Params& so_far) {
  Signature ext = extend_with_free_constants(n.signature, n.sequent);
  std::set<std::string> avoid = all_names(n.sequent);
  for (const auto& r : ext.relations()) avoid.insert(r.name);
  for (const auto& a : ext.atoms()) avoid.insert(a);
  for (const auto& c : ext.fork_constants()) avoid.insert(c.name);
  for (const auto& [k, v] : so_far) avoid.insert(v);
  if (p.kind == "scope") return std::to_string(1 + hgtest::pick(rng, 2));
  if (p.kind == "fresh-name") return fresh_name(p.name == "fresh2" ? "d" : "c", avoid);
  if (p.kind == "term") {
    std::vector<std::string> atoms(ext.atoms().begin(), ext.atoms().end());
    if (atoms.empty() || hgtest::coin(rng, 20)) return fresh_name("c", avoid);
    return hgtest::pick_of(rng, atoms);
  }
  if (p.kind == "formula") {
    if (n.language() == Language::Rel) {
      hgtest::RelGen gen(ext, {.quantifiers = false});
      return print(gen.formula(rng, 1));
    }
    const auto& ante = n.sequent.antecedents();
    if (!ante.empty() && hgtest::coin(rng)) return print(hgtest::pick_of(rng, ante));
    return "0 <= 1";
  }
  if (p.kind == "axiom-schema-id") return hgtest::pick_of(rng, axiom_schemas());
  if (p.kind == "substitution") {
    auto it = so_far.find("schema");
    if (it == so_far.end()) return "";
    std::vector<std::string> consts;
    for (const auto& c : ext.fork_constants()) consts.push_back(c.name);
    consts.push_back("id");
    std::string out;
    for (const auto& m : schema_metavariables(it->second)) {
      if (!out.empty()) out += ", ";
      out += m + " := " + hgtest::pick_of(rng, consts);
    }
    return out;
  }
  (void)s;
  return "0";
}

void check_invariants(const Session& s) {
  for (std::size_t k = 0; k < s.log().size(); ++k) CHECK(s.log()[k].seq == k);
  for (const auto& n : s.nodes()) {
    CAPTURE(n.id);
    CHECK(n.discharged == discharged_oracle(s, n.id));
    if (n.refutation && !n.pruned) CHECK_FALSE(has_rule_offer(s, n.id));
    if (n.pruned)
      for (NodeId c : n.children) CHECK(s.node(c).pruned);
    if (n.parent) {
      const auto& kids = s.node(*n.parent).children;
      CHECK(std::find(kids.begin(), kids.end(), n.id) != kids.end());
    }
  }
}

}  // namespace

TEST_CASE("random action sequences keep the tree invariants") {
  const std::vector<std::pair<std::string, std::string>> goals = {
      {"/rel/trans.hg", "trans"}, {"/rel/swap.hg", "swap"}, {"/rel/swap.hg", "wit"}, {"/rel/bad.hg", "rins"}};
  hgtest::Rng rng(20261015);
  int applied = 0, failed_validation = 0, rejected = 0;
  for (int round = 0; round < 16; ++round) {
    const auto& [file, goal] = goals[static_cast<std::size_t>(round) % goals.size()];
    auto s = Session::create(corpus_spec(file), goal, cfg());
    bool root_checked = false;
    for (int step = 0; step < 18; ++step) {
      std::vector<NodeId> live;
      for (const auto& n : s.nodes())
        if (!n.pruned) live.push_back(n.id);
      NodeId target = hgtest::pick_of(rng, live);
      auto offers = s.applicable_actions(target);
      if (offers.empty()) continue;
      const auto& offer = hgtest::pick_of(rng, offers);
      Params params;
      if (!offer.candidates.empty()) params = hgtest::pick_of(rng, offer.candidates);
      for (const auto& p : offer.params) {
        if (params.contains(p.name)) continue;
        if (!p.required && p.kind != "scope" && !hgtest::coin(rng, 70)) continue;
        params[p.name] = fill_param(rng, s, s.node(target), p, params);
      }
      if (offer.action == "rule:axiom-inst" && params["subst"].empty()) params.erase("subst");

      const auto log_before = s.log().size();
      const auto digest_before = tree_digest(s);
      CAPTURE(offer.action);
      try {
        const auto& rec = s.apply_action(target, offer.action, params);
        ++applied;
        CHECK(s.log().size() == log_before + 1);
        if (offer.action == "eliminate-superfluous") {
          const auto& child = s.node(rec.created.at(0)).sequent;
          const auto& parent = s.node(target).sequent;
          CHECK(child.consequents() == parent.consequents());
          std::size_t k = 0;
          for (const auto& a : parent.antecedents())
            if (k < child.antecedents().size() && child.antecedents()[k] == a) ++k;
          CHECK(k == child.antecedents().size());
        }
        if (offer.action == "validated-case")
          for (NodeId c : rec.created) CHECK(s.node(c).validated_scope.has_value());
      } catch (const ValidationFailure& e) {
        ++failed_validation;
        CHECK(s.log().size() == log_before + 1);
        CHECK(s.log().back().failed);
        CHECK(check_report(e.refuted(), e.report()));
        CHECK(tree_digest(s) == digest_before);
      } catch (const Error& e) {
        ++rejected;
        CAPTURE(e.what());
        CHECK(e.code() != ErrorCode::ActionNotApplicable);
        CHECK(e.code() != ErrorCode::EngineFailure);
        CHECK(s.log().size() == log_before);
        CHECK(tree_digest(s) == digest_before);
      }
      check_invariants(s);
      // incremental replay
      auto again = replay(s.spec(), s.goal(), s.config(), s.registry(), s.log());
      CHECK(tree_digest(again) == tree_digest(s));
      if (s.root().discharged && !root_checked) {
        root_checked = true;
        CHECK(find_counterexample(s.root().sequent, s.spec().signature, 2).outcome ==
              CounterexampleReport::Outcome::NoneWithinScope);
      }
    }
  }
  MESSAGE("applied " << applied << ", failed validations " << failed_validation << ", rejected " << rejected);
  CHECK(applied > 100);
}
