#include "doctest.h"
#include "hg/kernel.hpp"
#include "hg/rho.hpp"
#include "hg/syntax.hpp"
#include "support/gen.hpp"
#include "support/oracle.hpp"
#include "support/preservation.hpp"

using namespace hg;
using T = ForkTerm;
using FF = ForkFormula;

namespace {

Signature rel_sig() {
  Signature sig;
  sig.add_relation("r", 2);
  sig.add_relation("s", 2);
  sig.add_relation("t", 2);
  return sig;
}

Signature set_sig() {
  Signature sig;
  sig.add_relation("r", 2);
  sig.add_relation("s", 1);
  sig.add_relation("t", 1);
  sig.add_atom("a");
  sig.add_atom("b");
  return sig;
}

ErrorCode failure(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::IllFormed;
}

bool mentions_fork(const ForkTerm& t) {
  if (t.op() == ForkOp::Fork) return true;
  for (std::size_t i = 0; i < t.arg_count(); ++i)
    if (mentions_fork(t.arg(i))) return true;
  return false;
}

bool mentions_fork(const ForkFormula& f) {
  if (f.op() == ForkFormulaOp::Eq || f.op() == ForkFormulaOp::Leq) return mentions_fork(f.lhs()) || mentions_fork(f.rhs());
  if (f.op() == ForkFormulaOp::Not) return mentions_fork(f.arg(0));
  return mentions_fork(f.arg(0)) || mentions_fork(f.arg(1));
}

}  // namespace

TEST_CASE("term table") {
  const auto sig = rel_sig();
  const TranslationLedger none;
  auto r = RelExpr::constant("r"), s = RelExpr::constant("s");
  CHECK(translate_term(RelExpr::union_of(r, s), sig, none) == T::plus(T::constant("r"), T::constant("s")));
  CHECK(translate_term(RelExpr::join(r, s), sig, none) == T::comp(T::constant("r"), T::constant("s")));
  CHECK(translate_term(RelExpr::diff(r, s), sig, none) == T::dot(T::constant("r"), T::compl_of(T::constant("s"))));
  CHECK(translate_term(RelExpr::tclosure(r), sig, none) == T::comp(T::constant("r"), T::star(T::constant("r"))));
  CHECK(translate_term(RelExpr::univ(2), sig, none) == T::one());
  CHECK(translate_term(RelExpr::iden(), sig, none) == T::ident());

  const auto ssig = set_sig();
  const auto ledger = make_ledger(ssig, {"a"});
  CHECK(ledger.sets.at("s") == "s'");
  CHECK(ledger.points.at("a") == "p_a");
  auto sp = T::constant("s'"), tp = T::constant("t'");
  CHECK(translate_term(RelExpr::product(RelExpr::constant("s"), RelExpr::constant("t")), ssig, ledger) ==
        T::comp(sp, T::comp(T::one(), tp)));
  CHECK(translate_term(RelExpr::diff(RelExpr::constant("s"), RelExpr::constant("t")), ssig, ledger) ==
        T::dot(sp, T::dot(T::compl_of(tp), T::ident())));
  CHECK(translate_term(RelExpr::atom("a"), ssig, ledger) == T::point("p_a"));
}

TEST_CASE("formula table") {
  const auto sig = rel_sig();
  CHECK(translate_formula(parse_formula("r.s in t", sig).rel(), sig, {}) ==
        FF::leq(T::comp(T::constant("r"), T::constant("s")), T::constant("t")));

  auto ssig = set_sig();
  const auto ledger = make_ledger(ssig, {"a", "b"});
  CHECK(translate_formula(parse_formula("(a, b) in ~r", ssig).rel(), ssig, ledger) ==
        FF::negation(FF::eq(T::comp(T::point("p_a"), T::comp(T::conv(T::constant("r")), T::point("p_b"))), T::zero())));
  CHECK(failure([&] { translate_formula(parse_formula("all x | (x) in s", ssig).rel(), ssig, ledger); }) ==
        ErrorCode::UnsupportedFormula);
  CHECK(failure([&] { translate_formula(parse_formula("lone r", ssig).rel(), ssig, ledger); }) ==
        ErrorCode::UnsupportedFormula);
  CHECK(translate_formula(parse_formula("lone s", ssig).rel(), ssig, ledger) ==
        FF::leq(T::comp(T::constant("s'"), T::comp(T::one(), T::constant("s'"))), T::ident()));
}

TEST_CASE("sequent translation") {
  const auto sig = rel_sig();
  auto tr = translate_sequent(parse_sequent("r in s, s in t |- r in t", sig), sig);
  Signature fsig(Language::Fork);
  for (const char* n : {"r", "s", "t"}) fsig.add_fork_constant(n, ForkConstKind::Relation);
  CHECK(tr.sequent == parse_sequent("r <= s, s <= t |- r <= t", fsig));
  CHECK(tr.ledger.points.empty());
  CHECK(tr.ledger.sets.empty());
  CHECK(tr.signature == fsig);

  const auto ssig = set_sig();
  auto tr2 = translate_sequent(parse_sequent("(a) in s |- some s", ssig), ssig);
  std::vector<Formula> ante;
  for (const auto& ax : point_axioms("p_a")) ante.emplace_back(ax);
  ante.emplace_back(FF::negation(FF::eq(T::dot(T::point("p_a"), T::constant("s'")), T::zero())));
  CHECK(tr2.sequent ==
        Sequent(Language::Fork, ante, {FF::negation(FF::eq(T::constant("s'"), T::zero()))}));
  CHECK(tr2.point_axioms.size() == 3);
  CHECK(tr2.set_axioms.size() == 2);
  CHECK(tr2.ledger.points == std::map<std::string, std::string>{{"a", "p_a"}});

  try {
    translate_sequent(parse_sequent("all x | (x) in s |- some s", ssig), ssig);
    FAIL("expected UnsupportedFormula");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedFormula);
    CHECK(std::string(e.what()).starts_with("antecedent 0"));
  }
}

TEST_CASE("ledger names avoid clashes") {
  Signature sig;
  sig.add_relation("p_a", 2);
  sig.add_relation("s", 1);
  sig.add_atom("a");
  auto tr = translate_sequent(parse_sequent("(a, a) in p_a |- (a) in s", sig), sig);
  CHECK(tr.ledger.points.at("a") == "p_a'");
  std::set<std::string> names{tr.ledger.sets.at("s"), tr.ledger.points.at("a"), "p_a"};
  CHECK(names.size() == 3);
  CHECK_NOTHROW(check_well_formed(tr.sequent, tr.signature, false));
}

TEST_CASE("reduct examples") {
  FiniteInterpretation I;
  I.size = 2;
  I.set_relation("r", 2, {{0, 1}});
  I.set_atom("a", 1);
  TranslationLedger ledger;
  ledger.points["a"] = "p_a";
  CHECK(reduct_interpret(T::conv(T::constant("r")), I, ledger) == TupleSet{{1, 0}});
  CHECK(reduct_interpret(T::point("p_a"), I, ledger) == TupleSet{{1, 1}});
  CHECK(failure([&] { reduct_interpret(T::fork(T::constant("r"), T::constant("r")), I, ledger); }) ==
        ErrorCode::ForkNotInterpretable);
  CHECK(failure([&] { reduct_interpret(T::pi(), I, ledger); }) == ErrorCode::ForkNotInterpretable);
  CHECK(failure([&] { reduct_interpret(T::constant("q"), I, ledger); }) == ErrorCode::IllFormed);
  CHECK(reduct_holds(FF::leq(T::point("p_a"), T::ident()), I, ledger));
}

TEST_CASE("reduct agrees with the naive oracle") {
  hgtest::Rng rng(31);
  Signature fsig(Language::Fork);
  fsig.add_fork_constant("r", ForkConstKind::Relation);
  fsig.add_fork_constant("u'", ForkConstKind::Relation);
  fsig.add_fork_constant("p_a", ForkConstKind::Point);
  hgtest::ForkGen g(fsig, false);
  TranslationLedger ledger;
  ledger.sets["u"] = "u'";
  ledger.points["a"] = "p_a";
  for (int k = 0; k < 400; ++k) {
    const int n = 1 + hgtest::pick(rng, 4);
    FiniteInterpretation I;
    I.size = n;
    TupleSet r, u;
    hgtest::NaiveModel m;
    m.n = n;
    std::map<std::string, std::set<hgtest::Pair>> consts;
    for (int i = 0; i < n; ++i) {
      if (hgtest::coin(rng)) u.insert({i}), consts["u'"].insert({i, i});
      for (int j = 0; j < n; ++j)
        if (hgtest::coin(rng)) r.insert({i, j}), consts["r"].insert({i, j});
    }
    consts.try_emplace("u'");
    consts.try_emplace("r");
    const int a = hgtest::pick(rng, n);
    consts["p_a"] = {{a, a}};
    I.set_relation("r", 2, r);
    I.set_relation("u", 1, u);
    I.set_atom("a", a);
    auto t = g.term(rng, 4);
    TupleSet expect;
    for (auto [x, y] : hgtest::naive_fork(t, m, consts)) expect.insert({x, y});
    CHECK(reduct_interpret(t, I, ledger) == expect);
    auto f = g.formula(rng, 2);
    CHECK(reduct_holds(f, I, ledger) == hgtest::naive_fork_holds(f, m, consts));
  }
}

TEST_CASE("translation is deterministic and fork-free") {
  hgtest::Rng rng(8);
  const auto sig = hgtest::preservation_signature();
  for (int k = 0; k < 300; ++k) {
    auto s = hgtest::random_qf_sequent(rng, sig);
    auto a = translate_sequent(s, sig), b = translate_sequent(s, sig);
    CHECK(a.sequent == b.sequent);
    CHECK(a.ledger == b.ledger);
    for (const auto& side : {a.sequent.antecedents(), a.sequent.consequents()})
      for (const auto& f : side) CHECK_FALSE(mentions_fork(f.fork()));
    std::set<std::string> targets;
    for (const auto& [_, p] : a.ledger.points) targets.insert(p);
    CHECK(targets.size() == a.ledger.points.size());
    CHECK(a.point_axioms.size() == 3 * a.ledger.points.size());
  }
}

TEST_CASE("semantics preservation up to scope 3") {
  hgtest::Rng rng(99);
  const auto sig = hgtest::preservation_signature();
  for (int k = 0; k < 200; ++k) {
    auto s = hgtest::random_qf_sequent(rng, sig);
    auto m = hgtest::preservation_mismatch(s, sig, 3);
    if (m) FAIL(print(s) << "\n" << *m);
  }
}

TEST_CASE("translator interface") {
  const auto& t = rel2fork_translator();
  CHECK(t.id() == "rel2fork");
  CHECK(t.source() == Language::Rel);
  CHECK(t.target() == Language::Fork);
}
