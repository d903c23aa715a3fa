#include <fstream>
#include <sstream>

#include "doctest.h"
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

Signature rel_sig() {
  Signature sig;
  sig.add_relation("r", 2);
  sig.add_relation("s", 2);
  sig.add_relation("t", 2);
  sig.add_relation("u", 1);
  sig.add_relation("v", 1);
  sig.add_atom("a");
  sig.add_atom("b");
  return sig;
}

Signature fork_sig() {
  Signature sig(Language::Fork);
  sig.add_fork_constant("r", ForkConstKind::Relation);
  sig.add_fork_constant("s", ForkConstKind::Relation);
  sig.add_fork_constant("p", ForkConstKind::Point);
  sig.add_fork_constant("q", ForkConstKind::Point);
  return sig;
}

ParseError parse_failure(std::string_view text) {
  try {
    parse_spec(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a parse error");
  return ParseError("", {});
}

}  // namespace

TEST_CASE("minimal spec") {
  auto spec = parse_spec("rel r:2; assert A: r in r;");
  REQUIRE(spec.goals.size() == 1);
  CHECK(spec.goals[0].name == "A");
  auto r = RelExpr::constant("r");
  CHECK(spec.goals[0].formula == Formula(RelFormula::subset(r, r)));
  CHECK(spec.signature.language() == Language::Rel);
}

TEST_CASE("undeclared atom is a parse error") {
  const std::string text = "rel r:2; fact F: (a,a) in r;";
  auto err = parse_failure(text);
  CHECK(err.code() == ErrorCode::ParseError);
  CHECK(std::string(err.what()).find("undeclared") != std::string::npos);
  CHECK(std::string(err.what()).find("`a`") != std::string::npos);
  CHECK(err.span().start == text.find("a,a"));
  CHECK(err.span().end <= text.size());
}

TEST_CASE("duplicate names") {
  CHECK(parse_failure("rel r:2; atom r;").code() == ErrorCode::ParseError);
  CHECK(parse_failure("rel r:2; fact F: r in r; fact F: r in r;").code() == ErrorCode::ParseError);
}

TEST_CASE("precedence") {
  const auto sig = rel_sig();
  auto r = RelExpr::constant("r"), s = RelExpr::constant("s"), t = RelExpr::constant("t");
  auto e = parse_rel_expr("r.s + t", sig);
  CHECK(e == RelExpr::union_of(RelExpr::join(r, s), t));
  CHECK(print(RelExpr::union_of(RelExpr::join(r, s), t)) == "r.s + t");
  CHECK(parse_rel_expr("r + s & t", sig) == RelExpr::union_of(r, RelExpr::inter(s, t)));
  CHECK(parse_rel_expr("~r.s", sig) == RelExpr::join(RelExpr::transpose(r), s));
  CHECK(parse_rel_expr("r - s - t", sig) == RelExpr::diff(RelExpr::diff(r, s), t));
  CHECK(print(RelExpr::join(r, RelExpr::join(s, t))) == "r.(s.t)");

  auto f = parse_formula("r in s => s in t => r in t", sig);
  auto in = [](RelExpr a, RelExpr b) { return RelFormula::subset(a, b); };
  CHECK(f == Formula(RelFormula::implies(in(r, s), RelFormula::implies(in(s, t), in(r, t)))));
  auto g = parse_formula("r in s && s in t || r in t", sig);
  CHECK(g == Formula(RelFormula::disj(RelFormula::conj(in(r, s), in(s, t)), in(r, t))));
}

TEST_CASE("univ and none are coerced in binary contexts") {
  const auto sig = rel_sig();
  auto r = RelExpr::constant("r");
  CHECK(parse_rel_expr("r + none", sig) == RelExpr::union_of(r, RelExpr::none(2)));
  CHECK(parse_formula("r in univ", sig) == Formula(RelFormula::subset(r, RelExpr::univ(2))));
  CHECK(parse_rel_expr("u - univ", sig) == RelExpr::diff(RelExpr::constant("u"), RelExpr::univ(1)));
}

TEST_CASE("quantifier round trip") {
  const auto sig = rel_sig();
  const std::string text = "all x | some y | (x, y) in r";
  auto f = parse_formula(text, sig);
  CHECK(print(f) == text);
  CHECK(parse_formula(print(f), sig) == f);
}

TEST_CASE("fork syntax") {
  const auto sig = fork_sig();
  auto r = ForkTerm::constant("r"), s = ForkTerm::constant("s");
  CHECK(parse_fork_term("r;s + r", sig) == ForkTerm::plus(ForkTerm::comp(r, s), r));
  CHECK(parse_fork_term("pi", sig) == ForkTerm::pi());
  CHECK(parse_fork_term("rho", sig) == ForkTerm::rho());
  CHECK(parse_fork_term("*r", sig) == ForkTerm::star(r));
  CHECK(parse_fork_term("p;1;p", sig) ==
        ForkTerm::comp(ForkTerm::comp(ForkTerm::point("p"), ForkTerm::one()), ForkTerm::point("p")));
  auto f = parse_formula("r <= s && !(p = 0)", sig);
  CHECK(f == Formula(ForkFormula::conj(ForkFormula::leq(r, s),
                                       ForkFormula::negation(ForkFormula::eq(ForkTerm::point("p"), ForkTerm::zero())))));
}

TEST_CASE("sequents and substitutions") {
  const auto sig = rel_sig();
  auto seq = parse_sequent("r in s, s in t |- r in t", sig);
  CHECK(seq.antecedents().size() == 2);
  CHECK(seq.consequents().size() == 1);
  CHECK(print(seq) == "r in s, s in t |- r in t");
  CHECK(parse_sequent(print(seq), sig) == seq);
  auto empty = parse_sequent("|-", sig);
  CHECK(empty.antecedents().empty());
  CHECK(empty.consequents().empty());

  const auto fsig = fork_sig();
  auto subst = parse_substitution("x := r, y := s;r", fsig);
  REQUIRE(subst.size() == 2);
  CHECK(subst.at("y") == ForkTerm::comp(ForkTerm::constant("s"), ForkTerm::constant("r")));
  CHECK(parse_substitution(print_substitution(subst), fsig) == subst);
}

TEST_CASE("parse errors carry in-bounds spans") {
  const std::vector<std::string> bad = {
      "rel r:2; assert A: r in ;",  "rel r:2; assert A: r.r.r",   "rel r:3;",
      "rel r:2; assert A: (r in r", "lang FORK; rel r; fact F: r <= ;", "rel r:2; assert A: r @ r;",
      "",                           "rel r:2; assert A: all | r in r;",
  };
  for (const auto& text : bad) {
    try {
      auto spec = parse_spec(text);
      if (text.empty()) continue;
      FAIL("accepted: " << text);
    } catch (const ParseError& e) {
      CHECK(e.span().start <= e.span().end);
      CHECK(e.span().end <= text.size());
      CHECK(e.span().line >= 1);
    }
  }
}

TEST_CASE("corpus round trip") {
  for (const char* file : {"/rel/laws.hg", "/rel/misc.hg", "/rel/bad.hg", "/rel/trans.hg", "/fork/basics.hg"}) {
    CAPTURE(file);
    auto spec = parse_spec(slurp(std::string(HG_CORPUS_DIR) + file));
    const auto printed = print(spec);
    auto again = parse_spec(printed);
    CHECK(again == spec);
    CHECK(print(again) == printed);
  }
}

TEST_CASE("parse(print(x)) == x for generated REL formulas") {
  const auto sig = rel_sig();
  hgtest::Rng rng(2024);
  hgtest::RelGen gen(sig);
  for (int i = 0; i < 2000; ++i) {
    auto f = gen.formula(rng, 5);
    const auto text = print(f);
    CAPTURE(text);
    CHECK(parse_formula(text, sig) == Formula(f));
  }
}

TEST_CASE("parse(print(x)) == x for generated FORK formulas") {
  const auto sig = fork_sig();
  hgtest::Rng rng(99);
  hgtest::ForkGen gen(sig);
  for (int i = 0; i < 2000; ++i) {
    auto f = gen.formula(rng, 4);
    const auto text = print(f);
    CAPTURE(text);
    CHECK(parse_formula(text, sig) == Formula(f));
  }
}

TEST_CASE("script parsing") {
  auto lines = parse_script(
      "# header\n"
      "root rule:and-right j=0\n"
      "\n"
      "3 rule:axiom-inst schema=plus-assoc subst=\"x := r, y := s\"  # trailing\n");
  REQUIRE(lines.size() == 2);
  CHECK(lines[0].node == 0);
  CHECK(lines[0].line == 2);
  CHECK(lines[0].action == "rule:and-right");
  CHECK(lines[1].node == 3);
  CHECK(lines[1].params[1].second == "x := r, y := s");
  CHECK(parse_script(print_script_line(lines[1]))[0].params == lines[1].params);
  CHECK_THROWS_AS(parse_script("x rule:axiom"), ParseError);
  CHECK_THROWS_AS(parse_script("1 rule:cut phi"), ParseError);
}
