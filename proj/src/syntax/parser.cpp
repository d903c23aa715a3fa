#include <cctype>
#include <set>

#include "hg/syntax.hpp"

namespace hg {

namespace {

enum class Tok { Ident, Number, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t start;
  std::size_t end;
};

const char* const kSymbols[] = {"<=>", "|-", "<=", "=>", "->", "&&", "||", ":=", "+", "&", "-", ".", "~",
                                "^",   "*",  "!",  "=",  "(",  ")",  ",",  ";",  ":", "|"};

const std::set<std::string, std::less<>> kStatementWords = {"lang", "rel", "set", "atom", "point", "fact", "assert"};
const std::set<std::string, std::less<>> kRelWords = {"in",   "all",   "some", "no",    "lone", "one",
                                                      "iden", "univ",  "univ2", "none", "none2"};
const std::set<std::string, std::less<>> kForkWords = {"fork", "compl", "id", "pi", "rho"};

bool reserved(std::string_view word) {
  return kStatementWords.contains(word) || kRelWords.contains(word) || kForkWords.contains(word);
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

}  // namespace

SourceSpan make_span(std::string_view text, std::size_t start, std::size_t end) {
  SourceSpan span;
  start = std::min(start, text.size());
  end = std::min(std::max(end, start), text.size());
  span.start = start;
  span.end = end;
  for (std::size_t i = 0; i < start; ++i) {
    if (text[i] == '\n') {
      ++span.line;
      span.column = 1;
    } else {
      ++span.column;
    }
  }
  return span;
}

bool is_plain_identifier(std::string_view text) {
  if (text.empty() || !ident_start(text[0])) return false;
  for (char c : text)
    if (!ident_char(c)) return false;
  return !reserved(text);
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, Signature sig) : text_(text), sig_(std::move(sig)) { lex(); }

  // -- token helpers --------------------------------------------------------

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool at_sym(std::string_view s, std::size_t k = 0) const {
    return peek(k).kind == Tok::Sym && peek(k).text == s;
  }
  bool at_word(std::string_view s, std::size_t k = 0) const {
    return peek(k).kind == Tok::Ident && peek(k).text == s;
  }
  bool at_end() const { return peek().kind == Tok::End; }
  std::size_t save() const { return pos_; }
  void restore(std::size_t p) { pos_ = p; }

  const Token& advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected = {}) const {
    fail_at(peek(), msg, std::move(expected));
  }
  [[noreturn]] void fail_at(const Token& t, const std::string& msg, std::vector<std::string> expected = {}) const {
    fail_span(t.start, t.end, msg, std::move(expected));
  }
  [[noreturn]] void fail_span(std::size_t start, std::size_t end, const std::string& msg,
                              std::vector<std::string> expected = {}) const {
    throw ParseError(msg, make_span(text_, start, end), std::move(expected));
  }

  void expect_sym(std::string_view s) {
    if (!at_sym(s)) fail("expected `" + std::string(s) + "`", {std::string(s)});
    advance();
  }
  void expect_word(std::string_view s) {
    if (!at_word(s)) fail("expected `" + std::string(s) + "`", {std::string(s)});
    advance();
  }
  Token expect_ident(const char* what) {
    if (peek().kind != Tok::Ident) fail(std::string("expected ") + what, {what});
    return advance();
  }
  void expect_end() {
    if (!at_end()) fail("unexpected trailing input", {"end of input"});
  }

  Signature& sig() { return sig_; }

  // -- REL expressions ------------------------------------------------------

  RelExpr rel_expr() { return rel_union(); }

  RelExpr rel_union() {
    RelExpr a = rel_inter();
    while (at_sym("+")) {
      const Token op = advance();
      RelExpr b = rel_inter();
      coerce_pair(a, b);
      a = RelExpr::union_of(a, b);
      check_arity(a, op);
    }
    return a;
  }

  RelExpr rel_inter() {
    RelExpr a = rel_join();
    while (at_sym("&") || at_sym("-")) {
      const Token op = advance();
      RelExpr b = rel_join();
      coerce_pair(a, b);
      a = op.text == "&" ? RelExpr::inter(a, b) : RelExpr::diff(a, b);
      check_arity(a, op);
    }
    return a;
  }

  RelExpr rel_join() {
    RelExpr a = rel_unary();
    while (at_sym(".") || at_sym("->")) {
      const Token op = advance();
      RelExpr b = rel_unary();
      a = op.text == "." ? RelExpr::join(a, b) : RelExpr::product(a, b);
      check_arity(a, op);
    }
    return a;
  }

  RelExpr rel_unary() {
    if (at_sym("~") || at_sym("^") || at_sym("*")) {
      const Token op = advance();
      RelExpr a = rel_unary();
      RelExpr e = op.text == "~" ? RelExpr::transpose(a) : op.text == "^" ? RelExpr::tclosure(a) : RelExpr::rtclosure(a);
      check_arity(e, op);
      return e;
    }
    return rel_primary();
  }

  RelExpr rel_primary() {
    if (at_sym("(")) {
      advance();
      RelExpr e = rel_expr();
      expect_sym(")");
      return e;
    }
    if (peek().kind != Tok::Ident) fail("expected an expression", {"identifier", "("});
    const Token t = advance();
    if (t.text == "iden") return RelExpr::iden();
    if (t.text == "univ") return RelExpr::univ(1);
    if (t.text == "univ2") return RelExpr::univ(2);
    if (t.text == "none") return RelExpr::none(1);
    if (t.text == "none2") return RelExpr::none(2);
    if (reserved(t.text)) fail_at(t, "unexpected keyword `" + t.text + "`", {"expression"});
    return resolve_rel_name(t);
  }

  RelExpr resolve_rel_name(const Token& t) {
    for (auto it = bound_.rbegin(); it != bound_.rend(); ++it)
      if (*it == t.text) return RelExpr::var(t.text);
    if (sig_.is_atom(t.text)) return RelExpr::atom(t.text);
    if (sig_.relation_arity(t.text)) return RelExpr::constant(t.text);
    fail_at(t, "undeclared identifier `" + t.text + "`");
  }

  bool is_atom_term(const Token& t) const {
    if (t.kind != Tok::Ident) return false;
    for (const auto& b : bound_)
      if (b == t.text) return true;
    return sig_.is_atom(t.text);
  }

  AtomTerm atom_term(const Token& t) const {
    for (auto it = bound_.rbegin(); it != bound_.rend(); ++it)
      if (*it == t.text) return AtomTerm::var(t.text);
    return AtomTerm::constant(t.text);
  }

  void coerce(RelExpr& e, int target) const {
    if (target != 2) return;
    if (e.op() == RelOp::Univ1) e = RelExpr::univ(2);
    if (e.op() == RelOp::None1) e = RelExpr::none(2);
  }

  void coerce_pair(RelExpr& a, RelExpr& b) const {
    auto arity_of = [&](const RelExpr& e) -> int {
      try {
        return arity(e, sig_);
      } catch (const Error&) {
        return 0;
      }
    };
    coerce(a, arity_of(b));
    coerce(b, arity_of(a));
  }

  void check_arity(const RelExpr& e, const Token& at) const {
    try {
      arity(e, sig_);
    } catch (const Error& err) {
      fail_at(at, err.what());
    }
  }

  // -- REL formulas ---------------------------------------------------------

  RelFormula rel_formula() { return rel_iff(); }

  RelFormula rel_iff() {
    RelFormula a = rel_implies();
    while (at_sym("<=>")) {
      advance();
      a = RelFormula::iff(a, rel_implies());
    }
    return a;
  }

  RelFormula rel_implies() {
    RelFormula a = rel_or();
    if (at_sym("=>")) {
      advance();
      return RelFormula::implies(a, rel_implies());
    }
    return a;
  }

  RelFormula rel_or() {
    RelFormula a = rel_and();
    while (at_sym("||")) {
      advance();
      a = RelFormula::disj(a, rel_and());
    }
    return a;
  }

  RelFormula rel_and() {
    RelFormula a = rel_unary_formula();
    while (at_sym("&&")) {
      advance();
      a = RelFormula::conj(a, rel_unary_formula());
    }
    return a;
  }

  RelFormula rel_unary_formula() {
    if (at_sym("!")) {
      advance();
      return RelFormula::negation(rel_unary_formula());
    }
    if ((at_word("all") || at_word("some")) && peek(1).kind == Tok::Ident && at_sym("|", 2)) {
      const bool universal = at_word("all");
      advance();
      const Token v = advance();
      if (reserved(v.text)) fail_at(v, "keyword used as variable name");
      if (sig_.declares(v.text)) fail_at(v, "variable `" + v.text + "` shadows a declared name");
      advance();  // |
      bound_.push_back(v.text);
      RelFormula body = rel_formula();
      bound_.pop_back();
      return universal ? RelFormula::forall(v.text, body) : RelFormula::exists(v.text, body);
    }
    if (at_word("all")) {
      advance();
      fail("expected `var |` after `all`", {"identifier"});
    }
    return rel_primary_formula();
  }

  RelFormula rel_primary_formula() {
    for (const char* word : {"some", "no", "lone", "one"}) {
      if (at_word(word)) {
        advance();
        RelExpr e = rel_expr();
        const std::string w = word;
        const RelFormulaOp op = w == "some" ? RelFormulaOp::Some
                                : w == "no" ? RelFormulaOp::No
                                : w == "lone" ? RelFormulaOp::Lone
                                              : RelFormulaOp::One;
        return RelFormula::cardinality(op, e);
      }
    }
    if (at_sym("(")) {
      if (auto m = try_member()) return *m;
      const std::size_t mark = save();
      try {
        return rel_comparison();
      } catch (const ParseError& first) {
        restore(mark);
        try {
          advance();
          RelFormula f = rel_formula();
          expect_sym(")");
          return f;
        } catch (const ParseError& second) {
          if (second.span().start >= first.span().start) throw;
          throw first;
        }
      }
    }
    return rel_comparison();
  }

  std::optional<RelFormula> try_member() {
    // ( t ) in e   |   ( t , u ) in e
    std::vector<AtomTerm> tuple;
    std::size_t k = 1;
    if (!is_atom_term(peek(k))) return std::nullopt;
    tuple.push_back(atom_term(peek(k)));
    ++k;
    if (at_sym(",", k)) {
      if (!is_atom_term(peek(k + 1))) return std::nullopt;
      tuple.push_back(atom_term(peek(k + 1)));
      k += 2;
    }
    if (!at_sym(")", k) || !at_word("in", k + 1)) return std::nullopt;
    const Token start = peek();
    for (std::size_t i = 0; i < k + 2; ++i) advance();
    RelExpr e = rel_expr();
    int a = 0;
    try {
      a = arity(e, sig_);
    } catch (const Error& err) {
      fail_at(start, err.what());
    }
    if (static_cast<std::size_t>(a) != tuple.size())
      fail_span(start.start, peek().start, "tuple size does not match the arity of the expression");
    return RelFormula::member(std::move(tuple), e);
  }

  RelFormula rel_comparison() {
    const Token start = peek();
    RelExpr a = rel_expr();
    if (!at_word("in") && !at_sym("=")) fail("expected `in` or `=`", {"in", "="});
    const bool subset = at_word("in");
    advance();
    RelExpr b = rel_expr();
    coerce_pair(a, b);
    int aa = 0;
    int ab = 0;
    try {
      aa = arity(a, sig_);
      ab = arity(b, sig_);
    } catch (const Error& err) {
      fail_at(start, err.what());
    }
    if (aa != ab) fail_span(start.start, peek().start, "comparison of expressions with different arities");
    return subset ? RelFormula::subset(a, b) : RelFormula::eq(a, b);
  }

  // -- FORK terms -----------------------------------------------------------

  ForkTerm fork_term() { return fork_plus(); }

  ForkTerm fork_plus() {
    ForkTerm a = fork_dot();
    while (at_sym("+")) {
      advance();
      a = ForkTerm::plus(a, fork_dot());
    }
    return a;
  }

  ForkTerm fork_dot() {
    ForkTerm a = fork_comp();
    while (at_sym(".")) {
      advance();
      a = ForkTerm::dot(a, fork_comp());
    }
    return a;
  }

  bool starts_fork_term(std::size_t k) const {
    const Token& t = peek(k);
    if (t.kind == Tok::Number) return true;
    if (t.kind == Tok::Sym) return t.text == "(" || t.text == "~" || t.text == "*";
    if (t.kind == Tok::Ident) return !kStatementWords.contains(t.text);
    return false;
  }

  ForkTerm fork_comp() {
    ForkTerm a = fork_unary();
    // `;` also terminates statements, so it only continues a term when the
    // next token can start one
    while (at_sym(";") && starts_fork_term(1)) {
      advance();
      a = ForkTerm::comp(a, fork_unary());
    }
    return a;
  }

  ForkTerm fork_unary() {
    if (at_sym("~")) {
      advance();
      return ForkTerm::conv(fork_unary());
    }
    if (at_sym("*")) {
      advance();
      return ForkTerm::star(fork_unary());
    }
    return fork_primary();
  }

  ForkTerm fork_primary() {
    if (at_sym("(")) {
      advance();
      ForkTerm t = fork_term();
      expect_sym(")");
      return t;
    }
    if (peek().kind == Tok::Number) {
      const Token t = advance();
      if (t.text == "0") return ForkTerm::zero();
      if (t.text == "1") return ForkTerm::one();
      fail_at(t, "only 0 and 1 are numeric constants", {"0", "1"});
    }
    if (peek().kind != Tok::Ident) fail("expected a term", {"identifier", "(", "0", "1"});
    const Token t = advance();
    if (t.text == "id") return ForkTerm::ident();
    if (t.text == "pi") return ForkTerm::pi();
    if (t.text == "rho") return ForkTerm::rho();
    if (t.text == "fork") {
      expect_sym("(");
      ForkTerm a = fork_term();
      expect_sym(",");
      ForkTerm b = fork_term();
      expect_sym(")");
      return ForkTerm::fork(a, b);
    }
    if (t.text == "compl") {
      expect_sym("(");
      ForkTerm a = fork_term();
      expect_sym(")");
      return ForkTerm::compl_of(a);
    }
    if (reserved(t.text)) fail_at(t, "unexpected keyword `" + t.text + "`", {"term"});
    auto kind = sig_.fork_kind(t.text);
    if (!kind) fail_at(t, "undeclared identifier `" + t.text + "`");
    return *kind == ForkConstKind::Point ? ForkTerm::point(t.text) : ForkTerm::constant(t.text);
  }

  // -- FORK formulas --------------------------------------------------------

  ForkFormula fork_formula() { return fork_iff(); }

  ForkFormula fork_iff() {
    ForkFormula a = fork_implies();
    while (at_sym("<=>")) {
      advance();
      a = ForkFormula::iff(a, fork_implies());
    }
    return a;
  }

  ForkFormula fork_implies() {
    ForkFormula a = fork_or();
    if (at_sym("=>")) {
      advance();
      return ForkFormula::implies(a, fork_implies());
    }
    return a;
  }

  ForkFormula fork_or() {
    ForkFormula a = fork_and();
    while (at_sym("||")) {
      advance();
      a = ForkFormula::disj(a, fork_and());
    }
    return a;
  }

  ForkFormula fork_and() {
    ForkFormula a = fork_unary_formula();
    while (at_sym("&&")) {
      advance();
      a = ForkFormula::conj(a, fork_unary_formula());
    }
    return a;
  }

  ForkFormula fork_unary_formula() {
    if (at_sym("!")) {
      advance();
      return ForkFormula::negation(fork_unary_formula());
    }
    if (at_sym("(")) {
      const std::size_t mark = save();
      try {
        return fork_comparison();
      } catch (const ParseError& first) {
        restore(mark);
        try {
          advance();
          ForkFormula f = fork_formula();
          expect_sym(")");
          return f;
        } catch (const ParseError& second) {
          if (second.span().start >= first.span().start) throw;
          throw first;
        }
      }
    }
    return fork_comparison();
  }

  ForkFormula fork_comparison() {
    ForkTerm a = fork_term();
    if (!at_sym("=") && !at_sym("<=")) fail("expected `=` or `<=`", {"=", "<="});
    const bool eq = at_sym("=");
    advance();
    ForkTerm b = fork_term();
    return eq ? ForkFormula::eq(a, b) : ForkFormula::leq(a, b);
  }

  // -- generic --------------------------------------------------------------

  Formula formula() {
    if (sig_.language() == Language::Rel) return rel_formula();
    return fork_formula();
  }

  Spec spec() {
    Language lang = Language::Rel;
    if (at_word("lang")) {
      advance();
      const Token t = expect_ident("language name");
      auto l = parse_language(t.text);
      if (!l) fail_at(t, "unknown language `" + t.text + "`", {"REL", "FORK"});
      lang = *l;
      expect_sym(";");
    }
    sig_ = Signature(lang);
    Spec out;
    std::set<std::string> formula_names;
    while (!at_end()) {
      const Token kw = expect_ident("declaration");
      if (kw.text == "rel" || kw.text == "set" || kw.text == "atom" || kw.text == "point") {
        std::vector<Token> names;
        names.push_back(expect_ident("name"));
        while (at_sym(",")) {
          advance();
          names.push_back(expect_ident("name"));
        }
        int ar = kw.text == "set" ? 1 : 2;
        if (kw.text == "rel" && at_sym(":")) {
          advance();
          if (peek().kind != Tok::Number || (peek().text != "1" && peek().text != "2"))
            fail("arity must be 1 or 2", {"1", "2"});
          ar = advance().text == "1" ? 1 : 2;
        }
        expect_sym(";");
        for (const auto& n : names) declare(kw, n, ar);
      } else if (kw.text == "fact" || kw.text == "assert") {
        const Token name = expect_ident("formula name");
        if (!formula_names.insert(name.text).second)
          fail_at(name, "duplicate name `" + name.text + "`");
        expect_sym(":");
        Formula f = formula();
        expect_sym(";");
        (kw.text == "fact" ? out.axioms : out.goals).push_back({name.text, f});
      } else {
        fail_at(kw, "expected a declaration", {"rel", "set", "atom", "point", "fact", "assert"});
      }
    }
    out.signature = sig_;
    return out;
  }

  void declare(const Token& kw, const Token& name, int ar) {
    if (reserved(name.text)) fail_at(name, "keyword `" + name.text + "` used as a name");
    try {
      if (sig_.language() == Language::Rel) {
        if (kw.text == "point") fail_at(kw, "`point` declarations belong to FORK");
        if (kw.text == "atom")
          sig_.add_atom(name.text);
        else
          sig_.add_relation(name.text, ar);
      } else {
        if (kw.text == "set" || kw.text == "atom") fail_at(kw, "`" + kw.text + "` declarations belong to REL");
        if (kw.text == "rel" && ar != 2) fail_at(kw, "FORK constants are binary");
        sig_.add_fork_constant(name.text, kw.text == "point" ? ForkConstKind::Point : ForkConstKind::Relation);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      fail_at(name, e.code() == ErrorCode::DuplicateName ? "duplicate name `" + name.text + "`" : e.what());
    }
  }

  Sequent sequent() {
    std::vector<Formula> ante;
    std::vector<Formula> cons;
    if (!at_sym("|-")) {
      ante.push_back(formula());
      while (at_sym(",")) {
        advance();
        ante.push_back(formula());
      }
    }
    expect_sym("|-");
    if (!at_end()) {
      cons.push_back(formula());
      while (at_sym(",")) {
        advance();
        cons.push_back(formula());
      }
    }
    return Sequent(sig_.language(), std::move(ante), std::move(cons));
  }

  std::map<std::string, ForkTerm> substitution() {
    std::map<std::string, ForkTerm> out;
    while (!at_end()) {
      const Token v = expect_ident("metavariable");
      expect_sym(":=");
      if (out.contains(v.text)) fail_at(v, "metavariable bound twice");
      out.emplace(v.text, fork_term());
      if (at_end()) break;
      expect_sym(",");
    }
    return out;
  }

 private:
  void lex() {
    std::size_t i = 0;
    while (i < text_.size()) {
      const char c = text_[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      if (c == '/' && i + 1 < text_.size() && text_[i + 1] == '/') {
        while (i < text_.size() && text_[i] != '\n') ++i;
        continue;
      }
      if (c == '/' && i + 1 < text_.size() && text_[i + 1] == '*') {
        const std::size_t close = text_.find("*/", i + 2);
        if (close == std::string_view::npos) fail_span(i, text_.size(), "unterminated comment", {"*/"});
        i = close + 2;
        continue;
      }
      if (ident_start(c)) {
        std::size_t j = i + 1;
        while (j < text_.size() && ident_char(text_[j])) ++j;
        toks_.push_back({Tok::Ident, std::string(text_.substr(i, j - i)), i, j});
        i = j;
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i + 1;
        while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
        toks_.push_back({Tok::Number, std::string(text_.substr(i, j - i)), i, j});
        i = j;
        continue;
      }
      bool matched = false;
      for (const char* sym : kSymbols) {
        const std::string_view s(sym);
        if (text_.substr(i, s.size()) == s) {
          toks_.push_back({Tok::Sym, std::string(s), i, i + s.size()});
          i += s.size();
          matched = true;
          break;
        }
      }
      if (!matched) fail_span(i, i + 1, std::string("unexpected character `") + c + "`");
    }
    toks_.push_back({Tok::End, "", text_.size(), text_.size()});
  }

  std::string_view text_;
  Signature sig_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string> bound_;
};

}  // namespace

Spec parse_spec(std::string_view text) {
  Parser p(text, Signature(Language::Rel));
  return p.spec();
}

Formula parse_formula(std::string_view text, const Signature& sig) {
  Parser p(text, sig);
  Formula f = p.formula();
  p.expect_end();
  return f;
}

RelExpr parse_rel_expr(std::string_view text, const Signature& sig) {
  if (sig.language() != Language::Rel) throw Error(ErrorCode::IllFormed, "REL expression over a FORK signature");
  Parser p(text, sig);
  RelExpr e = p.rel_expr();
  p.expect_end();
  return e;
}

ForkTerm parse_fork_term(std::string_view text, const Signature& sig) {
  if (sig.language() != Language::Fork) throw Error(ErrorCode::IllFormed, "FORK term over a REL signature");
  Parser p(text, sig);
  ForkTerm t = p.fork_term();
  p.expect_end();
  return t;
}

Sequent parse_sequent(std::string_view text, const Signature& sig) {
  Parser p(text, sig);
  Sequent s = p.sequent();
  p.expect_end();
  return s;
}

std::map<std::string, ForkTerm> parse_substitution(std::string_view text, const Signature& sig) {
  if (sig.language() != Language::Fork) throw Error(ErrorCode::IllFormed, "substitutions bind FORK terms");
  Parser p(text, sig);
  return p.substitution();
}

}  // namespace hg
