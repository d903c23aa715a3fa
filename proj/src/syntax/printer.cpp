#include <cctype>
#include <sstream>

#include "hg/syntax.hpp"

namespace hg {

namespace {

// Binding strength of REL expression operators (higher binds tighter).
int rel_level(const RelExpr& e) {
  switch (e.op()) {
    case RelOp::Union: return 1;
    case RelOp::Inter:
    case RelOp::Diff: return 2;
    case RelOp::Join:
    case RelOp::Product: return 3;
    case RelOp::Transpose:
    case RelOp::TClosure:
    case RelOp::RTClosure: return 4;
    default: return 5;
  }
}

void print_rel(std::ostream& os, const RelExpr& e, int min_level) {
  const int level = rel_level(e);
  const bool parens = level < min_level;
  if (parens) os << '(';
  switch (e.op()) {
    case RelOp::Const:
    case RelOp::AtomConst:
    case RelOp::Var: os << e.name(); break;
    case RelOp::Iden: os << "iden"; break;
    case RelOp::Univ1: os << "univ"; break;
    case RelOp::Univ2: os << "univ2"; break;
    case RelOp::None1: os << "none"; break;
    case RelOp::None2: os << "none2"; break;
    case RelOp::Transpose:
    case RelOp::TClosure:
    case RelOp::RTClosure:
      os << (e.op() == RelOp::Transpose ? "~" : e.op() == RelOp::TClosure ? "^" : "*");
      print_rel(os, e.arg(0), 4);
      break;
    default: {
      const char* sym = e.op() == RelOp::Union   ? " + "
                        : e.op() == RelOp::Inter ? " & "
                        : e.op() == RelOp::Diff  ? " - "
                        : e.op() == RelOp::Join  ? "."
                                                 : "->";
      print_rel(os, e.lhs(), level);
      os << sym;
      print_rel(os, e.rhs(), level + 1);
    }
  }
  if (parens) os << ')';
}

int fork_level(const ForkTerm& t) {
  switch (t.op()) {
    case ForkOp::Plus: return 1;
    case ForkOp::Dot: return 2;
    case ForkOp::Comp: return 3;
    case ForkOp::Conv:
    case ForkOp::Star: return 4;
    default: return 5;
  }
}

void print_fork(std::ostream& os, const ForkTerm& t, int min_level) {
  const int level = fork_level(t);
  const bool parens = level < min_level;
  if (parens) os << '(';
  switch (t.op()) {
    case ForkOp::Const:
    case ForkOp::Point: os << t.name(); break;
    case ForkOp::Zero: os << '0'; break;
    case ForkOp::One: os << '1'; break;
    case ForkOp::Ident: os << "id"; break;
    case ForkOp::Compl:
      os << "compl(";
      print_fork(os, t.arg(0), 0);
      os << ')';
      break;
    case ForkOp::Fork:
      os << "fork(";
      print_fork(os, t.lhs(), 0);
      os << ", ";
      print_fork(os, t.rhs(), 0);
      os << ')';
      break;
    case ForkOp::Conv:
    case ForkOp::Star:
      os << (t.op() == ForkOp::Conv ? "~" : "*");
      print_fork(os, t.arg(0), 4);
      break;
    default: {
      const char* sym = t.op() == ForkOp::Plus ? " + " : t.op() == ForkOp::Dot ? " . " : " ; ";
      print_fork(os, t.lhs(), level);
      os << sym;
      print_fork(os, t.rhs(), level + 1);
    }
  }
  if (parens) os << ')';
}

// Formula levels: quantifier 0, <=> 1, => 2, || 3, && 4, ! 5, atomic 6.
int connective_level(Connective c) {
  switch (c) {
    case Connective::Forall:
    case Connective::Exists: return 0;
    case Connective::Iff: return 1;
    case Connective::Implies: return 2;
    case Connective::Or: return 3;
    case Connective::And: return 4;
    case Connective::Not: return 5;
    case Connective::Atomic: return 6;
  }
  return 6;
}

void print_atomic(std::ostream& os, const RelFormula& f) {
  switch (f.op()) {
    case RelFormulaOp::Subset:
    case RelFormulaOp::Eq:
      print_rel(os, f.expr(0), 0);
      os << (f.op() == RelFormulaOp::Subset ? " in " : " = ");
      print_rel(os, f.expr(1), 0);
      return;
    case RelFormulaOp::Member:
      os << '(';
      for (std::size_t i = 0; i < f.tuple().size(); ++i) os << (i ? ", " : "") << f.tuple()[i].name;
      os << ") in ";
      print_rel(os, f.expr(0), 0);
      return;
    default:
      os << (f.op() == RelFormulaOp::Some   ? "some "
             : f.op() == RelFormulaOp::No   ? "no "
             : f.op() == RelFormulaOp::Lone ? "lone "
                                            : "one ");
      print_rel(os, f.expr(0), 0);
  }
}

void print_atomic(std::ostream& os, const ForkFormula& f) {
  print_fork(os, f.lhs(), 0);
  os << (f.op() == ForkFormulaOp::Eq ? " = " : " <= ");
  print_fork(os, f.rhs(), 0);
}

void print_formula(std::ostream& os, const Formula& f, int min_level) {
  const Connective c = f.connective();
  const int level = connective_level(c);
  const bool parens = level < min_level;
  if (parens) os << '(';
  switch (c) {
    case Connective::Atomic:
      if (f.is_rel())
        print_atomic(os, f.rel());
      else
        print_atomic(os, f.fork());
      break;
    case Connective::Forall:
    case Connective::Exists:
      os << (c == Connective::Forall ? "all " : "some ") << f.rel().bound_var() << " | ";
      print_formula(os, f.rel().body(), 0);
      break;
    case Connective::Not:
      os << '!';
      print_formula(os, f.child(0), 5);
      break;
    default: {
      const char* sym = c == Connective::And ? " && " : c == Connective::Or ? " || " : c == Connective::Implies ? " => " : " <=> ";
      // => associates to the right, the others to the left
      const bool right_assoc = c == Connective::Implies;
      print_formula(os, f.child(0), right_assoc ? level + 1 : level);
      os << sym;
      print_formula(os, f.child(1), right_assoc ? level : level + 1);
    }
  }
  if (parens) os << ')';
}

bool needs_quotes(const std::string& v) {
  if (v.empty()) return true;
  for (char c : v)
    if (std::isspace(static_cast<unsigned char>(c)) || c == '"' || c == '#' || c == '\\') return true;
  return false;
}

std::string quote(const std::string& v) {
  std::string out = "\"";
  for (char c : v) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string print(const RelExpr& e) {
  std::ostringstream os;
  print_rel(os, e, 0);
  return os.str();
}

std::string print(const ForkTerm& t) {
  std::ostringstream os;
  print_fork(os, t, 0);
  return os.str();
}

std::string print(const Formula& f) {
  std::ostringstream os;
  print_formula(os, f, 0);
  return os.str();
}

std::string print(const RelFormula& f) { return print(Formula(f)); }
std::string print(const ForkFormula& f) { return print(Formula(f)); }

std::string print(const Sequent& s) {
  std::ostringstream os;
  for (std::size_t i = 0; i < s.antecedents().size(); ++i) os << (i ? ", " : "") << print(s.antecedents()[i]);
  os << (s.antecedents().empty() ? "|-" : " |-");
  for (std::size_t i = 0; i < s.consequents().size(); ++i) os << (i ? ", " : " ") << print(s.consequents()[i]);
  return os.str();
}

std::string print(const Signature& sig) {
  std::ostringstream os;
  os << "lang " << to_string(sig.language()) << ";\n";
  for (const auto& r : sig.relations()) {
    if (r.arity == 1)
      os << "set " << r.name << ";\n";
    else
      os << "rel " << r.name << " : 2;\n";
  }
  for (const auto& a : sig.atoms()) os << "atom " << a << ";\n";
  for (const auto& c : sig.fork_constants())
    os << (c.kind == ForkConstKind::Point ? "point " : "rel ") << c.name << ";\n";
  return os.str();
}

std::string print(const Spec& spec) {
  std::ostringstream os;
  os << print(spec.signature);
  for (const auto& a : spec.axioms) os << "fact " << a.name << ": " << print(a.formula) << ";\n";
  for (const auto& g : spec.goals) os << "assert " << g.name << ": " << print(g.formula) << ";\n";
  return os.str();
}

std::string print_substitution(const std::map<std::string, ForkTerm>& subst) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [name, term] : subst) {
    os << (first ? "" : ", ") << name << " := " << print(term);
    first = false;
  }
  return os.str();
}

std::vector<ScriptLine> parse_script(std::string_view text) {
  std::vector<ScriptLine> out;
  std::size_t offset = 0;
  int line_no = 0;
  while (offset <= text.size()) {
    std::size_t eol = text.find('\n', offset);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(offset, eol - offset);
    ++line_no;
    auto fail = [&](std::size_t col, const std::string& msg) {
      throw ParseError("script line " + std::to_string(line_no) + ": " + msg,
                       make_span(text, offset + col, offset + col + 1));
    };

    // split into words, honouring double quotes and `#` comments
    std::vector<std::pair<std::string, std::size_t>> words;
    std::size_t i = 0;
    while (i < line.size()) {
      if (std::isspace(static_cast<unsigned char>(line[i]))) {
        ++i;
        continue;
      }
      if (line[i] == '#') break;
      const std::size_t start = i;
      std::string word;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) {
        if (line[i] == '"') {
          ++i;
          bool closed = false;
          while (i < line.size()) {
            if (line[i] == '\\' && i + 1 < line.size()) {
              const char n = line[i + 1];
              word += n == 'n' ? '\n' : n;
              i += 2;
              continue;
            }
            if (line[i] == '"') {
              closed = true;
              ++i;
              break;
            }
            word += line[i++];
          }
          if (!closed) fail(start, "unterminated string");
          continue;
        }
        if (line[i] == '#') break;
        word += line[i++];
      }
      words.emplace_back(std::move(word), start);
      if (i < line.size() && line[i] == '#') break;
    }

    if (!words.empty()) {
      if (words.size() < 2) fail(words[0].second, "expected `node-ref action-id`");
      ScriptLine sl;
      sl.line = line_no;
      const std::string& ref = words[0].first;
      if (ref == "root") {
        sl.node = 0;
      } else {
        if (ref.empty() || ref.find_first_not_of("0123456789") != std::string::npos)
          fail(words[0].second, "node reference must be a number or `root`");
        sl.node = std::stoul(ref);
      }
      sl.action = words[1].first;
      for (std::size_t w = 2; w < words.size(); ++w) {
        const auto eq = words[w].first.find('=');
        if (eq == std::string::npos || eq == 0) fail(words[w].second, "expected key=value");
        sl.params.emplace_back(words[w].first.substr(0, eq), words[w].first.substr(eq + 1));
      }
      out.push_back(std::move(sl));
    }
    offset = eol + 1;
  }
  return out;
}

std::string print_script_line(const ScriptLine& line) {
  std::string out = std::to_string(line.node) + " " + line.action;
  for (const auto& [k, v] : line.params) out += " " + k + "=" + (needs_quotes(v) ? quote(v) : v);
  return out;
}

}  // namespace hg
