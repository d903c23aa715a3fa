#pragma once

// Reference semantics for REL and the FORK reduct, written directly from the
// set-theoretic definitions. Deliberately slow and independent of the
// bitmask evaluator in the library.

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hg/logic.hpp"

namespace hgtest {

using Pair = std::pair<int, int>;

// A value of arity 1 is stored as the diagonal {(x,x)}; `arity` tells them apart.
struct RelValue {
  int arity = 2;
  std::set<Pair> pairs;
  bool operator==(const RelValue&) const = default;
};

struct NaiveModel {
  int n = 1;
  std::map<std::string, RelValue> rels;
  std::map<std::string, int> atoms;
};

inline std::set<Pair> naive_compose(const std::set<Pair>& a, const std::set<Pair>& b) {
  std::set<Pair> out;
  for (auto [x, y] : a)
    for (auto [y2, z] : b)
      if (y == y2) out.insert({x, z});
  return out;
}

inline std::set<Pair> naive_tclosure(std::set<Pair> a) {
  while (true) {
    auto next = a;
    for (auto p : naive_compose(a, a)) next.insert(p);
    if (next == a) return a;
    a = std::move(next);
  }
}

inline std::set<Pair> naive_diag(int n) {
  std::set<Pair> out;
  for (int i = 0; i < n; ++i) out.insert({i, i});
  return out;
}

inline std::set<Pair> naive_full(int n) {
  std::set<Pair> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.insert({i, j});
  return out;
}

class NaiveRel {
 public:
  explicit NaiveRel(const NaiveModel& m) : m_(m) {}

  // unary values come back as sets of (x, x)
  RelValue eval(const hg::RelExpr& e) {
    using hg::RelOp;
    switch (e.op()) {
      case RelOp::Const: return m_.rels.at(e.name());
      case RelOp::AtomConst: return unit(m_.atoms.at(e.name()));
      case RelOp::Var: return unit(env_.at(e.name()));
      case RelOp::Iden: return {2, naive_diag(m_.n)};
      case RelOp::Univ1: return {1, naive_diag(m_.n)};
      case RelOp::Univ2: return {2, naive_full(m_.n)};
      case RelOp::None1: return {1, {}};
      case RelOp::None2: return {2, {}};
      case RelOp::Union: {
        auto a = eval(e.lhs()), b = eval(e.rhs());
        a.pairs.insert(b.pairs.begin(), b.pairs.end());
        return a;
      }
      case RelOp::Inter: {
        auto a = eval(e.lhs()), b = eval(e.rhs());
        RelValue out{a.arity, {}};
        for (auto p : a.pairs)
          if (b.pairs.contains(p)) out.pairs.insert(p);
        return out;
      }
      case RelOp::Diff: {
        auto a = eval(e.lhs()), b = eval(e.rhs());
        RelValue out{a.arity, {}};
        for (auto p : a.pairs)
          if (!b.pairs.contains(p)) out.pairs.insert(p);
        return out;
      }
      case RelOp::Join: {
        auto a = eval(e.lhs()), b = eval(e.rhs());
        if (a.arity == 1 && b.arity == 1) throw std::logic_error("join of sets");
        if (a.arity == 2 && b.arity == 2) return {2, naive_compose(a.pairs, b.pairs)};
        RelValue out{1, {}};
        if (a.arity == 1) {
          for (auto [x, x2] : a.pairs)
            for (auto [y, z] : b.pairs)
              if (x == y) out.pairs.insert({z, z});
        } else {
          for (auto [x, y] : a.pairs)
            if (b.pairs.contains({y, y})) out.pairs.insert({x, x});
        }
        return out;
      }
      case RelOp::Product: {
        auto a = eval(e.lhs()), b = eval(e.rhs());
        RelValue out{2, {}};
        for (auto [x, x2] : a.pairs)
          for (auto [y, y2] : b.pairs) out.pairs.insert({x, y});
        return out;
      }
      case RelOp::Transpose: {
        RelValue out{2, {}};
        for (auto [x, y] : eval(e.arg(0)).pairs) out.pairs.insert({y, x});
        return out;
      }
      case RelOp::TClosure: return {2, naive_tclosure(eval(e.arg(0)).pairs)};
      case RelOp::RTClosure: {
        auto c = naive_tclosure(eval(e.arg(0)).pairs);
        for (auto p : naive_diag(m_.n)) c.insert(p);
        return {2, c};
      }
    }
    throw std::logic_error("unreachable");
  }

  bool holds(const hg::RelFormula& f) {
    using hg::RelFormulaOp;
    switch (f.op()) {
      case RelFormulaOp::Subset: {
        auto a = eval(f.expr(0)), b = eval(f.expr(1));
        for (auto p : a.pairs)
          if (!b.pairs.contains(p)) return false;
        return true;
      }
      case RelFormulaOp::Eq: return eval(f.expr(0)).pairs == eval(f.expr(1)).pairs;
      case RelFormulaOp::Member: {
        auto v = eval(f.expr(0));
        const int x = term(f.tuple()[0]);
        const int y = f.tuple().size() == 2 ? term(f.tuple()[1]) : x;
        return v.pairs.contains({x, y});
      }
      case RelFormulaOp::Some: return !eval(f.expr(0)).pairs.empty();
      case RelFormulaOp::No: return eval(f.expr(0)).pairs.empty();
      case RelFormulaOp::Lone: return eval(f.expr(0)).pairs.size() <= 1;
      case RelFormulaOp::One: return eval(f.expr(0)).pairs.size() == 1;
      case RelFormulaOp::Not: return !holds(f.arg(0));
      case RelFormulaOp::And: return holds(f.arg(0)) && holds(f.arg(1));
      case RelFormulaOp::Or: return holds(f.arg(0)) || holds(f.arg(1));
      case RelFormulaOp::Implies: return !holds(f.arg(0)) || holds(f.arg(1));
      case RelFormulaOp::Iff: return holds(f.arg(0)) == holds(f.arg(1));
      case RelFormulaOp::Forall:
      case RelFormulaOp::Exists: {
        const bool all = f.op() == RelFormulaOp::Forall;
        auto saved = env_.find(f.bound_var()) == env_.end() ? std::optional<int>{} : env_.at(f.bound_var());
        bool result = all;
        for (int v = 0; v < m_.n; ++v) {
          env_[f.bound_var()] = v;
          if (holds(f.body()) != all) {
            result = !all;
            break;
          }
        }
        if (saved)
          env_[f.bound_var()] = *saved;
        else
          env_.erase(f.bound_var());
        return result;
      }
    }
    throw std::logic_error("unreachable");
  }

 private:
  RelValue unit(int x) { return {1, {{x, x}}}; }
  int term(const hg::AtomTerm& t) {
    return t.kind == hg::AtomTerm::Kind::Const ? m_.atoms.at(t.name) : env_.at(t.name);
  }

  const NaiveModel& m_;
  std::map<std::string, int> env_;
};

inline bool naive_holds(const hg::RelFormula& f, const NaiveModel& m) { return NaiveRel(m).holds(f); }

// FORK reduct: unary sets s' denote the diagonal of s, points p_a the pair (a, a).
inline std::set<Pair> naive_fork(const hg::ForkTerm& t, const NaiveModel& m,
                                 const std::map<std::string, std::set<Pair>>& consts) {
  using hg::ForkOp;
  switch (t.op()) {
    case ForkOp::Const:
    case ForkOp::Point: return consts.at(t.name());
    case ForkOp::Zero: return {};
    case ForkOp::One: return naive_full(m.n);
    case ForkOp::Ident: return naive_diag(m.n);
    case ForkOp::Plus: {
      auto a = naive_fork(t.lhs(), m, consts), b = naive_fork(t.rhs(), m, consts);
      a.insert(b.begin(), b.end());
      return a;
    }
    case ForkOp::Dot: {
      auto a = naive_fork(t.lhs(), m, consts), b = naive_fork(t.rhs(), m, consts);
      std::set<Pair> out;
      for (auto p : a)
        if (b.contains(p)) out.insert(p);
      return out;
    }
    case ForkOp::Compl: {
      auto a = naive_fork(t.arg(0), m, consts);
      std::set<Pair> out;
      for (auto p : naive_full(m.n))
        if (!a.contains(p)) out.insert(p);
      return out;
    }
    case ForkOp::Comp: return naive_compose(naive_fork(t.lhs(), m, consts), naive_fork(t.rhs(), m, consts));
    case ForkOp::Conv: {
      std::set<Pair> out;
      for (auto [x, y] : naive_fork(t.arg(0), m, consts)) out.insert({y, x});
      return out;
    }
    case ForkOp::Star: {
      auto c = naive_tclosure(naive_fork(t.arg(0), m, consts));
      for (auto p : naive_diag(m.n)) c.insert(p);
      return c;
    }
    case ForkOp::Fork: throw std::logic_error("fork has no finite reduct semantics");
  }
  throw std::logic_error("unreachable");
}

inline bool naive_fork_holds(const hg::ForkFormula& f, const NaiveModel& m,
                             const std::map<std::string, std::set<Pair>>& consts) {
  using hg::ForkFormulaOp;
  switch (f.op()) {
    case ForkFormulaOp::Eq: return naive_fork(f.lhs(), m, consts) == naive_fork(f.rhs(), m, consts);
    case ForkFormulaOp::Leq: {
      auto a = naive_fork(f.lhs(), m, consts), b = naive_fork(f.rhs(), m, consts);
      for (auto p : a)
        if (!b.contains(p)) return false;
      return true;
    }
    case ForkFormulaOp::Not: return !naive_fork_holds(f.arg(0), m, consts);
    case ForkFormulaOp::And: return naive_fork_holds(f.arg(0), m, consts) && naive_fork_holds(f.arg(1), m, consts);
    case ForkFormulaOp::Or: return naive_fork_holds(f.arg(0), m, consts) || naive_fork_holds(f.arg(1), m, consts);
    case ForkFormulaOp::Implies:
      return !naive_fork_holds(f.arg(0), m, consts) || naive_fork_holds(f.arg(1), m, consts);
    case ForkFormulaOp::Iff: return naive_fork_holds(f.arg(0), m, consts) == naive_fork_holds(f.arg(1), m, consts);
  }
  throw std::logic_error("unreachable");
}

// Every model over binary relations `names` with universe size n, as a plain
// nested loop over subsets of n x n.
template <class Fn>
void naive_models(const std::vector<std::string>& names, int n, Fn&& fn) {
  const int cells = n * n;
  const long total_per = 1L << cells;
  std::vector<long> code(names.size(), 0);
  while (true) {
    NaiveModel m;
    m.n = n;
    for (std::size_t k = 0; k < names.size(); ++k) {
      RelValue v{2, {}};
      for (int c = 0; c < cells; ++c)
        if (code[k] >> c & 1) v.pairs.insert({c / n, c % n});
      m.rels[names[k]] = v;
    }
    fn(m);
    std::size_t k = names.size();
    while (k > 0) {
      --k;
      if (++code[k] < total_per) break;
      code[k] = 0;
      if (k == 0) return;
    }
    if (names.empty()) return;
  }
}

}  // namespace hgtest
