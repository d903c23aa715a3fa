#include <algorithm>
#include <functional>

#include "hg/kernel.hpp"

namespace hg {

namespace {

using T = ForkTerm;
using F = ForkFormula;
using Subst = std::map<std::string, ForkTerm>;

struct Schema {
  std::string id;
  std::vector<std::string> vars;
  std::function<F(const Subst&)> build;
};

const std::vector<Schema>& catalog() {
  static const std::vector<Schema> schemas = [] {
    std::vector<Schema> s;
    auto xyz = std::vector<std::string>{"x", "y", "z"};
    auto xy = std::vector<std::string>{"x", "y"};
    auto x1 = std::vector<std::string>{"x"};
    auto X = [](const Subst& m) { return m.at("x"); };
    auto Y = [](const Subst& m) { return m.at("y"); };
    auto Z = [](const Subst& m) { return m.at("z"); };

    // Boolean algebra
    s.push_back({"plus-comm", xy, [=](const Subst& m) { return F::eq(T::plus(X(m), Y(m)), T::plus(Y(m), X(m))); }});
    s.push_back({"plus-assoc", xyz, [=](const Subst& m) {
                   return F::eq(T::plus(X(m), T::plus(Y(m), Z(m))), T::plus(T::plus(X(m), Y(m)), Z(m)));
                 }});
    s.push_back({"dot-comm", xy, [=](const Subst& m) { return F::eq(T::dot(X(m), Y(m)), T::dot(Y(m), X(m))); }});
    s.push_back({"dot-assoc", xyz, [=](const Subst& m) {
                   return F::eq(T::dot(X(m), T::dot(Y(m), Z(m))), T::dot(T::dot(X(m), Y(m)), Z(m)));
                 }});
    s.push_back({"plus-absorb", xy, [=](const Subst& m) { return F::eq(T::plus(X(m), T::dot(X(m), Y(m))), X(m)); }});
    s.push_back({"dot-absorb", xy, [=](const Subst& m) { return F::eq(T::dot(X(m), T::plus(X(m), Y(m))), X(m)); }});
    s.push_back({"plus-dist", xyz, [=](const Subst& m) {
                   return F::eq(T::plus(X(m), T::dot(Y(m), Z(m))), T::dot(T::plus(X(m), Y(m)), T::plus(X(m), Z(m))));
                 }});
    s.push_back({"dot-dist", xyz, [=](const Subst& m) {
                   return F::eq(T::dot(X(m), T::plus(Y(m), Z(m))), T::plus(T::dot(X(m), Y(m)), T::dot(X(m), Z(m))));
                 }});
    s.push_back({"compl-plus", x1, [=](const Subst& m) { return F::eq(T::plus(X(m), T::compl_of(X(m))), T::one()); }});
    s.push_back({"compl-dot", x1, [=](const Subst& m) { return F::eq(T::dot(X(m), T::compl_of(X(m))), T::zero()); }});
    s.push_back({"plus-zero", x1, [=](const Subst& m) { return F::eq(T::plus(X(m), T::zero()), X(m)); }});
    s.push_back({"dot-one", x1, [=](const Subst& m) { return F::eq(T::dot(X(m), T::one()), X(m)); }});

    // relation algebra
    s.push_back({"comp-assoc", xyz, [=](const Subst& m) {
                   return F::eq(T::comp(X(m), T::comp(Y(m), Z(m))), T::comp(T::comp(X(m), Y(m)), Z(m)));
                 }});
    s.push_back({"ident-unit", x1, [=](const Subst& m) {
                   return F::conj(F::eq(T::comp(T::ident(), X(m)), X(m)), F::eq(T::comp(X(m), T::ident()), X(m)));
                 }});
    s.push_back({"comp-plus-dist", xyz, [=](const Subst& m) {
                   return F::eq(T::comp(T::plus(X(m), Y(m)), Z(m)), T::plus(T::comp(X(m), Z(m)), T::comp(Y(m), Z(m))));
                 }});
    s.push_back({"conv-involution", x1, [=](const Subst& m) { return F::eq(T::conv(T::conv(X(m))), X(m)); }});
    s.push_back({"conv-antidistributes-comp", xy, [=](const Subst& m) {
                   return F::eq(T::conv(T::comp(X(m), Y(m))), T::comp(T::conv(Y(m)), T::conv(X(m))));
                 }});
    s.push_back({"conv-plus", xy, [=](const Subst& m) {
                   return F::eq(T::conv(T::plus(X(m), Y(m))), T::plus(T::conv(X(m)), T::conv(Y(m))));
                 }});
    s.push_back({"dedekind", xyz, [=](const Subst& m) {
                   return F::leq(T::dot(T::comp(X(m), Y(m)), Z(m)),
                                 T::comp(X(m), T::dot(Y(m), T::comp(T::conv(X(m)), Z(m)))));
                 }});

    // fork
    s.push_back({"fork-def", xy, [=](const Subst& m) {
                   return F::eq(T::fork(X(m), Y(m)),
                                T::dot(T::comp(X(m), T::conv(T::pi())), T::comp(Y(m), T::conv(T::rho()))));
                 }});
    s.push_back({"fork-comp", {"x", "y", "w", "z"}, [=](const Subst& m) {
                   const T& w = m.at("w");
                   return F::eq(T::comp(T::fork(X(m), Y(m)), T::conv(T::fork(w, Z(m)))),
                                T::dot(T::comp(X(m), T::conv(w)), T::comp(Y(m), T::conv(Z(m)))));
                 }});
    s.push_back({"pairing-ident", {}, [](const Subst&) {
                   return F::leq(T::fork(T::conv(T::pi()), T::conv(T::rho())), T::ident());
                 }});
    s.push_back({"star-unfold", x1, [=](const Subst& m) {
                   return F::eq(T::star(X(m)), T::plus(T::ident(), T::comp(X(m), T::star(X(m)))));
                 }});

    // points
    s.push_back({"point-le-ident", x1, [=](const Subst& m) { return F::leq(X(m), T::ident()); }});
    s.push_back({"point-nonzero", x1, [=](const Subst& m) { return F::negation(F::eq(X(m), T::zero())); }});
    s.push_back({"point-atomic", x1, [=](const Subst& m) {
                   return F::leq(T::comp(T::comp(X(m), T::one()), X(m)), X(m));
                 }});
    return s;
  }();
  return schemas;
}

const Schema* find_schema(std::string_view id) {
  for (const auto& s : catalog())
    if (s.id == id) return &s;
  return nullptr;
}

}  // namespace

const std::vector<std::string>& axiom_schemas() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& s : catalog()) out.push_back(s.id);
    return out;
  }();
  return ids;
}

std::vector<std::string> schema_metavariables(std::string_view schema) {
  const Schema* s = find_schema(schema);
  if (!s) throw Error(ErrorCode::UnknownSchema, "unknown axiom schema `" + std::string(schema) + "`");
  return s->vars;
}

ForkFormula instantiate_axiom(std::string_view schema, const std::map<std::string, ForkTerm>& subst) {
  const Schema* s = find_schema(schema);
  if (!s) throw Error(ErrorCode::UnknownSchema, "unknown axiom schema `" + std::string(schema) + "`");
  for (const auto& v : s->vars)
    if (!subst.contains(v))
      throw Error(ErrorCode::MissingMetavariable, "schema `" + s->id + "` needs a binding for `" + v + "`");
  for (const auto& [k, _] : subst)
    if (std::find(s->vars.begin(), s->vars.end(), k) == s->vars.end())
      throw Error(ErrorCode::BadParameter, "schema `" + s->id + "` has no metavariable `" + k + "`");
  if (s->id.starts_with("point-") && subst.at("x").op() != ForkOp::Point)
    throw Error(ErrorCode::BadParameter, "schema `" + s->id + "` only applies to point constants");
  return s->build(subst);
}

std::vector<ForkFormula> point_axioms(const std::string& point) {
  const Subst m{{"x", ForkTerm::point(point)}};
  return {instantiate_axiom("point-le-ident", m), instantiate_axiom("point-nonzero", m),
          instantiate_axiom("point-atomic", m)};
}

}  // namespace hg
