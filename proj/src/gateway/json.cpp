#include <fstream>
#include <sstream>

#include "hg/gateway.hpp"
#include "hg/syntax.hpp"

namespace hg::gateway {

namespace {

Json opt(const std::optional<std::size_t>& v) { return v ? Json(*v) : Json(nullptr); }

std::vector<std::string> printed(const std::vector<Formula>& fs) {
  std::vector<std::string> out;
  for (const auto& f : fs) out.push_back(print(f));
  return out;
}

}  // namespace

ManagedSession open_session(std::string spec_source, const std::string& goal, SessionConfig config,
                            EngineRegistry registry) {
  Spec spec = parse_spec(spec_source);
  Session s = Session::create(std::move(spec), goal, config, std::move(registry));
  return {std::move(spec_source), std::move(s)};
}

std::string render_line(const FiniteInterpretation& i) {
  std::string out = "|U|=" + std::to_string(i.size);
  for (const auto& r : i.relations) {
    out += ", " + r.name + "={";
    bool first = true;
    for (const auto& t : r.tuples) {
      if (!first) out += ',';
      first = false;
      out += '(';
      for (std::size_t k = 0; k < t.size(); ++k) out += (k ? "," : "") + std::to_string(t[k]);
      out += ')';
    }
    out += '}';
  }
  for (const auto& a : i.atoms) out += ", " + a.name + "=" + std::to_string(a.value);
  return out;
}

Json interpretation_json(const FiniteInterpretation& i) {
  Json rels = Json::array();
  for (const auto& r : i.relations) {
    Json tuples = Json::array();
    for (const auto& t : r.tuples) tuples.push_back(t);
    rels.push_back({{"name", r.name}, {"arity", r.arity}, {"tuples", tuples}});
  }
  Json atoms = Json::array();
  for (const auto& a : i.atoms) atoms.push_back({{"name", a.name}, {"value", a.value}});
  return {{"size", i.size}, {"relations", rels}, {"atoms", atoms}, {"text", render_line(i)}};
}

Json report_json(const CounterexampleReport& r) {
  Json j = {{"outcome", std::string(to_string(r.outcome))},
            {"scope", r.scope},
            {"examined", r.examined},
            {"text", render(r)}};
  j["interpretation"] = r.interpretation ? interpretation_json(*r.interpretation) : Json(nullptr);
  if (r.outcome == CounterexampleReport::Outcome::Unsupported) j["reason"] = r.reason;
  return j;
}

Json node_json(const AnalysisNode& n) {
  return {{"id", n.id},
          {"parent", opt(n.parent)},
          {"status", std::string(to_string(n.status()))},
          {"label", status_label(n)},
          {"language", std::string(to_string(n.language()))},
          {"sequent", print(n.sequent)},
          {"antecedents", printed(n.sequent.antecedents())},
          {"consequents", printed(n.sequent.consequents())},
          {"provenance", opt(n.provenance)},
          {"provenance_action", n.provenance_action},
          {"children", n.children},
          {"closed", n.closed},
          {"pruned", n.pruned},
          {"discharged", n.discharged},
          {"validated_scope", n.validated_scope ? Json(*n.validated_scope) : Json(nullptr)},
          {"refutation", n.refutation ? report_json(*n.refutation) : Json(nullptr)},
          {"suspects", n.suspects}};
}

Json tree_json(const Session& s) {
  Json nodes = Json::array();
  for (const auto& n : s.nodes()) nodes.push_back(node_json(n));
  return {{"goal", s.goal()}, {"root", 0}, {"digest", tree_digest(s)}, {"log_size", s.log().size()}, {"nodes", nodes}};
}

Json offer_json(const ActionOffer& o) {
  Json params = Json::array();
  for (const auto& p : o.params) params.push_back({{"name", p.name}, {"kind", p.kind}, {"required", p.required}});
  Json cands = Json::array();
  for (const auto& c : o.candidates) cands.push_back(c);
  return {{"action", o.action}, {"params", params}, {"candidates", cands}};
}

Json record_json(const ActionRecord& r) {
  return {{"seq", r.seq},         {"target", r.target},   {"action", r.action},
          {"params", r.params},   {"engine", r.engine},   {"failed", r.failed},
          {"created", r.created}, {"updated", r.updated}, {"output", r.output},
          {"output_digest", r.output_digest}, {"witnesses", r.witnesses}};
}

ActionRecord record_from_json(const Json& j) {
  ActionRecord r;
  r.seq = j.at("seq").get<std::size_t>();
  r.target = j.at("target").get<NodeId>();
  r.action = j.at("action").get<std::string>();
  r.params = j.at("params").get<Params>();
  r.engine = j.value("engine", "");
  r.failed = j.value("failed", false);
  r.created = j.value("created", std::vector<NodeId>{});
  r.updated = j.value("updated", std::vector<NodeId>{});
  r.output = j.value("output", "");
  r.output_digest = j.at("output_digest").get<std::string>();
  r.witnesses = j.value("witnesses", std::vector<std::string>{});
  return r;
}

Json registry_json(const EngineRegistry& r) {
  Json out = Json::array();
  for (const auto& e : r.entries()) {
    out.push_back({{"id", e.id},
                   {"family", std::string(to_string(e.family))},
                   {"source", std::string(to_string(e.source))},
                   {"target", e.target ? Json(std::string(to_string(*e.target))) : Json(nullptr)}});
  }
  return out;
}

EngineRegistry registry_from_json(const Json& j) {
  EngineRegistry reg;
  for (const auto& e : j) {
    EngineEntry entry;
    entry.id = e.at("id").get<std::string>();
    auto fam = parse_engine_family(e.at("family").get<std::string>());
    auto src = parse_language(e.at("source").get<std::string>());
    if (!fam || !src) throw Error(ErrorCode::BadConfig, "bad registry entry for " + entry.id);
    entry.family = *fam;
    entry.source = *src;
    if (e.contains("target") && !e.at("target").is_null()) {
      auto t = parse_language(e.at("target").get<std::string>());
      if (!t) throw Error(ErrorCode::BadConfig, "bad registry target for " + entry.id);
      entry.target = *t;
    }
    reg.add(entry);
  }
  return reg;
}

Json delta_json(const Session& s, const ActionRecord& r) {
  Json created = Json::array(), updated = Json::array();
  for (NodeId id : r.created) created.push_back(node_json(s.node(id)));
  for (NodeId id : r.updated) updated.push_back(node_json(s.node(id)));
  return {{"created", created}, {"updated", updated}};
}

Json error_json(const Error& e) {
  Json err = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
  if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
    err["line"] = pe->span().line;
    err["column"] = pe->span().column;
    err["expected"] = pe->expected();
  }
  if (const auto* ef = dynamic_cast<const EngineFailure*>(&e)) err["engine"] = ef->engine_id();
  if (const auto* rd = dynamic_cast<const ReplayDivergence*>(&e)) err["seq"] = rd->seq();
  if (const auto* vf = dynamic_cast<const ValidationFailure*>(&e)) {
    err["seq"] = vf->seq();
    err["refuted"] = print(vf->refuted());
    err["report"] = report_json(vf->report());
  }
  return {{"error", err}};
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownNode: return 404;
    case ErrorCode::ActionNotApplicable:
    case ErrorCode::ValidationFailed: return 409;
    case ErrorCode::BadParameter:
    case ErrorCode::FreshnessViolation:
    case ErrorCode::ArityMismatch:
    case ErrorCode::UnknownSchema:
    case ErrorCode::MissingMetavariable:
    case ErrorCode::ScopeExceedsCeiling:
    case ErrorCode::ParseError:
    case ErrorCode::UndeclaredIdentifier:
    case ErrorCode::DuplicateName:
    case ErrorCode::IllFormed:
    case ErrorCode::UnknownGoal:
    case ErrorCode::IllFormedSpec:
    case ErrorCode::UnsupportedFormula:
    case ErrorCode::UnknownLanguage:
    case ErrorCode::BadConfig: return 422;
    default: return 500;
  }
}

// ---------------------------------------------------------------------------
// Session files

Json session_file_json(const ManagedSession& m) {
  const Session& s = m.session;
  Json log = Json::array();
  for (const auto& r : s.log()) log.push_back(record_json(r));
  return {{"format", "hg-session"},
          {"version", kSessionFormatVersion},
          {"spec", m.spec_source},
          {"goal", s.goal()},
          {"config", {{"default_scope", s.config().default_scope}, {"scope_ceiling", s.config().scope_ceiling}}},
          {"registry", registry_json(s.registry())},
          {"log", log},
          {"digest", tree_digest(s)}};
}

ManagedSession session_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("version") || !j.at("version").is_number_integer())
    throw Error(ErrorCode::IoError, "not a session file");
  const int version = j.at("version").get<int>();
  if (version != kSessionFormatVersion)
    throw Error(ErrorCode::VersionMismatch, "session file version " + std::to_string(version) + ", expected " +
                                                std::to_string(kSessionFormatVersion));
  std::string source, goal, digest;
  SessionConfig config;
  EngineRegistry registry;
  std::vector<ActionRecord> log;
  try {
    source = j.at("spec").get<std::string>();
    goal = j.at("goal").get<std::string>();
    digest = j.at("digest").get<std::string>();
    const Json& c = j.at("config");
    config.default_scope = c.at("default_scope").get<int>();
    config.scope_ceiling = c.at("scope_ceiling").get<int>();
    registry = registry_from_json(j.at("registry"));
    for (const auto& r : j.at("log")) log.push_back(record_from_json(r));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::IoError, std::string("malformed session file: ") + e.what());
  }
  Spec spec = parse_spec(source);
  Session s = replay(spec, goal, config, registry, log);
  if (tree_digest(s) != digest)
    throw Error(ErrorCode::DigestMismatch, "replayed tree digest " + tree_digest(s) + " differs from saved " + digest);
  return {std::move(source), std::move(s)};
}

void save_session(const ManagedSession& s, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << session_file_json(s).dump(2) << '\n';
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

ManagedSession load_session(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  Json j;
  try {
    j = Json::parse(ss.str());
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::IoError, path.string() + ": " + e.what());
  }
  return session_from_json(j);
}

}  // namespace hg::gateway
