#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hg/gateway.hpp"
#include "hg/syntax.hpp"

using namespace hg;
using namespace hg::gateway;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string corpus(const std::string& rel) { return std::string(HG_CORPUS_DIR) + rel; }

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "hg-gateway-test";
  fs::create_directories(dir);
  return dir / name;
}

ManagedSession proved_trans() {
  SessionConfig cfg;
  cfg.scope_ceiling = 5;
  auto m = open_session(slurp(corpus("/rel/trans.hg")), "trans", cfg);
  run_script(m.session, parse_script(slurp(corpus("/rel/trans.hgs"))));
  return m;
}

struct CliResult {
  int code;
  std::string out, err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "hg");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
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

}  // namespace

TEST_CASE("session files round-trip the digest") {
  auto m = proved_trans();
  auto path = scratch("trans.hgsession");
  save_session(m, path);
  auto back = load_session(path);
  CHECK(tree_digest(back.session) == tree_digest(m.session));
  CHECK(back.spec_source == m.spec_source);
  CHECK(back.session.log() == m.session.log());
  CHECK(back.session.root().discharged);

  auto fresh = open_session(slurp(corpus("/rel/trans.hg")), "trans");
  save_session(fresh, scratch("fresh.hgsession"));
  CHECK(tree_digest(load_session(scratch("fresh.hgsession")).session) == tree_digest(fresh.session));
}

TEST_CASE("tampered session files are rejected") {
  auto m = proved_trans();
  Json j = session_file_json(m);

  Json edited = j;
  edited["log"][3]["params"]["i"] = "0";
  auto c = code_of([&] { session_from_json(edited); });
  CHECK((c == ErrorCode::ReplayDivergence || c == ErrorCode::DigestMismatch));

  edited = j;
  edited["log"][0]["action"] = "rule:no-such-rule";
  CHECK(code_of([&] { session_from_json(edited); }) == ErrorCode::ReplayDivergence);

  edited = j;
  edited["log"].erase(edited["log"].size() - 1);
  CHECK(code_of([&] { session_from_json(edited); }) == ErrorCode::DigestMismatch);

  edited = j;
  edited["digest"] = std::string(64, '0');
  CHECK(code_of([&] { session_from_json(edited); }) == ErrorCode::DigestMismatch);

  edited = j;
  edited["version"] = kSessionFormatVersion + 1;
  CHECK(code_of([&] { session_from_json(edited); }) == ErrorCode::VersionMismatch);

  edited = j;
  edited.erase("goal");
  CHECK(code_of([&] { session_from_json(edited); }) == ErrorCode::IoError);

  edited = j;
  edited["registry"] = Json::array();
  CHECK(code_of([&] { session_from_json(edited); }) == ErrorCode::ReplayDivergence);

  CHECK(code_of([&] { load_session(scratch("does-not-exist.hgsession")); }) == ErrorCode::IoError);
  {
    std::ofstream(scratch("junk.hgsession")) << "{not json";
  }
  CHECK(code_of([&] { load_session(scratch("junk.hgsession")); }) == ErrorCode::IoError);
}

TEST_CASE("JSON views") {
  auto m = proved_trans();
  Json tree = tree_json(m.session);
  CHECK(tree["digest"] == tree_digest(m.session));
  CHECK(tree["nodes"].size() == m.session.nodes().size());
  CHECK(tree["nodes"][0]["status"] == "Discharged");
  CHECK(tree["nodes"][1]["language"] == "FORK");
  CHECK(tree["nodes"][1]["sequent"] == "r <= s, s <= t |- r <= t");
  CHECK(tree["nodes"][1]["provenance_action"] == "switch-language");

  for (const auto& r : m.session.log()) CHECK(record_from_json(record_json(r)) == r);
  CHECK(registry_from_json(registry_json(EngineRegistry::defaults())) == EngineRegistry::defaults());

  FiniteInterpretation i;
  i.size = 2;
  i.set_relation("r", 2, {{0, 1}, {1, 0}});
  i.set_relation("u", 1, {});
  i.set_atom("a", 1);
  CHECK(render_line(i) == "|U|=2, r={(0,1),(1,0)}, u={}, a=1");

  Json e = error_json(EngineFailure("rel-enum", "boom"));
  CHECK(e["error"]["code"] == "EngineFailure");
  CHECK(e["error"]["engine"] == "rel-enum");

  CHECK(http_status(ErrorCode::ActionNotApplicable) == 409);
  CHECK(http_status(ErrorCode::ScopeExceedsCeiling) == 422);
  CHECK(http_status(ErrorCode::BadParameter) == 422);
  CHECK(http_status(ErrorCode::UnknownNode) == 404);
  CHECK(http_status(ErrorCode::EngineFailure) == 500);
}

TEST_CASE("cli") {
  auto r = cli({"check", corpus("/rel/laws.hg"), "--assert", "assoc", "--scope", "3"});
  CHECK(r.code == 0);
  CHECK(r.out == "no counterexample within scope 3 (530 interpretations)\n");

  r = cli({"check", corpus("/rel/bad.hg"), "--assert", "rins", "--scope", "1"});
  CHECK(r.code == 2);
  CHECK(r.out.find("|U|=1, r={(0,0)}, s={}\n") != std::string::npos);

  r = cli({"check", corpus("/rel/bad.hg"), "--assert", "rins", "--scope", "1", "--json"});
  CHECK(r.code == 2);
  Json j = Json::parse(r.out);
  CHECK(j["outcome"] == "refuted");
  CHECK(j["interpretation"]["text"] == "|U|=1, r={(0,0)}, s={}");

  r = cli({"prove", corpus("/rel/trans.hg"), "--goal", "trans", "--script", corpus("/rel/trans.hgs")});
  CHECK(r.code == 0);
  CHECK(r.out.find("root Discharged\n") != std::string::npos);

  auto saved = scratch("cli.hgsession").string();
  r = cli({"--json", "prove", corpus("/rel/swap.hg"), "--goal", "swap", "--script", corpus("/rel/wit.hgs"), "--save",
           saved});
  CHECK(r.code == 1);  // the witness script does not fit the swap goal
  CHECK(Json::parse(r.out)["error"]["code"] == "ActionNotApplicable");

  r = cli({"prove", corpus("/rel/trans.hg"), "--goal", "trans", "--script", corpus("/rel/trans.hgs"), "--save", saved});
  REQUIRE(r.code == 0);
  r = cli({"replay", saved, "--json"});
  CHECK(r.code == 0);
  CHECK(Json::parse(r.out)["digest"] == tree_digest(proved_trans().session));

  // an unfinished proof is not a failure of the tool
  auto partial = scratch("partial.hgs");
  std::ofstream(partial) << "root switch-language translator=rel2fork\n";
  r = cli({"prove", corpus("/rel/trans.hg"), "--goal", "trans", "--script", partial.string()});
  CHECK(r.code == 2);
  CHECK(r.out.find("root Translated\n") != std::string::npos);

  CHECK(cli({}).code == 64);
  CHECK(cli({"check"}).code == 64);
  CHECK(cli({"check", corpus("/rel/bad.hg")}).code == 64);
  CHECK(cli({"frobnicate"}).code == 64);
  CHECK(cli({"check", corpus("/rel/bad.hg"), "--assert", "rins", "--scope", "x"}).code == 64);
  CHECK(cli({"--help"}).code == 0);

  r = cli({"check", corpus("/rel/bad.hg"), "--assert", "nope"});
  CHECK(r.code == 1);
  CHECK(r.err.find("UnknownGoal") != std::string::npos);
  CHECK(cli({"check", "/nonexistent.hg", "--assert", "a"}).code == 1);
  CHECK(cli({"check", corpus("/rel/bad.hg"), "--assert", "rins", "--scope", "9"}).code == 1);
  CHECK(cli({"replay", scratch("junk2.hgsession").string()}).code == 1);
}
