#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hg/gateway.hpp"
#include "hg/syntax.hpp"

namespace hg::gateway {

namespace {

constexpr int kUsage = 64;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

EngineRegistry registry_option(const std::string& path) {
  return path.empty() ? EngineRegistry::defaults() : EngineRegistry::from_config(read_file(path));
}

void diagnose(const Error& e, const std::string& file, bool json, const std::string& command, std::ostream& out,
              std::ostream& err) {
  if (json) {
    Json j = error_json(e);
    j["command"] = command;
    out << j.dump() << '\n';
    return;
  }
  if (const auto* pe = dynamic_cast<const ParseError*>(&e); pe && !file.empty())
    err << file << ':' << pe->span().line << ':' << pe->span().column << ": ";
  err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
}

void print_tree(const Session& s, std::ostream& out) {
  for (const auto& n : s.nodes())
    out << n.id << ' ' << status_label(n) << ' ' << to_string(n.language()) << ' ' << print(n.sequent) << '\n';
}

int do_check(const std::string& file, const std::string& name, int scope, bool symmetry, bool json,
             std::ostream& out) {
  Spec spec = parse_spec(read_file(file));
  const NamedFormula* goal = spec.find_goal(name);
  if (!goal) throw Error(ErrorCode::UnknownGoal, "no assertion named '" + name + "'");
  std::vector<Formula> ante;
  for (const auto& ax : spec.axioms) ante.push_back(ax.formula);
  Sequent s(spec.signature.language(), std::move(ante), {goal->formula});
  FinderOptions opts;
  opts.symmetry = symmetry ? Symmetry::Canonical : Symmetry::Off;
  CounterexampleReport rep = find_counterexample(s, spec.signature, scope, opts);
  using O = CounterexampleReport::Outcome;
  if (json) {
    Json j = report_json(rep);
    j["command"] = "check";
    j["file"] = file;
    j["assert"] = name;
    out << j.dump() << '\n';
  } else if (rep.outcome == O::Refuted) {
    out << "counterexample within scope " << rep.scope << " (" << rep.examined << " interpretations)\n"
        << render_line(*rep.interpretation) << '\n';
  } else {
    out << render(rep);
  }
  switch (rep.outcome) {
    case O::NoneWithinScope: return 0;
    case O::Refuted: return 2;
    case O::Unsupported: return 1;
  }
  return 1;
}

Json session_summary(const std::string& command, const Session& s) {
  Json j = tree_json(s);
  j["command"] = command;
  j["discharged"] = s.root().discharged;
  return j;
}

int do_prove(const std::string& file, const std::string& goal, const std::string& script, const std::string& save,
             const std::string& engines, int scope, bool json, std::ostream& out, std::ostream& err) {
  SessionConfig config;
  config.default_scope = scope;
  ManagedSession m = open_session(read_file(file), goal, config, registry_option(engines));
  auto lines = parse_script(read_file(script));
  std::optional<Error> failure;
  try {
    run_script(m.session, lines);
  } catch (const Error& e) {
    failure = e;
  }
  if (!save.empty()) save_session(m, save);
  if (failure) {
    diagnose(*failure, script, json, "prove", out, err);
    return 1;
  }
  const bool done = m.session.root().discharged;
  if (json) {
    out << session_summary("prove", m.session).dump() << '\n';
  } else {
    print_tree(m.session, out);
    out << "root " << status_label(m.session.root()) << '\n';
  }
  return done ? 0 : 2;
}

int do_replay(const std::string& file, bool json, std::ostream& out) {
  ManagedSession m = load_session(file);
  if (json) {
    out << session_summary("replay", m.session).dump() << '\n';
  } else {
    print_tree(m.session, out);
    out << "digest " << tree_digest(m.session) << '\n';
  }
  return 0;
}

int do_serve(ServiceConfig cfg, std::ostream& out) {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);  // worker threads inherit the mask
  Service svc(std::move(cfg));
  unsigned short port = svc.start();
  out << "listening on port " << port << std::endl;
  int sig = 0;
  sigwait(&set, &sig);
  svc.stop();
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hybrid proofs and bounded checks for relational specifications"};
  app.name("hg");
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "Machine-readable output");
  app.fallthrough();

  std::string file, name, script, save, engines, session_dir, address = "127.0.0.1";
  int scope = 3, threads = 4;
  int port = 8080;
  bool symmetry = false;

  auto* check = app.add_subcommand("check", "Search for a counterexample to an assertion");
  check->add_option("file", file, "Spec file")->required();
  check->add_option("--assert", name, "Assertion name")->required();
  check->add_option("--scope", scope, "Largest universe size")->capture_default_str();
  check->add_flag("--symmetry", symmetry, "Skip interpretations that are permutations of earlier ones");

  auto* prove = app.add_subcommand("prove", "Run a proof script against a goal");
  prove->add_option("file", file, "Spec file")->required();
  prove->add_option("--goal", name, "Goal name")->required();
  prove->add_option("--script", script, "Proof script (.hgs)")->required();
  prove->add_option("--save", save, "Write the resulting session file");
  prove->add_option("--engines", engines, "Engine registry configuration");
  prove->add_option("--scope", scope, "Default scope for finder actions")->capture_default_str();

  auto* rep = app.add_subcommand("replay", "Load a session file, replay its log and check the digest");
  rep->add_option("session", file, "Session file")->required();

  auto* serve = app.add_subcommand("serve", "Run the HTTP/WebSocket service");
  serve->add_option("--port", port, "Port (0 picks a free one)")->capture_default_str()->check(CLI::Range(0, 65535));
  serve->add_option("--session-dir", session_dir, "Directory for saved sessions")->required();
  serve->add_option("--address", address, "Bind address")->capture_default_str();
  serve->add_option("--engines", engines, "Engine registry configuration");
  serve->add_option("--threads", threads, "Worker threads")->capture_default_str()->check(CLI::Range(1, 64));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kUsage;
  }

  std::string command = app.get_subcommands().front()->get_name();
  try {
    if (command == "check") return do_check(file, name, scope, symmetry, json, out);
    if (command == "prove") return do_prove(file, name, script, save, engines, scope, json, out, err);
    if (command == "replay") return do_replay(file, json, out);
    ServiceConfig cfg;
    cfg.address = address;
    cfg.port = static_cast<unsigned short>(port);
    cfg.session_dir = session_dir;
    cfg.registry = registry_option(engines);
    cfg.threads = threads;
    return do_serve(std::move(cfg), out);
  } catch (const Error& e) {
    diagnose(e, file, json, command, out, err);
    return 1;
  }
}

}  // namespace hg::gateway
