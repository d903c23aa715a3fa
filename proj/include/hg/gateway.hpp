#pragma once

// Persistence, JSON views, the `hg` command line and the HTTP/WebSocket
// service.

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

#include "hg/analysis.hpp"
#include "json.hpp"

namespace hg::gateway {

using Json = nlohmann::json;

inline constexpr int kSessionFormatVersion = 1;

// A session together with the spec text it was created from.
struct ManagedSession {
  std::string spec_source;
  Session session;
};

ManagedSession open_session(std::string spec_source, const std::string& goal, SessionConfig config = {},
                            EngineRegistry registry = EngineRegistry::defaults());

// Session files: JSON with format version, spec source, goal, config, engine
// registry snapshot, action log and tree digest. Loading replays the log
// against the embedded spec and compares digests.
Json session_file_json(const ManagedSession& s);
ManagedSession session_from_json(const Json& j);  // VersionMismatch, ReplayDivergence, DigestMismatch, IoError
void save_session(const ManagedSession& s, const std::filesystem::path& path);  // IoError
ManagedSession load_session(const std::filesystem::path& path);

// JSON views
Json interpretation_json(const FiniteInterpretation& i);
Json report_json(const CounterexampleReport& r);
Json node_json(const AnalysisNode& n);
Json tree_json(const Session& s);
Json offer_json(const ActionOffer& o);
Json record_json(const ActionRecord& r);
ActionRecord record_from_json(const Json& j);
Json registry_json(const EngineRegistry& r);
EngineRegistry registry_from_json(const Json& j);
// {created: [node], updated: [node]} for one record, against the current tree.
Json delta_json(const Session& s, const ActionRecord& r);
// {"error": {code, message, ...}} with the extra fields of the subclasses.
Json error_json(const Error& e);

// `|U|=1, r={(0,0)}, s={}, a=0`
std::string render_line(const FiniteInterpretation& i);

// HTTP status for an error raised by an action or session request.
int http_status(ErrorCode code);

// argv[0] is the program name. Exit codes: check 0/2/1, prove 0 iff the root
// is discharged (2 otherwise), usage errors 64, other errors 1.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct ServiceConfig {
  std::string address = "127.0.0.1";
  unsigned short port = 0;  // 0 picks a free port
  std::filesystem::path session_dir;
  SessionConfig session;
  EngineRegistry registry = EngineRegistry::defaults();
  int threads = 4;
};

class Service {
 public:
  explicit Service(ServiceConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Binds, loads *.hgsession files from the session dir and starts the
  // worker threads. Returns the bound port.
  unsigned short start();
  void stop();
  // Blocks until stop() is called from elsewhere.
  void wait();

  struct Impl;

 private:
  std::shared_ptr<Impl> impl_;
};

}  // namespace hg::gateway
