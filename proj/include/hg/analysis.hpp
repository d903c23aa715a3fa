#pragma once

// Analysis sessions: the proof tree, the action catalog and the action log.
//
// Node ids are handed out in creation order starting at 0 (the root). A node
// carries its own signature: children inherit it, a translated child gets
// the translation's. Only committed actions are logged; a request that is
// rejected up front (unknown node, action not applicable, bad parameters)
// leaves no trace. validated-case and eliminate-superfluous may commit a
// failed record that changes nothing in the tree.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hg/kernel.hpp"
#include "hg/logic.hpp"
#include "hg/modelfinder.hpp"
#include "hg/rho.hpp"
#include "hg/syntax.hpp"

namespace hg {

using NodeId = std::size_t;

// ---------------------------------------------------------------------------
// Engines

enum class EngineFamily { SequentCalculator, CounterexampleFinder, RhoTranslator };

std::string_view to_string(EngineFamily f);
std::optional<EngineFamily> parse_engine_family(std::string_view text);

class CounterexampleFinder {
 public:
  virtual ~CounterexampleFinder() = default;
  virtual Language language() const = 0;
  virtual CounterexampleReport find(const Sequent& s, const Signature& sig, int scope, int ceiling) const = 0;
};

struct EngineEntry {
  std::string id;
  EngineFamily family;
  Language source;
  std::optional<Language> target;  // translators only
  bool operator==(const EngineEntry&) const = default;
};

// Engines are selected by id from the implementations compiled in:
//   rel-lk        sequent-calculator    REL
//   fork-pdocfa   sequent-calculator    FORK
//   rel-enum      counterexample-finder REL
//   rel2fork      rho-translator        REL -> FORK
class EngineRegistry {
 public:
  // All four built-in engines.
  static EngineRegistry defaults();

  // `[engine]` sections with `id`, `family`, `source` and optional `target`
  // keys; `#` comments. Throws BadConfig on malformed text, UnknownEngine for
  // ids without an implementation, BadConfig when family/languages disagree
  // with the implementation.
  static EngineRegistry from_config(std::string_view text);
  std::string to_config() const;

  void add(const EngineEntry& e);
  const std::vector<EngineEntry>& entries() const { return entries_; }

  // First registered engine of the family for `lang`, if any.
  const EngineEntry* calculator_for(Language lang) const;
  const EngineEntry* finder_for(Language lang) const;
  std::vector<const EngineEntry*> translators_from(Language lang) const;
  const EngineEntry* find(std::string_view id) const;

  const SequentCalculator& calculator(const EngineEntry& e) const;
  const CounterexampleFinder& finder(const EngineEntry& e) const;
  const RhoTranslator& translator(const EngineEntry& e) const;

  bool operator==(const EngineRegistry& o) const { return entries_ == o.entries_; }

 private:
  std::vector<EngineEntry> entries_;
};

// ---------------------------------------------------------------------------
// Tree

enum class NodeStatus { Open, Closed, Discharged, Validated, Refuted, Pruned, Translated };

std::string_view to_string(NodeStatus s);

struct AnalysisNode {
  AnalysisNode(NodeId id_, std::optional<NodeId> parent_, Sequent s, Signature sig, std::optional<std::size_t> prov,
               std::string action)
      : id(id_), parent(parent_), sequent(std::move(s)), signature(std::move(sig)), provenance(prov),
        provenance_action(std::move(action)) {}

  NodeId id = 0;
  std::optional<NodeId> parent;
  Sequent sequent;
  Signature signature;
  std::optional<std::size_t> provenance;  // creating record; none for the root
  std::string provenance_action;          // "create" for the root
  std::vector<NodeId> children;

  bool closed = false;       // a rule returned no premises
  bool pruned = false;
  bool discharged = false;   // maintained by propagation
  bool translated = false;   // children come from switch-language
  std::optional<int> validated_scope;
  std::optional<CounterexampleReport> refutation;
  std::set<std::size_t> suspects;  // antecedents flagged by hypothesis-confidence

  Language language() const { return sequent.language(); }
  NodeStatus status() const;
};

// to_string(status) with the scope for Validated: "Validated(3)".
std::string status_label(const AnalysisNode& n);

// ---------------------------------------------------------------------------
// Actions

struct ActionParamSpec {
  std::string name;
  std::string kind;  // kernel param kinds plus "scope", "translator-id"
  bool required = true;
};

struct ActionOffer {
  std::string action;  // e.g. "rule:and-right", "validate"
  std::vector<ActionParamSpec> params;
  std::vector<Params> candidates;  // bindings known to pass the guard; may be partial
};

struct ActionRecord {
  std::size_t seq = 0;
  NodeId target = 0;
  std::string action;
  Params params;
  std::string engine;             // id of the engine that ran, empty for tree actions
  bool failed = false;            // committed failure (validated-case, eliminate-superfluous)
  std::vector<NodeId> created;
  std::vector<NodeId> updated;    // existing nodes whose status or annotations changed
  std::string output;             // deterministic engine output text
  std::string output_digest;      // sha256 of output
  std::vector<std::string> witnesses;  // suggest-witnesses, best first
  bool operator==(const ActionRecord&) const = default;
};

struct SessionConfig {
  int default_scope = 3;
  int scope_ceiling = 0;  // 0: HG_SCOPE_CEILING / default
  int ceiling() const;
  bool operator==(const SessionConfig&) const = default;
};

// Raised after a failed validated-case or eliminate-superfluous has been
// committed; carries the refuted sequent and the finder report.
class ValidationFailure : public Error {
 public:
  ValidationFailure(std::size_t seq, Sequent refuted, CounterexampleReport report, const std::string& message);
  std::size_t seq() const { return seq_; }
  const Sequent& refuted() const { return refuted_; }
  const CounterexampleReport& report() const { return report_; }

 private:
  std::size_t seq_;
  Sequent refuted_;
  CounterexampleReport report_;
};

class Session {
 public:
  // Root: axioms of `spec` |- the goal. Throws UnknownGoal, IllFormedSpec.
  static Session create(Spec spec, const std::string& goal, SessionConfig config = {},
                        EngineRegistry registry = EngineRegistry::defaults());

  const Spec& spec() const { return spec_; }
  const std::string& goal() const { return goal_; }
  const SessionConfig& config() const { return config_; }
  const EngineRegistry& registry() const { return registry_; }

  const std::vector<AnalysisNode>& nodes() const { return nodes_; }
  const AnalysisNode& node(NodeId id) const;  // UnknownNode
  const AnalysisNode& root() const { return nodes_.front(); }
  const std::vector<ActionRecord>& log() const { return log_; }

  std::vector<ActionOffer> applicable_actions(NodeId id) const;

  // Throws UnknownNode, ActionNotApplicable, BadParameter (and the kernel's
  // parameter errors), ScopeExceedsCeiling, EngineFailure; ValidationFailure
  // after committing a failed record.
  const ActionRecord& apply_action(NodeId id, std::string_view action, const Params& params);

 private:
  Session(Spec spec, std::string goal, SessionConfig config, EngineRegistry registry, Sequent root);

  AnalysisNode& mut(NodeId id);
  NodeId add_child(NodeId parent, Sequent s, Signature sig, std::size_t seq, const std::string& action);
  void propagate(NodeId from, std::set<NodeId>& touched);
  const ActionRecord& commit(ActionRecord r, const std::set<NodeId>& touched);
  int scope_param(const Params& p) const;

  Spec spec_;
  std::string goal_;
  SessionConfig config_;
  EngineRegistry registry_;
  std::vector<AnalysisNode> nodes_;
  std::vector<ActionRecord> log_;
};

// Applies script lines in order. Errors keep their code and gain a
// "line N: " prefix.
void run_script(Session& s, const std::vector<ScriptLine>& lines);

// Re-applies every record against a fresh session and compares created
// nodes, failure flag and output digest. Throws ReplayDivergence at the
// first record that does not reproduce.
Session replay(const Spec& spec, const std::string& goal, const SessionConfig& config, const EngineRegistry& registry,
               const std::vector<ActionRecord>& log);

// One line per node in id order: id, parent, status, language, printed
// sequent, provenance action.
std::string canonical_tree(const Session& s);
// Hex SHA-256 of canonical_tree.
std::string tree_digest(const Session& s);
std::string sha256_hex(std::string_view data);

}  // namespace hg
