#include <algorithm>
#include <sstream>

#include "hg/analysis.hpp"

namespace hg {

namespace {

class RelEnumFinder final : public CounterexampleFinder {
 public:
  Language language() const override { return Language::Rel; }
  CounterexampleReport find(const Sequent& s, const Signature& sig, int scope, int ceiling) const override {
    FinderOptions opts;
    opts.ceiling = ceiling;
    return find_counterexample(s, sig, scope, opts);
  }
};

const RelEnumFinder& rel_enum() {
  static const RelEnumFinder f;
  return f;
}

struct Builtin {
  std::string_view id;
  EngineFamily family;
  Language source;
  std::optional<Language> target;
};

const std::vector<Builtin>& builtins() {
  static const std::vector<Builtin> table = {
      {"rel-lk", EngineFamily::SequentCalculator, Language::Rel, std::nullopt},
      {"fork-pdocfa", EngineFamily::SequentCalculator, Language::Fork, std::nullopt},
      {"rel-enum", EngineFamily::CounterexampleFinder, Language::Rel, std::nullopt},
      {"rel2fork", EngineFamily::RhoTranslator, Language::Rel, Language::Fork},
  };
  return table;
}

const Builtin* builtin(std::string_view id) {
  for (const auto& b : builtins())
    if (b.id == id) return &b;
  return nullptr;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::string_view to_string(EngineFamily f) {
  switch (f) {
    case EngineFamily::SequentCalculator: return "sequent-calculator";
    case EngineFamily::CounterexampleFinder: return "counterexample-finder";
    case EngineFamily::RhoTranslator: return "rho-translator";
  }
  return "?";
}

std::optional<EngineFamily> parse_engine_family(std::string_view text) {
  for (auto f : {EngineFamily::SequentCalculator, EngineFamily::CounterexampleFinder, EngineFamily::RhoTranslator})
    if (to_string(f) == text) return f;
  return std::nullopt;
}

EngineRegistry EngineRegistry::defaults() {
  EngineRegistry r;
  for (const auto& b : builtins()) r.add({std::string(b.id), b.family, b.source, b.target});
  return r;
}

void EngineRegistry::add(const EngineEntry& e) {
  const Builtin* b = builtin(e.id);
  if (!b) throw Error(ErrorCode::UnknownEngine, "no engine implementation with id '" + e.id + "'");
  if (b->family != e.family || b->source != e.source || b->target != e.target)
    throw Error(ErrorCode::BadConfig, "engine '" + e.id + "' is a " + std::string(to_string(b->family)) + " for " +
                                          std::string(to_string(b->source)));
  if (find(e.id)) throw Error(ErrorCode::BadConfig, "duplicate engine id '" + e.id + "'");
  entries_.push_back(e);
}

EngineRegistry EngineRegistry::from_config(std::string_view text) {
  EngineRegistry reg;
  std::vector<std::map<std::string, std::string>> sections;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;
    auto where = "line " + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line != "[engine]") throw Error(ErrorCode::BadConfig, where + "unknown section " + line);
      sections.emplace_back();
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::BadConfig, where + "expected key = value");
    if (sections.empty()) throw Error(ErrorCode::BadConfig, where + "key outside an [engine] section");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (key != "id" && key != "family" && key != "source" && key != "target")
      throw Error(ErrorCode::BadConfig, where + "unknown key '" + key + "'");
    if (!sections.back().emplace(key, value).second)
      throw Error(ErrorCode::BadConfig, where + "repeated key '" + key + "'");
  }
  for (const auto& sec : sections) {
    for (const char* k : {"id", "family", "source"})
      if (!sec.contains(k)) throw Error(ErrorCode::BadConfig, std::string("engine section without ") + k);
    EngineEntry e;
    e.id = sec.at("id");
    auto fam = parse_engine_family(sec.at("family"));
    if (!fam) throw Error(ErrorCode::BadConfig, "unknown engine family '" + sec.at("family") + "'");
    e.family = *fam;
    auto src = parse_language(sec.at("source"));
    if (!src) throw Error(ErrorCode::BadConfig, "unknown language '" + sec.at("source") + "'");
    e.source = *src;
    if (auto t = sec.find("target"); t != sec.end() && t->second != "none") {
      auto tgt = parse_language(t->second);
      if (!tgt) throw Error(ErrorCode::BadConfig, "unknown language '" + t->second + "'");
      e.target = *tgt;
    }
    reg.add(e);
  }
  return reg;
}

std::string EngineRegistry::to_config() const {
  std::string out;
  for (const auto& e : entries_) {
    if (!out.empty()) out += '\n';
    out += "[engine]\nid = \"" + e.id + "\"\nfamily = \"" + std::string(to_string(e.family)) + "\"\nsource = \"" +
           std::string(to_string(e.source)) + "\"\n";
    if (e.target) out += "target = \"" + std::string(to_string(*e.target)) + "\"\n";
  }
  return out;
}

const EngineEntry* EngineRegistry::find(std::string_view id) const {
  auto it = std::find_if(entries_.begin(), entries_.end(), [&](const EngineEntry& e) { return e.id == id; });
  return it == entries_.end() ? nullptr : &*it;
}

const EngineEntry* EngineRegistry::calculator_for(Language lang) const {
  for (const auto& e : entries_)
    if (e.family == EngineFamily::SequentCalculator && e.source == lang) return &e;
  return nullptr;
}

const EngineEntry* EngineRegistry::finder_for(Language lang) const {
  for (const auto& e : entries_)
    if (e.family == EngineFamily::CounterexampleFinder && e.source == lang) return &e;
  return nullptr;
}

std::vector<const EngineEntry*> EngineRegistry::translators_from(Language lang) const {
  std::vector<const EngineEntry*> out;
  for (const auto& e : entries_)
    if (e.family == EngineFamily::RhoTranslator && e.source == lang) out.push_back(&e);
  return out;
}

const SequentCalculator& EngineRegistry::calculator(const EngineEntry& e) const {
  if (e.family != EngineFamily::SequentCalculator) throw Error(ErrorCode::UnknownEngine, e.id + " is not a calculator");
  return hg::calculator_for(e.source);
}

const CounterexampleFinder& EngineRegistry::finder(const EngineEntry& e) const {
  if (e.family != EngineFamily::CounterexampleFinder) throw Error(ErrorCode::UnknownEngine, e.id + " is not a finder");
  return rel_enum();
}

const RhoTranslator& EngineRegistry::translator(const EngineEntry& e) const {
  if (e.family != EngineFamily::RhoTranslator) throw Error(ErrorCode::UnknownEngine, e.id + " is not a translator");
  return rel2fork_translator();
}

}  // namespace hg
