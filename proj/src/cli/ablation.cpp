#include "parlogue/cli/ablation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "parlogue/agents/review.hpp"
#include "parlogue/pdl/interpreter.hpp"
#include "parlogue/pdl/parser.hpp"
#include "parlogue/pdl/registry.hpp"
#include "parlogue/pipeline/runner.hpp"

namespace parlogue::cli {

using nlohmann::json;
namespace ag = parlogue::agents;

AblationFixture ablation_fixture_from_json(const json& j) {
  try {
    AblationFixture f;
    f.name = j.at("name").get<std::string>();
    f.family = j.at("family").get<std::string>();
    f.intent = j.at("intent").get<std::string>();
    f.params = j.at("params");
    if (!f.params.is_array()) throw std::invalid_argument("params must be an array");
    f.candidate = ag::parse_ca_output(j.at("candidate").dump());
    f.repair = j.contains("repair") ? ag::parse_ca_output(j.at("repair").dump()) : f.candidate;
    return f;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed ablation fixture: ") + e.what());
  } catch (const ag::ProtocolError& e) {
    throw std::invalid_argument(std::string("malformed ablation candidate: ") + e.what());
  }
}

std::vector<AblationFixture> load_ablation_fixtures(const std::filesystem::path& dir) {
  std::vector<AblationFixture> out;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.path().extension() != ".json") continue;
    std::ifstream in(entry.path());
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw std::invalid_argument(entry.path().string() + " is not valid JSON");
    out.push_back(ablation_fixture_from_json(j));
  }
  if (ec) throw std::invalid_argument("cannot list " + dir.string() + ": " + ec.message());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return out;
}

std::string_view to_string(ValidatorConfig c) { return c == ValidatorConfig::On ? "validator_on" : "validator_off"; }

std::vector<ValidatorConfig> validator_configs_from_string(std::string_view s) {
  if (s == "on") return {ValidatorConfig::On};
  if (s == "off") return {ValidatorConfig::Off};
  if (s == "both") return {ValidatorConfig::Off, ValidatorConfig::On};
  throw std::invalid_argument("validator must be on, off or both, got '" + std::string(s) + "'");
}

std::uint64_t mutation_seed(std::uint64_t seed, std::string_view fixture, int index) {
  // FNV-1a over the name, then a splitmix64 finalizer.
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : fixture) h = (h ^ c) * 1099511628211ULL;
  std::uint64_t z = seed ^ h ^ (static_cast<std::uint64_t>(index) * 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

struct Stages {
  bool parse_ok = false;
  bool check_ok = false;
  bool eval_ok = false;
};

Stages stage(const ag::CaOutput& c, const params::ParamSet& set) {
  Stages s;
  std::vector<pdl::MethodDef> methods;
  for (const auto& src : c.method_new) {
    auto r = pdl::parse_methods(src);
    if (!r.ok()) return s;
    methods.insert(methods.end(), r.value->begin(), r.value->end());
  }
  auto program = pdl::parse(c.logic);
  if (!program.ok()) return s;
  s.parse_ok = true;
  if (!ag::static_review(c, pdl::MethodRegistry{}, set).empty()) return s;
  s.check_ok = true;
  pdl::MethodRegistry registry;
  if (!pdl::register_methods(methods, registry).ok()) return s;
  auto out = pdl::evaluate(*program.value, set, registry, geometry::ShapeRegistry{}, 0);
  s.eval_ok = out.ok() && !out.result->shapes.empty();
  return s;
}

params::ParamSet param_set(const json& specs) {
  params::ParamSet set;
  for (const auto& p : specs) set.declare(params::spec_from_json(p));
  return set;
}


AblationRow run_one(const AblationFixture& f, const ag::CaOutput& candidate, ValidatorConfig config,
                    const AblationOptions& opt, const std::shared_ptr<compilesvc::CompileClient>& compiler,
                    const params::ParamSet& set) {
  json entries = json::array();
  entries.push_back({{"agent", "reasoner"},
                     {"response", {{"type", "final"}, {"text", f.intent}, {"parameters", f.params}}}});
  entries.push_back({{"agent", "coder"}, {"response", ag::to_json(candidate)}});
  if (config == ValidatorConfig::On) {
    for (int i = 0; i < opt.max_review_rounds; ++i) {
      entries.push_back({{"agent", "optimizer"}, {"response", ag::to_json(f.repair)}});
    }
  }
  pipeline::SessionConfig cfg;
  cfg.review = config == ValidatorConfig::On;
  cfg.max_review_rounds = opt.max_review_rounds;
  cfg.asset_dir = opt.asset_dir;
  pipeline::Session session(f.name, cfg, pipeline::scripted_backend(json{{"entries", entries}}), compiler);

  AblationRow row;
  row.config = config;
  try {
    session.advance(f.intent);
  } catch (const std::exception&) {
    // The session state below tells the outcome.
  }
  row.end_to_end_ok = session.state() == pipeline::SessionState::Live;

  const ag::CaOutput* compiled = &candidate;
  ag::CaOutput revised;
  for (const auto& rec : session.journal().records()) {
    if (rec.at("type") != pipeline::record::kVerdict) continue;
    const auto& v = rec.at("verdict");
    row.detected = v.at("status") != "approved";
    if (v.at("status") == "revised") {
      revised = ag::parse_ca_output(v.at("revised_output").dump());
      compiled = &revised;
    }
  }
  auto st = stage(*compiled, set);
  row.parse_ok = st.parse_ok;
  row.check_ok = st.check_ok;
  row.eval_ok = st.eval_ok;
  if (row.end_to_end_ok && !row.eval_ok) {
    // The session and the staged run disagree; that is a harness bug.
    throw std::logic_error(f.name + ": session went Live but the staged evaluation failed");
  }
  return row;
}

std::string rate(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", r);
  return buf;
}

}  // namespace

AblationReport run_ablation(const std::vector<AblationFixture>& fixtures, const AblationOptions& opt) {
  AblationReport report;
  auto compiler = std::make_shared<compilesvc::CompileClient>();
  const auto& ops = all_mutation_ops();
  for (const auto& f : fixtures) {
    auto set = param_set(f.params);
    int runs = std::max(opt.mutations, 1);
    for (int i = 0; i < runs; ++i) {
      ag::CaOutput candidate = f.candidate;
      std::string op = "none";
      std::string code;
      if (opt.mutations > 0) {
        auto seed = mutation_seed(opt.seed, f.name, i);
        bool applied = false;
        for (std::size_t k = 0; k < ops.size() && !applied; ++k) {
          auto o = ops[(static_cast<std::size_t>(i) + k) % ops.size()];
          try {
            auto m = mutate_candidate(f.candidate, o, seed);
            candidate = m.output;
            op = std::string(to_string(o));
            applied = true;
          } catch (const NoApplicableSite&) {
          }
        }
        if (!applied) throw std::invalid_argument("fixture " + f.name + " has no mutation site");
      }
      auto diags = ag::static_review(candidate, pdl::MethodRegistry{}, set);
      if (!diags.empty()) code = diags.front().code;
      for (auto config : opt.configs) {
        auto row = run_one(f, candidate, config, opt, compiler, set);
        row.fixture = f.name;
        row.mutation = i;
        row.op = op;
        row.code = code;
        report.rows.push_back(std::move(row));
      }
    }
  }
  std::sort(report.rows.begin(), report.rows.end(), [](const AblationRow& a, const AblationRow& b) {
    return std::tie(a.fixture, a.mutation, a.config) < std::tie(b.fixture, b.mutation, b.config);
  });
  return report;
}

std::vector<ValidatorConfig> AblationReport::configs() const {
  std::vector<ValidatorConfig> out;
  for (const auto& r : rows) {
    if (std::find(out.begin(), out.end(), r.config) == out.end()) out.push_back(r.config);
  }
  std::sort(out.begin(), out.end());
  return out;
}

ConfigSummary AblationReport::summary(ValidatorConfig c) const {
  ConfigSummary s;
  for (const auto& r : rows) {
    if (r.config != c) continue;
    ++s.total;
    s.parse_ok += r.parse_ok;
    s.check_ok += r.check_ok;
    s.eval_ok += r.eval_ok;
    s.end_to_end_ok += r.end_to_end_ok;
    if (r.op != "none") {
      ++s.injected;
      s.detected += r.detected;
    }
    if (!r.end_to_end_ok) ++s.by_code[r.code.empty() ? "none" : r.code];
  }
  return s;
}

std::string AblationReport::csv() const {
  std::ostringstream out;
  out << "fixture,mutation,op,config,detected,parse_ok,check_ok,eval_ok,end_to_end_ok,code\n";
  for (const auto& r : rows) {
    out << r.fixture << ',' << r.mutation << ',' << r.op << ',' << to_string(r.config) << ',' << r.detected << ','
        << r.parse_ok << ',' << r.check_ok << ',' << r.eval_ok << ',' << r.end_to_end_ok << ',' << r.code << '\n';
  }
  return out.str();
}

std::string AblationReport::table() const {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-14s %6s %6s %6s %6s %6s %8s %8s %8s\n", "config", "total", "parse", "check", "eval",
                "e2e", "success", "injected", "detected");
  out << line;
  for (auto c : configs()) {
    auto s = summary(c);
    std::snprintf(line, sizeof line, "%-14s %6d %6d %6d %6d %6d %8s %8d %8d\n", std::string(to_string(c)).c_str(),
                  s.total, s.parse_ok, s.check_ok, s.eval_ok, s.end_to_end_ok, rate(s.success_rate()).c_str(),
                  s.injected, s.detected);
    out << line;
  }
  return out.str();
}

json AblationReport::summary_json() const {
  json out = json::object();
  for (auto c : configs()) {
    auto s = summary(c);
    out[std::string(to_string(c))] = {{"total", s.total},
                                      {"parse_ok", s.parse_ok},
                                      {"check_ok", s.check_ok},
                                      {"eval_ok", s.eval_ok},
                                      {"end_to_end_ok", s.end_to_end_ok},
                                      {"success_rate", s.success_rate()},
                                      {"injected", s.injected},
                                      {"detected", s.detected},
                                      {"detection_rate", s.detection_rate()},
                                      {"failures_by_code", s.by_code}};
  }
  return out;
}

}  // namespace parlogue::cli
