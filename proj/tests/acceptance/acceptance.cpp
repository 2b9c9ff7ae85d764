// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "parlogue/agents/envelope.hpp"
#include "parlogue/cli/ablation.hpp"
#include "parlogue/cli/mutate.hpp"
#include "parlogue/cli/scenario.hpp"
#include "parlogue/compilesvc/client.hpp"
#include "parlogue/compilesvc/socket.hpp"
#include "parlogue/geometry/mesh_io.hpp"
#include "parlogue/geometry/ops.hpp"
#include "parlogue/geometry/tessellate.hpp"
#include "parlogue/geometry/transform.hpp"
#include "parlogue/pdl/checker.hpp"
#include "parlogue/pdl/format.hpp"
#include "parlogue/pdl/interpreter.hpp"
#include "parlogue/pdl/parser.hpp"
#include "parlogue/pipeline/journal.hpp"
#include "parlogue/pipeline/runner.hpp"

using namespace parlogue;
using nlohmann::json;
namespace fs = std::filesystem;
namespace geo = parlogue::geometry;
namespace prm = parlogue::params;

namespace {

using Clock = std::chrono::steady_clock;

/// Collects failed expectations of one criterion.
struct Check {
  std::vector<std::string> failures;

  bool expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
    return ok;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path corpus(const std::string& rel) { return fs::path(PARLOGUE_CORPUS_DIR) / rel; }

pdl::Program parse_or_throw(const std::string& source) {
  auto r = pdl::parse(source);
  if (!r.ok()) throw std::runtime_error("parse failed: " + r.diagnostics[0].message);
  return *r.value;
}

// ---------------------------------------------------------------------------

const char* kRing = "method ring(c: point, major: number, minor: number) -> shape {\n"
                    "  return ellipse(c, major, minor);\n"
                    "}\n";
const char* kRingLogic = "param Count: integer = 3 in [1, 10]\n"
                         "logic {\n"
                         "  for i in range(Count) {\n"
                         "    emit(ring(point(0, 0, 0), 2 + i, 1 + i));\n"
                         "  }\n"
                         "}\n";

Check two_phase_linking() {
  Check c;
  compilesvc::CompileClient compiler;
  auto program = parse_or_throw(kRingLogic);
  auto params = pdl::params_from_program(program);
  pdl::MethodRegistry registry;

  auto before = compiler.compile_logic(kRingLogic, registry, params);
  c.expect(!before.ok(), "logic compiled against an empty registry");
  c.expect(!before.diagnostics.empty() && before.diagnostics[0].code == pdl::code::kUnregisteredMethod,
           "expected E_UNREGISTERED_METHOD before registration");

  auto methods = pdl::parse_methods(kRing);
  if (!c.expect(methods.ok(), "ring method does not parse")) return c;
  auto reg = pdl::register_methods(*methods.value, registry);
  c.expect(reg.ok() && registry.find("ring"), "register_methods failed");

  auto after = compiler.compile_logic(kRingLogic, registry, params);
  c.expect(after.ok(), "identical logic still fails after registration");
  auto out = pdl::evaluate(program, params, registry, geo::ShapeRegistry{}, 0);
  c.expect(out.ok() && out.result->shapes.size() == 3, "linked logic does not evaluate to three rings");
  return c;
}

Check two_squares() {
  Check c;
  auto program = parse_or_throw(slurp(corpus("programs/two_squares.pdl")));
  auto out = pdl::evaluate(program, pdl::params_from_program(program), pdl::MethodRegistry{}, geo::ShapeRegistry{}, 0);
  if (!c.expect(out.ok(), "two_squares does not evaluate")) return c;
  const auto& shapes = out.result->shapes;
  if (!c.expect(shapes.size() == 2, "expected two shapes, got " + std::to_string(shapes.size()))) return c;
  const std::array<std::array<geo::Vec3, 2>, 2> want{{{{{0, 0, 0}, {1, 1, 0}}}, {{{2, 0, 0}, {3, 1, 0}}}}};
  for (std::size_t i = 0; i < 2; ++i) {
    const auto* poly = shapes[i].get_if<geo::Polyline>();
    if (!c.expect(poly && poly->closed, "shape " + std::to_string(i) + " is not a closed polyline")) continue;
    geo::Vec3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
    for (const auto& v : poly->vertices) {
      lo = {std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
      hi = {std::max(hi.x, v.x), std::max(hi.y, v.y), std::max(hi.z, v.z)};
    }
    c.expect(geo::norm(lo - want[i][0]) <= 1e-9 && geo::norm(hi - want[i][1]) <= 1e-9,
             "bounding box of shape " + std::to_string(i) + " is off");
  }
  return c;
}

Check oval_task() {
  Check c;
  // Frozen output of tests/oracles/oval_radii.py (major0 = 2, minor0 = 1, g = 0.5).
  const std::vector<std::pair<int, std::vector<std::pair<double, double>>>> oracle{
      {1, {{2.0, 1.0}}},
      {3, {{2.0, 1.0}, {2.5, 1.5}, {3.0, 2.0}}},
      {7, {{2.0, 1.0}, {2.5, 1.5}, {3.0, 2.0}, {3.5, 2.5}, {4.0, 3.0}, {4.5, 3.5}, {5.0, 4.0}}},
  };
  auto program = parse_or_throw(slurp(corpus("programs/oval.pdl")));
  geo::ShapeRegistry shapes;
  const auto center = shapes.add(geo::make_point({0, 0, 0}));
  pdl::MethodRegistry registry;
  c.expect(pdl::register_methods(program.methods, registry).ok(), "ring does not register");
  auto logic = program;
  logic.methods.clear();
  for (const auto& [count, radii] : oracle) {
    auto params = pdl::params_from_program(program);
    params.apply_update({"OvalCount", std::int64_t{count}, {}, prm::UpdateSource::User}, shapes);
    params.apply_update({"BaseCenter", {}, center, prm::UpdateSource::User}, shapes);
    params.apply_update({"InitialMajorRadius", 2.0, {}, prm::UpdateSource::User}, shapes);
    params.apply_update({"InitialMinorRadius", 1.0, {}, prm::UpdateSource::User}, shapes);
    auto out = pdl::evaluate(logic, params, registry, shapes, 0);
    const std::string tag = "OvalCount=" + std::to_string(count);
    if (!c.expect(out.ok(), tag + ": evaluation failed")) continue;
    std::size_t ellipses = 0;
    for (const auto& s : out.result->shapes) ellipses += s.get_if<geo::Ellipse>() != nullptr;
    if (!c.expect(ellipses == static_cast<std::size_t>(count) && out.result->shapes.size() == ellipses,
                  tag + ": " + std::to_string(ellipses) + " ellipses")) {
      continue;
    }
    for (int i = 0; i < count; ++i) {
      const auto& e = *out.result->shapes[i].get_if<geo::Ellipse>();
      c.expect(std::abs(e.major_radius - radii[i].first) <= 1e-9 && std::abs(e.minor_radius - radii[i].second) <= 1e-9,
               tag + ": radii of ring " + std::to_string(i));
    }
  }
  return c;
}

Check live_update() {
  Check c;
  auto scenario = cli::load_scenario(corpus("scenarios/oval.json"));
  auto session = cli::run_scenario(scenario, {}, PARLOGUE_ASSET_DIR, "oval");
  if (!c.expect(session->state() == pipeline::SessionState::Live, "oval scenario did not reach Live")) return c;
  for (int count : {2, 6, 4}) {
    auto before = session->counters();
    session->update_parameter(pipeline::update_request_from_json(json{{"name", "OvalCount"}, {"value", count}}));
    auto after = session->counters();
    const std::string tag = "OvalCount=" + std::to_string(count) + ": ";
    c.expect(after.evaluations - before.evaluations == 1, tag + "evaluate calls != 1");
    c.expect(after.agent_calls == before.agent_calls, tag + "agent was called");
    c.expect(after.registrations == before.registrations, tag + "methods were registered");
    c.expect(session->artifact() && session->artifact()->meshes.size() == static_cast<std::size_t>(count),
             tag + "artifact ring count");
  }
  return c;
}

Check ablation() {
  Check c;
  auto fixtures = cli::load_ablation_fixtures(corpus("ablation"));
  c.expect(fixtures.size() == 10, "expected ten ablation fixtures");
  cli::AblationOptions opt;
  opt.asset_dir = PARLOGUE_ASSET_DIR;

  opt.mutations = 0;
  opt.configs = {cli::ValidatorConfig::On};
  auto clean = cli::run_ablation(fixtures, opt).summary(cli::ValidatorConfig::On);
  c.expect(clean.total > 0 && clean.end_to_end_ok == clean.total, "clean corpus with review is not 100% Live");

  opt.mutations = 4;
  opt.seed = 1;
  opt.configs = {cli::ValidatorConfig::Off, cli::ValidatorConfig::On};
  auto report = cli::run_ablation(fixtures, opt);
  auto off = report.summary(cli::ValidatorConfig::Off);
  auto on = report.summary(cli::ValidatorConfig::On);
  c.expect(off.total == 40, "mutated corpus is not 40 programs");
  char buf[200];
  std::snprintf(buf, sizeof buf, "off success %.3f, on detection %.3f, on success %.3f", off.success_rate(),
                on.detection_rate(), on.success_rate());
  c.expect(off.success_rate() <= 0.30, std::string("validator off above 30%: ") + buf);
  c.expect(on.injected == 40 && on.detection_rate() == 1.0, std::string("not every fault detected: ") + buf);
  c.expect(on.success_rate() >= 0.90, std::string("validator on below 90%: ") + buf);
  for (const auto& r : report.rows) {
    bool chain = (!r.end_to_end_ok || r.eval_ok) && (!r.eval_ok || r.check_ok) && (!r.check_ok || r.parse_ok);
    c.expect(chain, "stage chain broken for " + r.fixture + " #" + std::to_string(r.mutation));
  }
  c.expect(cli::run_ablation(fixtures, opt).csv() == report.csv(), "CSV differs between identical runs");
  return c;
}

Check protocol_strictness() {
  Check c;
  std::ifstream in(corpus("fixtures/ra_responses.json"));
  auto fixtures = json::parse(in).at("responses");
  std::size_t parsed = 0, rejected = 0, mutants = 0;
  auto reason_of = [](const std::string& raw) -> std::optional<agents::ProtocolReason> {
    try {
      agents::parse_ra_response(raw);
    } catch (const agents::ProtocolError& e) {
      return e.reason();
    }
    return std::nullopt;
  };
  for (const auto& f : fixtures) {
    auto raw = f.get<std::string>();
    if (c.expect(!reason_of(raw), "well-formed fixture rejected: " + raw)) ++parsed;
    auto obj = json::parse(std::string(agents::extract_json(raw)));
    std::vector<std::pair<json, agents::ProtocolReason>> variants;
    for (const char* field : {"type", "text", "parameters"}) {
      json m = obj;
      m.erase(field);
      variants.emplace_back(m, agents::ProtocolReason::MissingField);
    }
    json extra = obj;
    extra["confidence"] = 0.9;
    variants.emplace_back(extra, agents::ProtocolReason::UnknownField);
    json bad = obj;
    bad["type"] = "answer";
    variants.emplace_back(bad, agents::ProtocolReason::BadType);
    bad["type"] = 7;
    variants.emplace_back(bad, agents::ProtocolReason::WrongFieldType);
    for (const auto& [v, want] : variants) {
      ++mutants;
      auto got = reason_of(v.dump());
      if (c.expect(got && *got == want, "mutated envelope not rejected as " + std::string(agents::to_string(want)) +
                                            ": " + v.dump())) {
        ++rejected;
      }
    }
  }
  c.expect(parsed == fixtures.size() && parsed >= 5, "not every well-formed fixture parsed");
  c.expect(rejected == mutants && mutants > 0, "not every mutated envelope was rejected");
  return c;
}

// A pdl-worker child process.
struct WorkerProcess {
  pid_t pid = -1;
  std::uint16_t port = 0;

  WorkerProcess() {
    int fds[2];
    if (pipe(fds) != 0) throw std::runtime_error("pipe failed");
    pid = fork();
    if (pid == 0) {
      dup2(fds[1], STDOUT_FILENO);
      close(fds[0]);
      close(fds[1]);
      execl(PARLOGUE_WORKER_BIN, PARLOGUE_WORKER_BIN, "--listen", "127.0.0.1:0", static_cast<char*>(nullptr));
      _exit(127);
    }
    close(fds[1]);
    std::string line;
    char ch;
    while (read(fds[0], &ch, 1) == 1 && ch != '\n') line += ch;
    close(fds[0]);
    auto colon = line.rfind(':');
    if (colon == std::string::npos) throw std::runtime_error("worker did not report its port: '" + line + "'");
    port = static_cast<std::uint16_t>(std::stoi(line.substr(colon + 1)));
  }

  void kill_now() {
    if (pid <= 0) return;
    ::kill(pid, SIGKILL);
    waitpid(pid, nullptr, 0);
    pid = -1;
  }

  ~WorkerProcess() { kill_now(); }
};

std::string batch_bytes(const compilesvc::MethodBatch& b) {
  return json{{"keys", b.keys}, {"diagnostics", pdl::to_json(b.diagnostics)}}.dump();
}

json session_script(const cli::AblationFixture& f, const agents::CaOutput& candidate) {
  json entries = json::array();
  entries.push_back({{"agent", "reasoner"},
                     {"response", {{"type", "final"}, {"text", f.intent}, {"parameters", f.params}}}});
  entries.push_back({{"agent", "coder"}, {"response", agents::to_json(candidate)}});
  entries.push_back({{"agent", "optimizer"}, {"response", agents::to_json(f.repair)}});
  entries.push_back({{"agent", "optimizer"}, {"response", agents::to_json(f.repair)}});
  return json{{"entries", entries}};
}

Check mode_equivalence() {
  Check c;
  WorkerProcess worker;
  compilesvc::ClientConfig remote_cfg{compilesvc::CompileMode::Remote, "127.0.0.1", worker.port,
                                      std::chrono::milliseconds(2000)};
  compilesvc::CompileClient local;
  compilesvc::CompileClient remote(remote_cfg);

  // The compile-request corpus: every corpus program and ablation candidate,
  // clean and under each mutation operator.
  struct Unit {
    std::string name;
    std::vector<std::string> methods;
    std::string logic;
  };
  std::vector<Unit> units;
  for (const char* p : {"oval", "planar", "skyscraper", "two_squares"}) {
    auto prog = parse_or_throw(slurp(corpus(std::string("programs/") + p + ".pdl")));
    Unit u{p, {}, {}};
    for (const auto& m : prog.methods) u.methods.push_back(pdl::format(m));
    auto logic = prog;
    logic.methods.clear();
    u.logic = pdl::format(logic);
    units.push_back(std::move(u));
  }
  auto fixtures = cli::load_ablation_fixtures(corpus("ablation"));
  for (const auto& f : fixtures) {
    units.push_back({f.name, f.candidate.method_new, f.candidate.logic});
    for (auto op : cli::all_mutation_ops()) {
      auto m = cli::mutate_candidate(f.candidate, op, cli::mutation_seed(0, f.name, 0));
      units.push_back({f.name + "/" + std::string(cli::to_string(op)), m.output.method_new, m.output.logic});
    }
  }
  std::size_t compared = 0;
  for (const auto& u : units) {
    std::vector<pdl::MethodDef> methods;
    bool parsed = true;
    for (const auto& src : u.methods) {
      auto r = pdl::parse_methods(src);
      if (!r.ok()) {
        parsed = false;
        break;
      }
      methods.insert(methods.end(), r.value->begin(), r.value->end());
    }
    pdl::MethodRegistry reg_local, reg_remote;
    if (parsed) {
      auto a = local.compile_methods(methods, reg_local);
      auto b = remote.compile_methods(methods, reg_remote);
      ++compared;
      c.expect(batch_bytes(a) == batch_bytes(b), u.name + ": method batch differs");
    }
    auto prog = pdl::parse(u.logic);
    auto params = prog.ok() ? pdl::params_from_program(*prog.value) : prm::ParamSet{};
    auto r1 = local.compile_logic(u.logic, reg_local, params);
    auto r2 = remote.compile_logic(u.logic, reg_remote, params);
    r1.id = r2.id = 0;
    ++compared;
    c.expect(compilesvc::response_bytes(r1) == compilesvc::response_bytes(r2), u.name + ": logic response differs");
  }
  c.expect(compared >= 50, "compile-request corpus too small: " + std::to_string(compared));
  c.expect(remote.stats().fallbacks == 0, "remote client fell back while the worker was up");

  // Sessions on the remote client; the worker is killed half way through.
  auto shared = std::make_shared<compilesvc::CompileClient>(remote_cfg);
  std::size_t live = 0;
  for (std::size_t i = 0; i < fixtures.size(); ++i) {
    if (i == fixtures.size() / 2) worker.kill_now();
    const auto& f = fixtures[i];
    auto mutant = cli::mutate_candidate(f.candidate, cli::MutationOp::BreakArity, i).output;
    pipeline::SessionConfig cfg;
    cfg.asset_dir = PARLOGUE_ASSET_DIR;
    pipeline::Session s(f.name, cfg, pipeline::scripted_backend(session_script(f, mutant)), shared);
    s.advance(f.intent);
    if (c.expect(s.state() == pipeline::SessionState::Live, f.name + ": session failed")) ++live;
  }
  auto st = shared->stats();
  c.expect(live == fixtures.size(), std::to_string(fixtures.size() - live) + " session failures");
  c.expect(st.remote > 0, "no request reached the worker");
  c.expect(st.fallbacks > 0, "killing the worker caused no fallback");
  return c;
}

geo::Shape random_convex_profile(std::mt19937& rng) {
  std::uniform_int_distribution<int> count(3, 12);
  std::uniform_real_distribution<double> radius(0.5, 3.0);
  std::uniform_real_distribution<double> offset(-5.0, 5.0);
  const int n = count(rng);
  const double r = radius(rng);
  const geo::Vec3 center{offset(rng), offset(rng), offset(rng)};
  std::vector<geo::Vec3> pts;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * i / n;
    pts.push_back(center + geo::Vec3{r * std::cos(a), r * std::sin(a), 0.0});
  }
  return geo::make_polyline(pts, true);
}

long euler(const geo::TriMesh& m) {
  std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (const auto& t : m.triangles) {
    for (int k = 0; k < 3; ++k) edges.insert({std::min(t[k], t[(k + 1) % 3]), std::max(t[k], t[(k + 1) % 3])});
  }
  return static_cast<long>(m.vertices.size()) - static_cast<long>(edges.size()) + static_cast<long>(m.triangles.size());
}

bool ray_cast_contains(const std::vector<geo::Vec3>& poly, double x, double y) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const auto& a = poly[i];
    const auto& b = poly[j];
    if ((a.y > y) != (b.y > y) && x < (b.x - a.x) * (y - a.y) / (b.y - a.y) + a.x) inside = !inside;
  }
  return inside;
}

Check geometry_invariants() {
  Check c;
  std::mt19937 rng(31337);
  for (int trial = 0; trial < 50; ++trial) {
    const auto profile = random_convex_profile(rng);
    const double h = 0.5 + 0.2 * trial;
    const auto solid = geo::make_extrusion(profile, h);
    const auto t = std::to_string(trial);

    const auto m1 = geo::tessellate(solid, 24);
    const auto m2 = geo::tessellate(solid, 24);
    c.expect(m1.same_geometry(m2) && geo::to_obj(m1) == geo::to_obj(m2), "tessellation not deterministic, trial " + t);

    const auto group = geo::make_group({profile, solid, geo::make_ellipse({1, 2, 3}, 2.5, 1.5, {0.3, 0.4, 0.5})});
    c.expect(geo::transform(group, {}, {1, 0, 0}, 0.0, 1.0) == group, "identity transform changed a shape, trial " + t);

    const auto& first = profile.get<geo::Polyline>().vertices.front();
    const auto swept = geo::tessellate(geo::sweep(profile, geo::make_polyline({first, first + geo::Vec3{0, 0, h}}, false)), 24);
    bool same = swept.vertices.size() == m1.vertices.size() && swept.triangles == m1.triangles;
    for (std::size_t i = 0; same && i < swept.vertices.size(); ++i) {
      same = geo::norm(swept.vertices[i] - m1.vertices[i]) <= 1e-9;
    }
    c.expect(same, "straight sweep differs from extrusion, trial " + t);

    c.expect(euler(m1) == 2, "Euler characteristic != 2, trial " + t);
  }
  c.expect(euler(geo::tessellate(geo::make_extrusion(geo::make_ellipse({0, 0, 0}, 2, 1), 3.0), 20)) == 2,
           "capped elliptic extrusion Euler characteristic != 2");

  std::size_t points = 0, inside = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 5 + trial % 10;
    std::vector<geo::Vec3> pts;
    for (int i = 0; i < n; ++i) {
      const double a = 2.0 * std::numbers::pi * i / n;
      const double r = i % 2 == 0 ? 2.0 : 0.7;
      pts.push_back({r * std::cos(a), r * std::sin(a), 0.0});
    }
    const auto spread = geo::distribute_random(geo::make_polyline(pts, true), 200, static_cast<std::uint64_t>(trial));
    for (const auto& child : spread.get<geo::Group>().children) {
      const auto p = child.get<geo::Point>().pos;
      ++points;
      inside += ray_cast_contains(pts, p.x, p.y) && p.z == 0.0;
    }
  }
  c.expect(points == 6000 && inside == points,
           "distribute_random containment " + std::to_string(inside) + "/" + std::to_string(points));
  return c;
}

Check replay_goldens() {
  Check c;
  for (const char* name : {"skyscraper", "planar", "oval"}) {
    const auto journal = corpus(std::string("journals/") + name + ".jsonl");
    std::string recorded;
    for (const auto& rec : pipeline::read_journal_file(journal)) {
      if (rec.at("type") == "event" && rec.at("event").at("kind") == "artifact_updated") {
        recorded = rec.at("event").at("data").at("digest").get<std::string>();
      }
    }
    c.expect(!recorded.empty(), std::string(name) + ": journal records no artifact");

    const std::string cmd = std::string(PARLOGUE_CLI_BIN) + " --set engine.asset_dir=" + PARLOGUE_ASSET_DIR +
                            " replay " + journal.string() + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    if (!c.expect(p != nullptr, "cannot run parlogue replay")) continue;
    std::string out;
    std::array<char, 256> buf;
    while (fgets(buf.data(), buf.size(), p)) out += buf.data();
    int status = pclose(p);
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    c.expect(code == 0, std::string(name) + ": replay exit " + std::to_string(code) + ": " + out);
    c.expect(out == "match " + recorded + "\n", std::string(name) + ": replay printed '" + out + "'");
  }
  return c;
}

struct Criterion {
  const char* id;
  const char* title;
  double budget_s;  // 0 = none
  std::function<Check()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"AC1", "two-phase linking", 1.0, two_phase_linking},
      {"AC2", "two-squares geometry", 0, two_squares},
      {"AC3", "oval task against the radius oracle", 0, oval_task},
      {"AC4", "live update: 1 evaluate, 0 agent calls, 0 registrations", 0, live_update},
      {"AC5", "ablation direction on the 40-program mutation corpus", 60.0, ablation},
      {"AC6", "reasoner envelope strictness", 0, protocol_strictness},
      {"AC7", "remote/in-process equivalence and worker-kill fallback", 0, mode_equivalence},
      {"AC8", "geometry invariants", 30.0, geometry_invariants},
      {"AC9", "golden journal replay", 0, replay_goldens},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    const auto start = Clock::now();
    Check result;
    try {
      result = cr.run();
    } catch (const std::exception& e) {
      result.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (cr.budget_s > 0 && secs > cr.budget_s) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "took %.2f s, budget %.0f s", secs, cr.budget_s);
      result.failures.emplace_back(buf);
    }
    char head[160];
    std::snprintf(head, sizeof head, "%s %s  %s (%.2f s)", cr.id, result.failures.empty() ? "PASS" : "FAIL", cr.title,
                  secs);
    std::cout << head;
    if (!result.failures.empty()) {
      ++failed;
      std::cout << ": " << result.failures.front();
      if (result.failures.size() > 1) std::cout << " (+" << result.failures.size() - 1 << " more)";
    }
    std::cout << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
