#include <doctest.h>

#include <sys/socket.h>

#include <fstream>
#include <sstream>
#include <thread>

#include "parlogue/compilesvc/client.hpp"
#include "parlogue/compilesvc/compiler.hpp"
#include "parlogue/compilesvc/worker.hpp"
#include "parlogue/pdl/format.hpp"
#include "parlogue/pdl/parser.hpp"

using namespace parlogue::compilesvc;
using nlohmann::json;
namespace pdl = parlogue::pdl;
using namespace std::chrono_literals;

namespace {

std::string corpus(const std::string& rel) {
  std::ifstream in(std::string(PARLOGUE_CORPUS_DIR) + "/" + rel);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kSquare = "method sq(s: number) -> shape {\n  return rect(point(0, 0, 0), s, s);\n}\n";
const std::string kPair = "method pair(s: number) -> list {\n  return [sq(s), translate(sq(s), 2, 0, 0)];\n}\n";

std::string hex(std::string_view bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (unsigned char c : bytes) {
    out += digits[c >> 4];
    out += digits[c & 15];
  }
  return out;
}

json read_json_frame(int fd) {
  std::string payload;
  REQUIRE(read_frame(fd, payload, 2000ms, 2000ms) == ReadStatus::Ok);
  return json::parse(payload);
}

void send_json(int fd, const json& j) { REQUIRE(write_all(fd, encode_frame(j), 2000ms)); }

struct RunningWorker {
  Worker worker{WorkerConfig{}};
  RunningWorker() { worker.start(); }
  ClientConfig remote() const { return {CompileMode::Remote, "127.0.0.1", worker.port(), 2000ms}; }
};

pdl::MethodRegistry registry_with(const std::string& source) {
  pdl::MethodRegistry reg;
  auto ms = pdl::parse_methods(source);
  REQUIRE(ms.ok());
  REQUIRE(pdl::register_methods(*ms.value, reg).ok());
  return reg;
}

}  // namespace

TEST_CASE("frame encoding") {
  auto f = encode_frame(json{{"id", 1}});
  CHECK(hex(f) == "00000008" + hex(R"({"id":1})"));
  const unsigned char header[4] = {0x01, 0x02, 0x03, 0x04};
  CHECK(decode_length(header) == 0x01020304u);

  CompileRequest req{7, UnitKind::Logic, "logic {}", {"k1", "k2"}, pdl::params_from_program(*pdl::parse("param A: number = 1\nlogic {}").value)};
  CHECK(request_from_json(to_json(req)) == req);
  CHECK(to_json(req).dump().find(R"("kind":"logic")") != std::string::npos);
  CompileResponse resp{7, CompileStatus::Ok, "abc", {}};
  CHECK(response_from_json(to_json(resp)) == resp);
  CHECK(to_json(resp).dump() == R"({"diagnostics":[],"id":7,"key":"abc","status":"ok"})");
  CHECK_THROWS_AS(request_from_json(json{{"id", 1}, {"kind", "blob"}, {"source", ""}, {"deps", json::array()}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(request_from_json(json{{"id", 1}}), std::invalid_argument);
  CHECK_THROWS_AS(response_from_json(json{{"id", 1}, {"status", "maybe"}, {"diagnostics", json::array()}}),
                  std::invalid_argument);
  auto err = protocol_error("bad");
  CHECK(err.id == 0);
  CHECK(err.diagnostics[0].code == pdl::code::kProtocol);
}

TEST_CASE("compile_unit") {
  pdl::MethodRegistry empty;
  auto lookup = registry_lookup(empty);
  CompileRequest m{1, UnitKind::Method, kSquare, {}, std::nullopt};
  auto a = compile_unit(m, lookup);
  REQUIRE(a.ok());
  CHECK(compile_unit(m, lookup) == a);

  auto reg = registry_with(kSquare);
  CHECK(*a.key == reg.find("sq")->key);

  // Broken source fails with exactly the local parser's diagnostics.
  CompileRequest broken{2, UnitKind::Method, "method sq(s: number) -> shape { return rect(; }", {}, std::nullopt};
  auto b = compile_unit(broken, lookup);
  CHECK(!b.ok());
  CHECK(b.diagnostics == pdl::parse_methods(broken.source).diagnostics);

  CompileRequest two{3, UnitKind::Method, kSquare + "method other() -> number { return 1; }", {}, std::nullopt};
  auto t = compile_unit(two, lookup);
  REQUIRE(!t.ok());
  CHECK(t.diagnostics[0].code == pdl::code::kSyntax);

  // A method may only call what its deps provide.
  CompileRequest pair{4, UnitKind::Method, kPair, {}, std::nullopt};
  auto p = compile_unit(pair, registry_lookup(reg));
  REQUIRE(!p.ok());
  CHECK(p.diagnostics[0].code == pdl::code::kUnregisteredMethod);
  pair.deps = {*a.key};
  CHECK(compile_unit(pair, registry_lookup(reg)).ok());

  CompileRequest logic{5, UnitKind::Logic, "logic { emit(sq(1)); }", {}, std::nullopt};
  auto l = compile_unit(logic, registry_lookup(reg));
  REQUIRE(!l.ok());
  CHECK(l.diagnostics[0].code == pdl::code::kUnregisteredMethod);
  CHECK(l.diagnostics[0].span.line == 1);
  CHECK(l.diagnostics[0].span.col == 14);
  logic.deps = {*a.key};
  CHECK(compile_unit(logic, registry_lookup(reg)).ok());

  logic.deps = {"0000"};
  auto unknown = compile_unit(logic, registry_lookup(reg));
  REQUIRE(!unknown.ok());
  CHECK(unknown.diagnostics[0].code == pdl::code::kUnregisteredMethod);

  // A source that does not hash to its key is refused.
  auto lying = [&](std::string_view) -> std::optional<std::string> { return std::string("method sq(s: number) -> shape { return rect(point(1, 0, 0), s, s); }"); };
  logic.deps = {*a.key};
  auto lie = compile_unit(logic, lying);
  REQUIRE(!lie.ok());
  CHECK(lie.diagnostics[0].code == pdl::code::kProtocol);

  // Session params drive the parameter checks.
  CompileRequest with_params{6, UnitKind::Logic, "param A: number = 1\nlogic { emit(sq(A)); }", {*a.key},
                             parlogue::params::ParamSet{}};
  auto wp = compile_unit(with_params, registry_lookup(reg));
  REQUIRE(!wp.ok());
  CHECK(wp.diagnostics[0].code == pdl::code::kParamMissing);
  with_params.params.reset();
  CHECK(compile_unit(with_params, registry_lookup(reg)).ok());
}

TEST_CASE("worker caches identical requests") {
  RunningWorker w;
  auto fd = connect_tcp("127.0.0.1", w.worker.port(), 2000ms);
  std::string first;
  for (int i = 1; i <= 100; ++i) {
    send_json(fd.get(), to_json(CompileRequest{static_cast<std::uint64_t>(i), UnitKind::Method, kSquare, {}, std::nullopt}));
    auto r = response_from_json(read_json_frame(fd.get()));
    CHECK(r.id == static_cast<std::uint64_t>(i));
    REQUIRE(r.ok());
    r.id = 0;
    if (i == 1) first = response_bytes(r);
    CHECK(response_bytes(r) == first);
  }
  auto st = w.worker.stats();
  CHECK(st.requests == 100);
  CHECK(st.compiles == 1);
  CHECK(st.cache_hits >= 99);
}

TEST_CASE("worker fetches missing dependency sources") {
  RunningWorker w;
  auto reg = registry_with(kSquare + kPair);
  auto deps = dependency_closure(reg, {"pair"});
  REQUIRE(deps.size() == 2);

  auto fd = connect_tcp("127.0.0.1", w.worker.port(), 2000ms);
  send_json(fd.get(), to_json(CompileRequest{41, UnitKind::Logic, "logic { emit(pair(1)); }", deps, std::nullopt}));
  auto fetch = read_json_frame(fd.get());
  CHECK(fetch["kind"] == "fetch");
  CHECK(fetch["id"] == 41);
  CHECK(fetch["keys"].get<std::vector<std::string>>() == deps);
  std::vector<MethodSource> sources;
  for (const auto& k : deps) sources.push_back({k, reg.find_by_key(k)->source});
  send_json(fd.get(), sources_frame(41, sources));
  auto r = response_from_json(read_json_frame(fd.get()));
  CHECK(r.id == 41);
  CHECK(r.ok());

  // Now cached: no further fetch for another unit using the same keys.
  send_json(fd.get(), to_json(CompileRequest{42, UnitKind::Logic, "logic { emit(sq(2)); emit(pair(3)); }", deps, std::nullopt}));
  auto r2 = read_json_frame(fd.get());
  CHECK(r2.value("kind", "") != "fetch");
  CHECK(response_from_json(r2).ok());
  CHECK(w.worker.stats().fetches == 1);

  // A request pipelined while the worker waits for sources is answered after.
  auto other = registry_with("method tri() -> shape { return closed_polyline([point(0, 0, 0), point(1, 0, 0), point(0, 1, 0)]); }");
  auto tri_keys = dependency_closure(other, {"tri"});
  send_json(fd.get(), to_json(CompileRequest{50, UnitKind::Logic, "logic { emit(tri()); }", tri_keys, std::nullopt}));
  send_json(fd.get(), to_json(CompileRequest{51, UnitKind::Method, kSquare, {}, std::nullopt}));
  auto f2 = read_json_frame(fd.get());
  REQUIRE(f2["kind"] == "fetch");
  send_json(fd.get(), sources_frame(50, {{tri_keys[0], other.find("tri")->source}}));
  CHECK(response_from_json(read_json_frame(fd.get())).id == 50);
  CHECK(response_from_json(read_json_frame(fd.get())).id == 51);
}

TEST_CASE("worker protocol violations") {
  RunningWorker w;
  {
    auto fd = connect_tcp("127.0.0.1", w.worker.port(), 2000ms);
    std::string junk = "not json";
    std::string frame = encode_frame(json::object());
    frame = frame.substr(0, 3) + static_cast<char>(junk.size()) + junk;
    REQUIRE(write_all(fd.get(), frame, 2000ms));
    auto err = response_from_json(read_json_frame(fd.get()));
    CHECK(err.id == 0);
    CHECK(!err.ok());
    CHECK(err.diagnostics[0].code == pdl::code::kProtocol);
    // Same connection keeps working after a readable but malformed frame.
    send_json(fd.get(), json{{"id", 3}, {"kind", "method"}});
    CHECK(response_from_json(read_json_frame(fd.get())).id == 0);
    send_json(fd.get(), to_json(CompileRequest{9, UnitKind::Method, kSquare, {}, std::nullopt}));
    CHECK(response_from_json(read_json_frame(fd.get())).id == 9);
  }
  {
    // Truncated: the header promises more than arrives.
    auto fd = connect_tcp("127.0.0.1", w.worker.port(), 2000ms);
    std::string frame = encode_frame(to_json(CompileRequest{1, UnitKind::Method, kSquare, {}, std::nullopt}));
    REQUIRE(write_all(fd.get(), frame.substr(0, frame.size() / 2), 2000ms));
    ::shutdown(fd.get(), SHUT_WR);
    auto err = response_from_json(read_json_frame(fd.get()));
    CHECK(err.id == 0);
    std::string rest;
    CHECK(read_frame(fd.get(), rest, 2000ms, 2000ms) == ReadStatus::Closed);
  }
  {
    auto fd = connect_tcp("127.0.0.1", w.worker.port(), 2000ms);
    const char huge[4] = {'\x7f', '\xff', '\xff', '\xff'};
    REQUIRE(write_all(fd.get(), std::string_view(huge, 4), 2000ms));
    auto err = response_from_json(read_json_frame(fd.get()));
    CHECK(err.id == 0);
    std::string rest;
    CHECK(read_frame(fd.get(), rest, 2000ms, 2000ms) == ReadStatus::Closed);
  }
  // Still serving new connections.
  CompileClient c(w.remote());
  CHECK(c.compile_remote({5, UnitKind::Method, kSquare, {}, std::nullopt}, {}).ok());
  CHECK(w.worker.stats().protocol_errors == 4);
}

TEST_CASE("concurrent logic requests") {
  RunningWorker w;
  auto reg_a = registry_with(kSquare);
  auto reg_b = registry_with("method dot() -> point { return point(1, 2, 3); }");
  auto run = [&](const pdl::MethodRegistry& reg, std::string logic, std::vector<std::string> callees, bool& ok) {
    CompileClient c(w.remote());
    ok = true;
    for (int i = 0; i < 20; ++i) {
      auto r = c.compile_remote({static_cast<std::uint64_t>(i + 1), UnitKind::Logic, logic, dependency_closure(reg, callees), std::nullopt}, reg);
      ok = ok && r.ok() && r.id == static_cast<std::uint64_t>(i + 1);
    }
  };
  bool ok_a = false, ok_b = false;
  std::thread ta([&] { run(reg_a, "logic { emit(sq(1)); }", {"sq"}, ok_a); });
  std::thread tb([&] { run(reg_b, "logic { emit(dot()); }", {"dot"}, ok_b); });
  ta.join();
  tb.join();
  CHECK(ok_a);
  CHECK(ok_b);
}

TEST_CASE("remote and in-process responses are identical") {
  std::vector<std::string> programs = {corpus("programs/oval.pdl"), corpus("programs/skyscraper.pdl"),
                                       corpus("programs/planar.pdl"), corpus("programs/two_squares.pdl")};
  RunningWorker w;
  CompileClient local;
  CompileClient remote(w.remote());
  std::size_t compared = 0;
  for (const auto& src : programs) {
    auto prog = pdl::parse(src);
    REQUIRE(prog.ok());
    // Methods alone, then logic against them, plus broken variants.
    pdl::MethodRegistry reg_local, reg_remote;
    auto a = local.compile_methods(prog.value->methods, reg_local);
    auto b = remote.compile_methods(prog.value->methods, reg_remote);
    CHECK(a.keys == b.keys);
    CHECK(a.diagnostics == b.diagnostics);
    auto logic_only = *prog.value;
    logic_only.methods.clear();
    auto logic_src = pdl::format(logic_only);
    auto ps = pdl::params_from_program(*prog.value);
    std::vector<std::string> variants = {logic_src, logic_src + "}", logic_src.substr(0, logic_src.size() / 2)};
    if (!prog.value->methods.empty()) variants.push_back(pdl::format(logic_only));
    for (const auto& v : variants) {
      auto r1 = local.compile_logic(v, reg_local, ps);
      auto r2 = remote.compile_logic(v, reg_remote, ps);
      r1.id = r2.id = 0;
      CHECK(response_bytes(r1) == response_bytes(r2));
      ++compared;
    }
    // Logic against an empty registry: unresolved methods.
    pdl::MethodRegistry none;
    auto r1 = local.compile_logic(logic_src, none, ps);
    auto r2 = remote.compile_logic(logic_src, none, ps);
    r1.id = r2.id = 0;
    CHECK(response_bytes(r1) == response_bytes(r2));
    CHECK(r1.ok() == prog.value->methods.empty());
  }
  CHECK(compared >= 12);
  CHECK(remote.stats().fallbacks == 0);
  CHECK(remote.stats().remote > 0);
  CHECK(local.stats().remote == 0);
}

TEST_CASE("compile_methods") {
  CompileClient c;
  auto ms = pdl::parse_methods(kPair + kSquare);
  REQUIRE(ms.ok());
  pdl::MethodRegistry reg;
  auto batch = c.compile_methods(*ms.value, reg);
  REQUIRE(batch.ok());
  REQUIRE(batch.keys.size() == 2);
  auto expected = registry_with(kSquare + kPair);
  CHECK(batch.keys[0] == expected.find("pair")->key);
  CHECK(batch.keys[1] == expected.find("sq")->key);
  CHECK(reg.size() == 2);

  // Re-registering is a no-op with the same keys.
  auto again = c.compile_methods(*ms.value, reg);
  CHECK(again.keys == batch.keys);
  CHECK(reg.size() == 2);

  // Mutual recursion fails and leaves the registry alone.
  auto rec = pdl::parse_methods(
      "method f(n: number) -> number { return g(n); }\nmethod g(n: number) -> number { return f(n); }\n"
      "method h() -> number { return 1; }");
  REQUIRE(rec.ok());
  auto r = c.compile_methods(*rec.value, reg);
  REQUIRE(!r.ok());
  CHECK(r.diagnostics[0].code == pdl::code::kRecursion);
  CHECK(reg.size() == 2);
  CHECK(reg.find("h") == nullptr);

  // A changed body under a registered name.
  auto clash = pdl::parse_methods("method sq(s: number) -> shape { return rect(point(1, 1, 0), s, s); }");
  auto cl = c.compile_methods(*clash.value, reg);
  REQUIRE(!cl.ok());
  CHECK(cl.diagnostics[0].code == pdl::code::kDuplicateMethod);
}

TEST_CASE("fallback when the worker goes away") {
  auto w = std::make_unique<RunningWorker>();
  auto cfg = w->remote();
  CompileClient c(cfg);
  auto ms = pdl::parse_methods(kSquare + kPair);
  pdl::MethodRegistry reg;
  REQUIRE(c.compile_methods(*ms.value, reg).ok());
  auto before = c.compile_logic("logic { emit(pair(1)); }", reg, {});
  REQUIRE(before.ok());
  CHECK(c.stats().fallbacks == 0);

  w.reset();
  auto during = c.compile_logic("logic { emit(pair(1)); }", reg, {});
  CHECK(during.ok());
  auto st = c.stats();
  CHECK(st.fallbacks == 1);
  REQUIRE(st.transport.size() == 1);
  CHECK(st.transport[0].code == pdl::code::kTransport);
  auto direct = c.compile_remote({99, UnitKind::Method, kSquare, {}, std::nullopt}, reg);
  REQUIRE(!direct.ok());
  CHECK(direct.diagnostics[0].code == pdl::code::kTransport);

  // A fresh worker on the same port gives the same answers.
  Worker fresh(WorkerConfig{"127.0.0.1", cfg.port});
  fresh.start();
  auto after = c.compile_logic("logic { emit(pair(1)); }", reg, {});
  before.id = after.id = 0;
  CHECK(response_bytes(after) == response_bytes(before));
  CHECK(c.stats().fallbacks == 1);
  CHECK(fresh.stats().fetches == 1);
}

TEST_CASE("lru cache") {
  LruCache<int> cache(2);
  cache.put("a", 1);
  cache.put("b", 2);
  CHECK(cache.get("a") == 1);
  cache.put("c", 3);
  CHECK(!cache.get("b"));
  CHECK(cache.get("a") == 1);
  CHECK(cache.get("c") == 3);
  CHECK(cache.size() == 2);
  CHECK(parse_host_port("localhost:7070") == std::pair<std::string, std::uint16_t>{"localhost", 7070});
  CHECK_THROWS_AS(parse_host_port("nohost"), std::invalid_argument);
  CHECK_THROWS_AS(parse_host_port("h:99999"), std::invalid_argument);
  CHECK(compile_mode_from_string("remote") == CompileMode::Remote);
  CHECK_THROWS_AS(compile_mode_from_string("cloud"), std::invalid_argument);
}
