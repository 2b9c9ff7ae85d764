#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "parlogue/geometry/ops.hpp"
#include "parlogue/pdl/builtins.hpp"
#include "parlogue/pdl/checker.hpp"
#include "parlogue/pdl/format.hpp"
#include "parlogue/pdl/interpreter.hpp"
#include "parlogue/pdl/parser.hpp"

using namespace parlogue::pdl;
namespace geo = parlogue::geometry;
namespace prm = parlogue::params;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), "cannot open " << path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string corpus(const std::string& rel) { return read_file(std::string(PARLOGUE_CORPUS_DIR) + "/" + rel); }

Program parse_ok(std::string_view src) {
  auto r = parse(src);
  INFO(render(r.diagnostics));
  REQUIRE(r.ok());
  return *r.value;
}

std::vector<MethodDef> methods_ok(std::string_view src) {
  auto r = parse_methods(src);
  INFO(render(r.diagnostics));
  REQUIRE(r.ok());
  return *r.value;
}

std::vector<std::string> codes(const std::vector<Diagnostic>& ds) {
  std::vector<std::string> out;
  for (const auto& d : ds) out.push_back(d.code);
  return out;
}

bool has_code(const std::vector<Diagnostic>& ds, std::string_view c) {
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.code == c; });
}

std::vector<Diagnostic> check_alone(const Program& p) {
  return check(p, MethodRegistry{}, params_from_program(p));
}

struct Box {
  geo::Vec3 lo, hi;
};

Box bbox(const std::vector<geo::Vec3>& pts) {
  Box b{pts.front(), pts.front()};
  for (const auto& p : pts) {
    b.lo = {std::min(b.lo.x, p.x), std::min(b.lo.y, p.y), std::min(b.lo.z, p.z)};
    b.hi = {std::max(b.hi.x, p.x), std::max(b.hi.y, p.y), std::max(b.hi.z, p.z)};
  }
  return b;
}

const char* kRingMethod = "method ring(c: point, major: number, minor: number) -> shape {\n"
                          "  return ellipse(c, major, minor);\n"
                          "}\n";

}  // namespace

TEST_CASE("parse: minimal and two squares") {
  const Program minimal = parse_ok("logic { }");
  CHECK(minimal.params.empty());
  CHECK(minimal.methods.empty());
  CHECK(minimal.logic->stmts.empty());

  const Program squares = parse_ok(corpus("programs/two_squares.pdl"));
  const auto emits = std::count_if(squares.logic->stmts.begin(), squares.logic->stmts.end(),
                                   [](const StmtPtr& s) { return std::holds_alternative<Emit>(s->node); });
  CHECK(emits == 2);
}

TEST_CASE("parse: syntax errors carry spans") {
  auto r = parse("logic { emit( }");
  REQUIRE_FALSE(r.ok());
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].code == "E_SYNTAX");
  CHECK(r.diagnostics[0].span.line == 1);
  CHECK(r.diagnostics[0].span.col == 9);  // the `emit` keyword
  CHECK(r.diagnostics[0].span.len == 4);

  auto call = parse("logic {\n  let a = rect(point(0, 0, 0), 1;\n}");
  REQUIRE_FALSE(call.ok());
  CHECK(call.diagnostics[0].span.line == 2);
  CHECK(call.diagnostics[0].span.col == 11);  // `rect`

  for (const char* bad : {"", "logic {", "logic { let = 1; }", "param : number logic {}", "logic { x = ; }",
                          "logic { 1 +; }", "logic { \"open }", "logic { @ }", "logic {} extra",
                          "method m() -> blob { return 1; } logic {}", "logic { for i in span(3) {} }"}) {
    auto res = parse(bad);
    INFO(bad);
    CHECK_FALSE(res.ok());
    REQUIRE(res.diagnostics.size() == 1);
    CHECK(res.diagnostics[0].code == "E_SYNTAX");
    CHECK(res.diagnostics[0].span.offset <= std::string_view(bad).size());
  }
}

TEST_CASE("format: golden file, corpus round trip and idempotence") {
  const Program nested = parse_ok(corpus("format/nested.in.pdl"));
  CHECK(format(nested) == corpus("format/nested.golden.pdl"));

  for (const char* file : {"programs/two_squares.pdl", "programs/oval.pdl", "programs/skyscraper.pdl",
                           "programs/planar.pdl", "format/nested.in.pdl", "format/nested.golden.pdl"}) {
    INFO(file);
    const Program p = parse_ok(corpus(file));
    const std::string once = format(p);
    const Program again = parse_ok(once);
    CHECK(again == p);
    CHECK(format(again) == once);
  }
  // The canonical corpus programs are already in canonical form.
  for (const char* file : {"programs/two_squares.pdl", "programs/oval.pdl", "programs/skyscraper.pdl",
                           "programs/planar.pdl"}) {
    CHECK(format(parse_ok(corpus(file))) == corpus(file));
  }
}

namespace {

// Random program trees for the round-trip property.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  Program program() {
    Program p;
    for (int i = 0, n = pick(3); i < n; ++i) p.params.push_back(param(i));
    for (int i = 0, n = pick(3); i < n; ++i) p.methods.push_back(method(i));
    p.logic = block(3);
    return p;
  }

 private:
  int pick(int n) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }
  std::string name() {
    static const std::vector<std::string> pool{"a", "b", "count", "Radius", "x_1", "_tmp", "ringA", "n2"};
    return pool[pick(static_cast<int>(pool.size()))];
  }
  double number() {
    static const std::vector<double> pool{0, 1, 2.5, 0.1, 1e21, 1e-7, 123.456, 3, 1.0 / 3.0, 6.02e23};
    return pool[pick(static_cast<int>(pool.size()))];
  }

  ParamDecl param(int i) {
    ParamDecl d;
    d.name = "P" + std::to_string(i);
    switch (pick(4)) {
      case 0:
        d.kind.tag = prm::KindTag::Number;
        if (pick(2)) d.default_value = -number();
        if (pick(2)) d.range = prm::Range{-number(), number()};
        break;
      case 1:
        d.kind = prm::ParamKind::choice({"glass", "st\"one", "x\\y"});
        if (pick(2)) d.default_value = std::string("glass");
        break;
      case 2:
        d.kind.tag = prm::KindTag::Boolean;
        if (pick(2)) d.default_value = pick(2) == 0;
        break;
      default: d.kind.tag = prm::KindTag::CurveRef; break;
    }
    return d;
  }

  MethodDef method(int i) {
    MethodDef m;
    m.name = "m" + std::to_string(i);
    for (int k = 0, n = pick(3); k < n; ++k) m.params.push_back({name() + std::to_string(k), TypeName(pick(7)), {}});
    m.return_type = TypeName(pick(7));
    m.body = block(2);
    return m;
  }

  ExprPtr expr(int depth) {
    const int choice = depth <= 0 ? pick(4) : pick(9);
    switch (choice) {
      case 0: return make_expr(NumberLit{number()});
      case 1: return make_expr(BoolLit{pick(2) == 0});
      case 2: return make_expr(StringLit{pick(2) ? "hi" : "q\"uote\\\n"});
      case 3: return make_expr(Ident{name()});
      case 4: return make_expr(Unary{pick(2) ? UnaryOp::Neg : UnaryOp::Not, expr(depth - 1)});
      case 5:
      case 6: return make_expr(Binary{BinaryOp(pick(13)), expr(depth - 1), expr(depth - 1)});
      case 7: {
        std::vector<ExprPtr> args;
        for (int i = 0, n = pick(4); i < n; ++i) args.push_back(expr(depth - 1));
        return make_expr(Call{name(), {}, std::move(args)});
      }
      default:
        if (pick(2)) return make_expr(Index{expr(depth - 1), expr(depth - 1)});
        std::vector<ExprPtr> els;
        for (int i = 0, n = pick(3); i < n; ++i) els.push_back(expr(depth - 1));
        return make_expr(ListLit{std::move(els)});
    }
  }

  Block block(int depth) {
    Block b;
    for (int i = 0, n = pick(4); i < n; ++i) b.stmts.push_back(stmt(depth));
    return b;
  }

  StmtPtr stmt(int depth) {
    switch (depth <= 0 ? pick(5) : pick(8)) {
      case 0: return make_stmt(Let{name(), expr(3)});
      case 1: return make_stmt(Assign{name(), expr(3)});
      case 2: return make_stmt(Emit{expr(3)});
      case 3: return make_stmt(Return{expr(3)});
      case 4: return make_stmt(ExprStmt{expr(3)});
      case 5: return make_stmt(For{name(), pick(2) ? expr(2) : nullptr, expr(2), block(depth - 1)});
      default: {
        std::optional<Block> else_block;
        if (pick(2)) else_block = block(depth - 1);
        return make_stmt(If{expr(3), block(depth - 1), std::move(else_block)});
      }
    }
  }

  std::mt19937_64 rng_;
};

}  // namespace

TEST_CASE("property: parse(format(p)) == p over generated programs") {
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const Program p = Gen(seed).program();
    const std::string text = format(p);
    auto r = parse(text);
    INFO("seed " << seed << "\n" << text << render(r.diagnostics));
    REQUIRE(r.ok());
    CHECK(*r.value == p);
    CHECK(format(*r.value) == text);
  }
}

TEST_CASE("check: two-phase linking") {
  const Program logic = parse_ok(
      "param BaseCenter: point_ref\n"
      "logic {\n  emit(ring(BaseCenter, 2, 1));\n}\n");
  prm::ParamSet params = params_from_program(logic);
  MethodRegistry registry;

  auto before = check(logic, registry, params);
  REQUIRE(before.size() == 1);
  CHECK(before[0].code == "E_UNREGISTERED_METHOD");
  CHECK(before[0].span.line == 3);
  CHECK(before[0].span.col == 8);

  const auto reg = register_methods(methods_ok(kRingMethod), registry);
  REQUIRE(reg.ok());
  CHECK(registry.size() == 1);
  CHECK(check(logic, registry, params).empty());
}

TEST_CASE("check: loft with one profile is an arity error, also at runtime") {
  const Program p = parse_ok(
      "logic {\n"
      "  let p1 = rect(point(0, 0, 0), 1, 1);\n"
      "  emit(loft(p1));\n"
      "}\n");
  const auto ds = check_alone(p);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].code == "E_ARITY");

  const auto out = evaluate(p, prm::ParamSet{}, MethodRegistry{}, geo::ShapeRegistry{}, 0);
  REQUIRE_FALSE(out.ok());
  CHECK(out.diagnostics[0].code == "E_ARITY");

  const Program two = parse_ok(
      "logic {\n"
      "  let p1 = rect(point(0, 0, 0), 1, 1);\n"
      "  emit(loft(p1, translate(p1, 0, 0, 1)));\n"
      "  emit(loft([p1, translate(p1, 0, 0, 2)]));\n"
      "}\n");
  CHECK(check_alone(two).empty());
  CHECK(evaluate(two, prm::ParamSet{}, MethodRegistry{}, geo::ShapeRegistry{}, 0).ok());
}

TEST_CASE("check: static rule table") {
  struct Case {
    const char* source;
    const char* code;
  };
  const Case cases[] = {
      {"logic { emit(nowhere); }", "E_UNKNOWN_IDENT"},
      {"logic { emit(extrude(rect(point(0, 0, 0), 1, 1))); }", "E_ARITY"},
      {"logic { emit(extrude(rect(point(0, 0, 0), 1, 1), true)); }", "E_TYPE"},
      {"logic { let a = 1; let a = 2; }", "E_DUPLICATE_LOCAL"},
      {"logic { let a = 1; for a in range(3) { } }", "E_DUPLICATE_LOCAL"},
      {"logic { let rect = 1; }", "E_RESERVED_NAME"},
      {"method point(a: number) -> number { return a; } logic { }", "E_RESERVED_NAME"},
      {"method f(a: number) -> number { return a; } method f(a: number) -> number { return a; } logic { }",
       "E_DUPLICATE_METHOD"},
      {"method f(a: number) -> number { return f(a); } logic { }", "E_RECURSION"},
      {"method f(a: number) -> number { return g(a); } method g(a: number) -> number { return f(a); } logic { }",
       "E_RECURSION"},
      {"method f(a: number) -> number { if a > 1 { return a; } } logic { }", "E_MISSING_RETURN"},
      {"method f(a: number) -> shape { return a; } logic { }", "E_TYPE"},
      {"logic { return 1; }", "E_RETURN_OUTSIDE_METHOD"},
      {"method f(a: shape) -> shape { emit(a); return a; } logic { }", "E_EMIT_IN_METHOD"},
      {"param H: number = 1\nparam H: number = 2\nlogic { }", "E_DUPLICATE_PARAM"},
      {"param H: number = 1\nlogic { H = 2; }", "E_ASSIGN_PARAM"},
      {"param H: number = 1\nmethod f(a: number) -> number { return H; } logic { }", "E_UNKNOWN_IDENT"},
      {"logic { for i in range(1000001) { } }", "E_LOOP_BOUND"},
      {"param N: integer = 5 in [1, 500000]\nlogic { for i in range(N) { } }", "E_LOOP_BOUND"},
      {"logic { if 1 { } }", "E_TYPE"},
      {"logic { emit(3); }", "E_TYPE"},
      {"logic { let p = point(0, 0, 0); p = rect(p, 1, 1); }", "E_TYPE"},
      {"logic { let s = rect(point(0, 0, 0), 1, 1); emit(s == s); }", "E_TYPE"},
      {"param H: number = 20 in [1, 10]\nlogic { }", "E_PARAM_KIND"},
  };
  for (const auto& c : cases) {
    INFO(c.source);
    const Program p = parse_ok(c.source);
    const auto ds = check_alone(p);
    CHECK(has_code(ds, c.code));
    for (const auto& d : ds) CHECK(d.span.offset <= std::string_view(c.source).size());
  }

  // Session parameter compatibility.
  const Program uses = parse_ok("param H: number\nlogic { emit(extrude(rect(point(0, 0, 0), 1, 1), H)); }");
  CHECK(codes(check(uses, MethodRegistry{}, prm::ParamSet{})) == std::vector<std::string>{"E_PARAM_MISSING"});
  prm::ParamSet wrong;
  prm::ParamSpec flag;
  flag.name = "H";
  flag.kind.tag = prm::KindTag::Boolean;
  wrong.declare(flag);
  CHECK(codes(check(uses, MethodRegistry{}, wrong)) == std::vector<std::string>{"E_PARAM_KIND"});
  CHECK(check_alone(uses).empty());
}

TEST_CASE("register_methods: keys, idempotence, atomicity") {
  MethodRegistry registry;
  const auto ring = methods_ok(kRingMethod);
  const auto first = register_methods(ring, registry);
  REQUIRE(first.ok());
  REQUIRE(first.keys.size() == 1);
  CHECK(first.keys[0].size() == 64);
  CHECK(registry.size() == 1);

  // Same method with different whitespace formats identically.
  const auto second = register_methods(
      methods_ok("method ring(c:point,major:number,minor:number)->shape{return ellipse(c,major,minor);}"), registry);
  REQUIRE(second.ok());
  CHECK(second.keys == first.keys);
  CHECK(registry.size() == 1);
  CHECK(registry.find_by_key(first.keys[0])->source == kRingMethod);

  const auto recursive = register_methods(methods_ok("method loop(a: number) -> number { return loop(a); }"), registry);
  CHECK(codes(recursive.diagnostics) == std::vector<std::string>{"E_RECURSION"});
  CHECK(registry.size() == 1);

  const auto clash = register_methods(
      methods_ok("method ring(c: point, major: number, minor: number) -> shape { return ellipse(c, minor, major); }"),
      registry);
  CHECK(codes(clash.diagnostics) == std::vector<std::string>{"E_DUPLICATE_METHOD"});
  CHECK(registry.size() == 1);

  // One bad method keeps the whole batch out.
  const auto batch = register_methods(methods_ok("method ok1(a: number) -> number { return a; }\n"
                                                 "method bad(a: number) -> number { return nope; }"),
                                      registry);
  CHECK_FALSE(batch.ok());
  CHECK(registry.size() == 1);
  CHECK(registry.find("ok1") == nullptr);

  // Keys cover dependencies: same text, different callee body, different key.
  MethodRegistry r1;
  MethodRegistry r2;
  REQUIRE(register_methods(methods_ok("method base(a: number) -> number { return a; }"), r1).ok());
  REQUIRE(register_methods(methods_ok("method base(a: number) -> number { return a + 1; }"), r2).ok());
  const auto user = methods_ok("method top(a: number) -> number { return base(a) * 2; }");
  const auto k1 = register_methods(user, r1);
  const auto k2 = register_methods(user, r2);
  REQUIRE(k1.ok());
  REQUIRE(k2.ok());
  CHECK(k1.keys != k2.keys);
  CHECK(k1.keys[0] == method_key(user[0], {r1.find("base")->key}));

  // Sibling dependencies inside one batch.
  MethodRegistry r3;
  const auto pair = register_methods(methods_ok("method top(a: number) -> number { return base(a) * 2; }\n"
                                                "method base(a: number) -> number { return a; }"),
                                     r3);
  REQUIRE(pair.ok());
  CHECK(pair.keys[0] == k1.keys[0]);
}

TEST_CASE("evaluate: two squares") {
  const Program p = parse_ok(corpus("programs/two_squares.pdl"));
  REQUIRE(check_alone(p).empty());
  const auto out = evaluate(p, prm::ParamSet{}, MethodRegistry{}, geo::ShapeRegistry{}, 0);
  REQUIRE(out.ok());
  REQUIRE(out.result->shapes.size() == 2);
  const Box expected[] = {{{0, 0, 0}, {1, 1, 0}}, {{2, 0, 0}, {3, 1, 0}}};
  for (int i = 0; i < 2; ++i) {
    const auto* pl = out.result->shapes[i].get_if<geo::Polyline>();
    REQUIRE(pl != nullptr);
    CHECK(pl->closed);
    const Box b = bbox(pl->vertices);
    CHECK(geo::norm(b.lo - expected[i].lo) <= 1e-9);
    CHECK(geo::norm(b.hi - expected[i].hi) <= 1e-9);
  }
  CHECK(out.result->provenance[0].line == 3);
  CHECK(out.result->provenance[1].line == 4);
}

TEST_CASE("evaluate: oval counts match the closed-form oracle") {
  // Values produced by tests/oracles/oval_radii.py (major0 = 2, minor0 = 1, g = 0.5).
  const std::vector<std::pair<int, std::vector<std::pair<double, double>>>> oracle{
      {1, {{2.0, 1.0}}},
      {3, {{2.0, 1.0}, {2.5, 1.5}, {3.0, 2.0}}},
      {7, {{2.0, 1.0}, {2.5, 1.5}, {3.0, 2.0}, {3.5, 2.5}, {4.0, 3.0}, {4.5, 3.5}, {5.0, 4.0}}},
  };
  const Program p = parse_ok(corpus("programs/oval.pdl"));
  geo::ShapeRegistry shapes;
  const auto center = shapes.add(geo::make_point({4, -1, 0}));
  MethodRegistry registry;
  REQUIRE(register_methods(p.methods, registry).ok());
  Program logic_only = p;
  logic_only.methods.clear();

  for (const auto& [count, radii] : oracle) {
    prm::ParamSet params = params_from_program(p);
    params.apply_update({"OvalCount", std::int64_t{count}, {}, prm::UpdateSource::User}, shapes);
    params.apply_update({"BaseCenter", {}, center, prm::UpdateSource::User}, shapes);
    params.apply_update({"InitialMajorRadius", 2.0, {}, prm::UpdateSource::User}, shapes);
    params.apply_update({"InitialMinorRadius", 1.0, {}, prm::UpdateSource::User}, shapes);
    REQUIRE(check(logic_only, registry, params).empty());
    const auto out = evaluate(logic_only, params, registry, shapes, 7);
    REQUIRE(out.ok());
    REQUIRE(out.result->shapes.size() == static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      const auto& e = out.result->shapes[i].get<geo::Ellipse>();
      CHECK(std::abs(e.major_radius - radii[i].first) <= 1e-9);
      CHECK(std::abs(e.minor_radius - radii[i].second) <= 1e-9);
      CHECK(geo::norm(e.center - geo::Vec3{4, -1, 0}) <= 1e-12);
    }
  }
}

TEST_CASE("evaluate: caps, domains and references") {
  const prm::ParamSet none;
  const MethodRegistry reg;
  const geo::ShapeRegistry no_shapes;

  const Program spin = parse_ok("param N: number = 1000000\nlogic { let t = 0; for i in range(N) { t = t + 1; } }");
  CHECK(check_alone(spin).empty());
  const auto spun = evaluate(spin, params_from_program(spin), reg, no_shapes, 0);
  REQUIRE_FALSE(spun.ok());
  CHECK(spun.diagnostics[0].code == "E_CAP_EXCEEDED");

  const Program nested = parse_ok(
      "logic { for i in range(1000) { for j in range(1000) { } } }");
  CHECK(check_alone(nested).empty());
  CHECK(evaluate(nested, none, reg, no_shapes, 0).diagnostics[0].code == "E_CAP_EXCEEDED");

  const Program flood = parse_ok("logic { let p = point(0, 0, 0); for i in range(10001) { emit(p); } }");
  const auto flooded = evaluate(flood, none, reg, no_shapes, 0);
  REQUIRE_FALSE(flooded.ok());
  CHECK(flooded.diagnostics[0].code == "E_CAP_EXCEEDED");
  const Program fits = parse_ok("logic { let p = point(0, 0, 0); for i in range(10000) { emit(p); } }");
  CHECK(evaluate(fits, none, reg, no_shapes, 0).result->shapes.size() == 10000);

  const Program negative = parse_ok("param R: number = 1\nlogic { emit(ellipse(point(0, 0, 0), R - 3, 1)); }");
  CHECK(check_alone(negative).empty());
  CHECK(evaluate(negative, params_from_program(negative), reg, no_shapes, 0).diagnostics[0].code ==
        "E_RUNTIME_DOMAIN");
  CHECK(evaluate(parse_ok("logic { let a = 1 / 0; }"), none, reg, no_shapes, 0).diagnostics[0].code ==
        "E_RUNTIME_DOMAIN");

  geo::ShapeRegistry shapes;
  const auto id = shapes.add(geo::make_point({1, 1, 0}));
  const Program refers = parse_ok("param C: point_ref\nlogic { emit(translate(C, 1, 0, 0)); }");
  prm::ParamSet params = params_from_program(refers);
  params.apply_update({"C", {}, id, prm::UpdateSource::User}, shapes);
  CHECK(evaluate(refers, params, reg, shapes, 0).ok());
  shapes.remove(id);
  CHECK(evaluate(refers, params, reg, shapes, 0).diagnostics[0].code == "E_UNRESOLVED_REF");

  CHECK(evaluate(refers, params_from_program(refers), reg, shapes, 0).diagnostics[0].code == "E_PARAM_MISSING");
}

TEST_CASE("evaluate: determinism and seeding") {
  const Program p = parse_ok(
      "logic {\n"
      "  let region = ellipse(point(0, 0, 0), 5, 3);\n"
      "  emit(distribute_random(region, 50, 11));\n"
      "  emit(array_radial(rect(point(1, 0, 0), 1, 1), 6, point(0, 0, 0)));\n"
      "}\n");
  const auto a = evaluate(p, prm::ParamSet{}, MethodRegistry{}, geo::ShapeRegistry{}, 42);
  const auto b = evaluate(p, prm::ParamSet{}, MethodRegistry{}, geo::ShapeRegistry{}, 42);
  const auto c = evaluate(p, prm::ParamSet{}, MethodRegistry{}, geo::ShapeRegistry{}, 43);
  REQUIRE(a.ok());
  CHECK(*a.result == *b.result);
  CHECK_FALSE(*a.result == *c.result);
  CHECK(a.result->shapes.size() == 56);

  // The points come from the geometry kernel with the mixed seed.
  const auto direct = geo::distribute_random(geo::make_ellipse({0, 0, 0}, 5, 3), 50, mix_seed(42, 11));
  for (int i = 0; i < 50; ++i) CHECK(a.result->shapes[i] == direct.get<geo::Group>().children[i]);
}

TEST_CASE("evaluate: corpus programs with defaults") {
  for (const char* file : {"programs/skyscraper.pdl", "programs/planar.pdl"}) {
    INFO(file);
    const Program p = parse_ok(corpus(file));
    const auto params = params_from_program(p);
    REQUIRE(params.validate_complete().confirmed());
    REQUIRE(check(p, MethodRegistry{}, params).empty());
    const auto out = evaluate(p, params, MethodRegistry{}, geo::ShapeRegistry{}, 1);
    INFO(render(out.diagnostics));
    REQUIRE(out.ok());
    CHECK(!out.result->shapes.empty());
  }
}

TEST_CASE("diagnostics serialize") {
  const Diagnostic d = error("E_TYPE", "bad", Span{3, 4, 5, 0});
  const auto j = to_json(d);
  CHECK(j.dump() == R"({"code":"E_TYPE","message":"bad","severity":"error","span":{"col":4,"len":5,"line":3}})");
  CHECK(diagnostic_from_json(j) == d);
}
