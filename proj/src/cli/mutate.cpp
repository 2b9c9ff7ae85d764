#include "parlogue/cli/mutate.hpp"

#include <random>
#include <set>

#include "parlogue/pdl/builtins.hpp"
#include "parlogue/pdl/lexer.hpp"
#include "parlogue/pdl/parser.hpp"

namespace parlogue::cli {

using nlohmann::json;
using pdl::Tok;
using pdl::Token;

std::string_view to_string(MutationOp op) {
  switch (op) {
    case MutationOp::RenameIdent: return "rename_ident";
    case MutationOp::BreakArity: return "break_arity";
    case MutationOp::DropParam: return "drop_param";
    case MutationOp::CorruptToken: return "corrupt_token";
  }
  return "?";
}

MutationOp mutation_op_from_string(std::string_view s) {
  for (auto op : all_mutation_ops()) {
    if (to_string(op) == s) return op;
  }
  throw std::invalid_argument("unknown mutation operator '" + std::string(s) + "'");
}

const std::vector<MutationOp>& all_mutation_ops() {
  static const std::vector<MutationOp> ops = {MutationOp::RenameIdent, MutationOp::BreakArity, MutationOp::DropParam,
                                              MutationOp::CorruptToken};
  return ops;
}

json to_json(const Mutation& m) {
  return json{{"op", to_string(m.op)},
              {"unit", m.unit},
              {"span", {{"line", m.span.line}, {"col", m.span.col}, {"len", m.span.len}, {"offset", m.span.offset}}},
              {"before", m.before},
              {"after", m.after},
              {"expected_code", m.expected_code}};
}

namespace {

// Replace [begin, end) of the unit with `insert`.
struct Site {
  pdl::Span span;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string insert;
};

std::string_view expected_code(MutationOp op) {
  switch (op) {
    case MutationOp::RenameIdent:
    case MutationOp::DropParam: return pdl::code::kUnknownIdent;
    case MutationOp::BreakArity: return pdl::code::kArity;
    case MutationOp::CorruptToken: return pdl::code::kSyntax;
  }
  return "";
}

std::vector<Token> tokens_of(std::string_view source) {
  auto lexed = pdl::lex(source);
  if (!lexed.diagnostics.empty()) throw std::invalid_argument("source does not lex: " + lexed.diagnostics[0].message);
  return lexed.tokens;
}

// Method units hold method definitions only; everything else is a program.
std::vector<pdl::Diagnostic> parse_unit(std::string_view source, std::string_view unit) {
  return unit.substr(0, 7) == "method:" ? pdl::parse_methods(source).diagnostics : pdl::parse(source).diagnostics;
}

void require_parses(std::string_view source, std::string_view unit) {
  auto diags = parse_unit(source, unit);
  if (!diags.empty()) throw std::invalid_argument("source does not parse: " + diags[0].message);
}

// An identifier used as a value: not a declaration, a type or a callee.
bool is_reference(const std::vector<Token>& t, std::size_t i) {
  if (t[i].kind != Tok::Ident) return false;
  if (t[i + 1].kind == Tok::LParen || t[i + 1].kind == Tok::Colon) return false;
  if (i == 0) return true;
  switch (t[i - 1].kind) {
    case Tok::Param:
    case Tok::Let:
    case Tok::For:
    case Tok::Method:
    case Tok::Colon:
    case Tok::Arrow: return false;
    default: return true;
  }
}

// A misspelling: the last character dropped, or one appended to a single
// letter, with underscores added until the name is free.
std::string misspell(const std::string& name, const std::set<std::string>& taken) {
  std::string out = name.size() > 1 ? name.substr(0, name.size() - 1) : name + "x";
  while (taken.count(out) || pdl::is_reserved_name(out)) out += "_";
  return out;
}

std::vector<Site> rename_sites(const std::vector<Token>& t, const std::set<std::string>& taken) {
  std::vector<Site> out;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    if (!is_reference(t, i)) continue;
    out.push_back({t[i].span, t[i].span.offset, t[i].span.offset + t[i].span.len, misspell(t[i].text, taken)});
  }
  return out;
}

std::vector<Site> arity_sites(const std::vector<Token>& t) {
  std::vector<Site> out;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    if (t[i].kind != Tok::Ident || t[i + 1].kind != Tok::LParen || t[i].text == "range") continue;
    if (i > 0 && t[i - 1].kind == Tok::Method) continue;
    // Find the matching paren and the last top-level comma.
    int depth = 0;
    std::size_t close = 0;
    std::size_t last_comma = 0;
    for (std::size_t j = i + 1; j < t.size(); ++j) {
      auto k = t[j].kind;
      if (k == Tok::LParen || k == Tok::LBracket) ++depth;
      if (k == Tok::RParen || k == Tok::RBracket) {
        if (--depth == 0) {
          close = j;
          break;
        }
      }
      if (k == Tok::Comma && depth == 1) last_comma = j;
    }
    if (close == 0) continue;
    if (close == i + 2) {
      out.push_back({t[i].span, t[close].span.offset, t[close].span.offset, "0"});
    } else {
      std::size_t from = last_comma ? t[last_comma].span.offset : t[i + 2].span.offset;
      out.push_back({t[i].span, from, t[close].span.offset, ""});
    }
  }
  return out;
}

std::vector<Site> drop_param_sites(const std::vector<Token>& t) {
  std::vector<Site> out;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    if (t[i].kind != Tok::Param || t[i + 1].kind != Tok::Ident) continue;
    const auto& name = t[i + 1].text;
    std::size_t j = i + 1;
    while (t[j].kind != Tok::Param && t[j].kind != Tok::Method && t[j].kind != Tok::Logic && t[j].kind != Tok::End) ++j;
    bool used = false;
    for (std::size_t k = j; k + 1 < t.size() && !used; ++k) used = is_reference(t, k) && t[k].text == name;
    if (!used) continue;
    out.push_back({t[i + 1].span, t[i].span.offset, t[j].span.offset, ""});
  }
  return out;
}

// Only deletions that leave the unit unparseable; a comma before a unary
// minus, for one, still reads as a subtraction.
std::vector<Site> corrupt_sites(const std::vector<Token>& t, std::string_view source, std::string_view unit) {
  std::vector<Site> out;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    auto k = t[i].kind;
    if (k != Tok::Semicolon && k != Tok::RParen && k != Tok::RBrace && k != Tok::Comma && k != Tok::RBracket) continue;
    Site site{t[i].span, t[i].span.offset, t[i].span.offset + t[i].span.len, ""};
    auto broken = std::string(source.substr(0, site.begin)) + std::string(source.substr(site.end));
    if (!parse_unit(broken, unit).empty()) out.push_back(site);
  }
  return out;
}

std::vector<Site> sites_for(std::string_view source, std::string_view unit, MutationOp op,
                            const std::set<std::string>& taken) {
  auto t = tokens_of(source);
  switch (op) {
    case MutationOp::RenameIdent: return rename_sites(t, taken);
    case MutationOp::BreakArity: return arity_sites(t);
    case MutationOp::DropParam: return drop_param_sites(t);
    case MutationOp::CorruptToken: return corrupt_sites(t, source, unit);
  }
  return {};
}

std::set<std::string> identifiers(const std::vector<std::string_view>& sources) {
  std::set<std::string> out;
  for (auto s : sources) {
    for (const auto& tok : tokens_of(s)) {
      if (tok.kind == Tok::Ident) out.insert(tok.text);
    }
  }
  return out;
}

Mutant apply(std::string_view source, const Site& site, MutationOp op, std::string unit) {
  Mutant m;
  m.source = std::string(source.substr(0, site.begin)) + site.insert + std::string(source.substr(site.end));
  m.mutation.op = op;
  m.mutation.unit = std::move(unit);
  m.mutation.span = site.span;
  m.mutation.before = std::string(source.substr(site.begin, site.end - site.begin));
  m.mutation.after = site.insert;
  m.mutation.expected_code = std::string(expected_code(op));
  return m;
}

std::size_t pick(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  return static_cast<std::size_t>(rng() % n);
}

}  // namespace

Mutant mutate_source(std::string_view source, MutationOp op, std::uint64_t seed, std::string unit) {
  require_parses(source, unit);
  auto sites = sites_for(source, unit, op, identifiers({source}));
  if (sites.empty()) throw NoApplicableSite(std::string(to_string(op)) + " has no applicable site");
  return apply(source, sites[pick(seed, sites.size())], op, std::move(unit));
}

MutatedCandidate mutate_candidate(const agents::CaOutput& candidate, MutationOp op, std::uint64_t seed) {
  std::vector<std::string_view> units;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < candidate.method_new.size(); ++i) {
    units.emplace_back(candidate.method_new[i]);
    names.push_back("method:" + std::to_string(i));
  }
  units.emplace_back(candidate.logic);
  names.emplace_back("logic");
  for (std::size_t u = 0; u < units.size(); ++u) require_parses(units[u], names[u]);

  auto taken = identifiers(units);
  std::vector<std::pair<std::size_t, Site>> pool;
  for (std::size_t u = 0; u < units.size(); ++u) {
    for (auto& s : sites_for(units[u], names[u], op, taken)) pool.emplace_back(u, std::move(s));
  }
  if (pool.empty()) throw NoApplicableSite(std::string(to_string(op)) + " has no applicable site");
  const auto& [u, site] = pool[pick(seed, pool.size())];
  auto m = apply(units[u], site, op, names[u]);
  MutatedCandidate out{candidate, m.mutation};
  if (u < candidate.method_new.size()) {
    out.output.method_new[u] = m.source;
  } else {
    out.output.logic = m.source;
  }
  return out;
}

}  // namespace parlogue::cli
