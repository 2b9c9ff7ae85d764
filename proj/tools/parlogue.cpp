// parlogue: the design-session engine and its offline tools.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "parlogue/cli/ablation.hpp"
#include "parlogue/cli/config.hpp"
#include "parlogue/cli/export.hpp"
#include "parlogue/cli/mutate.hpp"
#include "parlogue/cli/scenario.hpp"
#include "parlogue/geometry/mesh_io.hpp"
#include "parlogue/pipeline/replay.hpp"
#include "parlogue/service/http_api.hpp"

using namespace parlogue;
using nlohmann::json;

namespace {

struct Globals {
  std::string config_file;
  std::vector<std::string> overrides;  // key=value
};

cli::Config load_config(const Globals& g) {
  cli::Config c;
  if (!g.config_file.empty()) cli::merge_config_file(c, g.config_file);
  cli::merge_env(c, [](const char* k) { return std::getenv(k); });
  for (const auto& kv : g.overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw cli::ConfigError("--set expects key=value, got '" + kv + "'");
    c.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return c;
}

bool write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
  return static_cast<bool>(out);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int serve(const cli::Config& c) {
  sigset_t stop;
  sigemptyset(&stop);
  sigaddset(&stop, SIGINT);
  sigaddset(&stop, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop, nullptr);
  std::signal(SIGPIPE, SIG_IGN);

  pipeline::Engine engine(cli::engine_config(c));
  service::HttpApi api(engine, cli::service_config(c));
  api.start();
  std::cout << "parlogue listening on " << c.get("server.host") << ":" << api.port() << std::endl;
  int sig = 0;
  sigwait(&stop, &sig);
  engine.shutdown();
  api.stop();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"parlogue design-session engine"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_file, "settings file ([section] key = value)")->check(CLI::ExistingFile);
  app.add_option("--set", g.overrides, "override one setting, key=value (repeatable)");

  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP service");
  std::string host, data_dir, compiler_mode, compiler_addr;
  int port = -1;
  serve_cmd->add_option("--host", host, "bind address");
  serve_cmd->add_option("--port", port, "bind port, 0 picks a free one");
  serve_cmd->add_option("--data-dir", data_dir, "session journal directory");
  serve_cmd->add_option("--compiler", compiler_mode, "in_process or remote");
  serve_cmd->add_option("--compiler-addr", compiler_addr, "worker host:port");

  auto* replay_cmd = app.add_subcommand("replay", "re-run a journal and compare it with the recording");
  std::string replay_path;
  replay_cmd->add_option("journal", replay_path, "journal.jsonl or a session directory")->required();

  auto* export_cmd = app.add_subcommand("export", "replay a journal and write its final artifact");
  std::string export_path, export_format = "json", export_out;
  export_cmd->add_option("journal", export_path, "journal.jsonl or a session directory")->required();
  export_cmd->add_option("--format", export_format, "json or obj")->check(CLI::IsMember({"json", "obj"}));
  export_cmd->add_option("-o,--out", export_out, "output file (default stdout)");

  auto* record_cmd = app.add_subcommand("record", "run a scripted scenario and keep its journal");
  std::string scenario_path, record_out, record_id = "scenario";
  record_cmd->add_option("scenario", scenario_path, "scenario JSON")->required()->check(CLI::ExistingFile);
  record_cmd->add_option("-o,--out", record_out, "journal to write")->required();
  record_cmd->add_option("--id", record_id, "session id recorded in the journal");

  auto* mutate_cmd = app.add_subcommand("mutate", "inject one static fault into a PDL program");
  std::string mutate_path, mutate_op;
  std::uint64_t mutate_seed = 0;
  bool mutate_json = false;
  mutate_cmd->add_option("program", mutate_path, "PDL source")->required()->check(CLI::ExistingFile);
  mutate_cmd->add_option("--op", mutate_op, "rename_ident, break_arity, drop_param or corrupt_token")->required();
  mutate_cmd->add_option("--seed", mutate_seed, "site choice");
  mutate_cmd->add_flag("--json", mutate_json, "print {source, mutation} instead of the source");

  auto* batch_cmd = app.add_subcommand("batch", "review ablation over the fixture corpus");
  std::string batch_dir = PARLOGUE_DEFAULT_ABLATION_DIR, batch_csv, batch_summary, batch_validator = "both";
  cli::AblationOptions batch_opt;
  batch_cmd->add_option("--fixtures", batch_dir, "directory of ablation fixtures")->check(CLI::ExistingDirectory);
  batch_cmd->add_option("--mutations", batch_opt.mutations, "mutations per fixture, 0 for clean runs")
      ->check(CLI::NonNegativeNumber);
  batch_cmd->add_option("--seed", batch_opt.seed, "mutation seed");
  batch_cmd->add_option("--validator", batch_validator, "review stage: on, off or both")
      ->check(CLI::IsMember({"on", "off", "both"}));
  batch_cmd->add_option("--csv", batch_csv, "per-run results");
  batch_cmd->add_option("--summary", batch_summary, "per-config summary JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    auto config = load_config(g);
    if (*serve_cmd) {
      if (!host.empty()) config.set("server.host", host);
      if (port >= 0) config.set("server.port", std::to_string(port));
      if (!data_dir.empty()) config.set("engine.data_dir", data_dir);
      if (!compiler_mode.empty()) config.set("compiler.mode", compiler_mode);
      if (!compiler_addr.empty()) config.set("compiler.addr", compiler_addr);
      return serve(config);
    }
    const std::filesystem::path assets = config.get("engine.asset_dir");

    if (*replay_cmd) {
      std::filesystem::path p = replay_path;
      if (std::filesystem::is_directory(p)) p /= "journal.jsonl";
      auto r = pipeline::replay_file(p, assets);
      std::cout << (r.status == pipeline::ReplayStatus::Match      ? "match"
                    : r.status == pipeline::ReplayStatus::Mismatch ? "mismatch"
                                                                   : "corrupt")
                << " " << r.digest << "\n";
      if (!r.message.empty()) std::cerr << "replay: " << r.message << "\n";
      return r.exit_code();
    }

    if (*export_cmd) {
      auto r = cli::export_artifact(export_path, cli::export_format_from_string(export_format), assets);
      if (r.status != cli::ExportStatus::Ok) {
        std::cerr << "export: " << r.message << "\n";
        return static_cast<int>(r.status);
      }
      if (export_out.empty()) {
        std::cout << r.body;
      } else if (!write_file(export_out, r.body)) {
        std::cerr << "export: cannot write " << export_out << "\n";
        return 1;
      }
      return 0;
    }

    if (*record_cmd) {
      auto session = cli::run_scenario(cli::load_scenario(scenario_path), record_out, assets, record_id);
      auto art = session->artifact();
      std::cout << pipeline::to_string(session->state()) << " " << (art ? art->digest : "none") << "\n";
      return 0;
    }

    if (*mutate_cmd) {
      auto m = cli::mutate_source(read_file(mutate_path), cli::mutation_op_from_string(mutate_op), mutate_seed);
      if (mutate_json) {
        std::cout << json{{"source", m.source}, {"mutation", cli::to_json(m.mutation)}}.dump(2) << "\n";
      } else {
        std::cout << m.source;
        std::cerr << cli::to_json(m.mutation).dump() << "\n";
      }
      return 0;
    }

    if (*batch_cmd) {
      batch_opt.asset_dir = assets;
      batch_opt.configs = cli::validator_configs_from_string(batch_validator);
      batch_opt.max_review_rounds = config.get_int("session.max_review_rounds");
      auto report = cli::run_ablation(cli::load_ablation_fixtures(batch_dir), batch_opt);
      if (!batch_csv.empty() && !write_file(batch_csv, report.csv())) {
        std::cerr << "batch: cannot write " << batch_csv << "\n";
        return 1;
      }
      if (!batch_summary.empty() && !write_file(batch_summary, report.summary_json().dump(2) + "\n")) {
        std::cerr << "batch: cannot write " << batch_summary << "\n";
        return 1;
      }
      std::cout << report.table();
      return 0;
    }
  } catch (const cli::ConfigError& e) {
    std::cerr << "config: " << e.what() << "\n";
    return 1;
  } catch (const cli::NoApplicableSite& e) {
    std::cerr << "mutate: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "parlogue: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
