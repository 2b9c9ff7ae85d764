// Standalone compile worker for the engine's remote compiler mode.

#include <csignal>
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "parlogue/compilesvc/client.hpp"
#include "parlogue/compilesvc/worker.hpp"

using namespace parlogue;

int main(int argc, char** argv) {
  CLI::App app{"PDL compile worker"};
  std::string listen = "127.0.0.1:7070";
  std::size_t cache = 1024;
  int frame_timeout_ms = 5000;
  app.add_option("--listen", listen, "host:port to accept engine connections on (port 0 picks one)")
      ->envname("PARLOGUE_COMPILER_ADDR");
  app.add_option("--cache", cache, "entries kept in each cache")->check(CLI::PositiveNumber);
  app.add_option("--frame-timeout-ms", frame_timeout_ms, "time allowed for a started frame")->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  compilesvc::WorkerConfig cfg;
  try {
    auto [host, port] = compilesvc::parse_host_port(listen);
    cfg.host = host;
    cfg.port = port;
  } catch (const std::exception& e) {
    std::cerr << "pdl_worker: " << e.what() << "\n";
    return 1;
  }
  cfg.cache_capacity = cache;
  cfg.frame_timeout = std::chrono::milliseconds(frame_timeout_ms);

  // Block the stop signals before any thread starts so only sigwait sees them.
  sigset_t stop;
  sigemptyset(&stop);
  sigaddset(&stop, SIGINT);
  sigaddset(&stop, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop, nullptr);
  std::signal(SIGPIPE, SIG_IGN);

  compilesvc::Worker worker(cfg);
  try {
    worker.start();
  } catch (const std::exception& e) {
    std::cerr << "pdl_worker: " << e.what() << "\n";
    return 1;
  }
  std::cout << "pdl_worker listening on " << cfg.host << ":" << worker.port() << std::endl;

  int sig = 0;
  sigwait(&stop, &sig);
  worker.stop();
  auto s = worker.stats();
  std::cerr << "pdl_worker: " << s.requests << " requests, " << s.compiles << " compiles, " << s.cache_hits
            << " cache hits\n";
  return 0;
}
