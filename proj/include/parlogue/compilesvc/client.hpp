#pragma once

#include <chrono>
#include <cstdint>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "parlogue/compilesvc/protocol.hpp"
#include "parlogue/compilesvc/socket.hpp"
#include "parlogue/params/params.hpp"
#include "parlogue/pdl/ast.hpp"
#include "parlogue/pdl/registry.hpp"

namespace parlogue::compilesvc {

enum class CompileMode { InProcess, Remote };

std::string_view to_string(CompileMode m);
CompileMode compile_mode_from_string(std::string_view s);  // "in_process" | "remote"

struct ClientConfig {
  CompileMode mode = CompileMode::InProcess;
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
  std::chrono::milliseconds timeout{5000};
};

struct ClientStats {
  std::uint64_t remote = 0;      // answered by the worker
  std::uint64_t in_process = 0;  // answered locally, fallbacks included
  std::uint64_t fallbacks = 0;
  std::vector<pdl::Diagnostic> transport;  // one per fallback
};

/// Outcome of compiling a batch of methods.
struct MethodBatch {
  std::vector<std::string> keys;  // in input order
  std::vector<pdl::Diagnostic> diagnostics;
  bool ok() const { return diagnostics.empty(); }
};

/// Engine side of the compile service. Calls are serialized; one request is
/// in flight at a time.
class CompileClient {
 public:
  explicit CompileClient(ClientConfig config = {});

  /// Remote mode falls back to in-process compilation when the worker cannot
  /// be reached; the fallback is counted and its diagnostic kept in stats.
  /// `known` supplies dependency sources.
  CompileResponse compile(const CompileRequest& request, const pdl::MethodRegistry& known);

  /// The worker alone. Transport problems give Fail with an E_TRANSPORT
  /// diagnostic.
  CompileResponse compile_remote(const CompileRequest& request, const pdl::MethodRegistry& known);

  /// Compiles each method as its own unit, callees first, then links it
  /// into `registry`. All or nothing. Mutually recursive methods are sent
  /// together and fail.
  MethodBatch compile_methods(const std::vector<pdl::MethodDef>& methods, pdl::MethodRegistry& registry);

  /// Checks a logic unit against the registry and the session parameters.
  CompileResponse compile_logic(std::string_view source, const pdl::MethodRegistry& registry,
                                const params::ParamSet& params);

  ClientStats stats() const;
  const ClientConfig& config() const { return config_; }

 private:
  CompileResponse remote_locked(const CompileRequest& request, const pdl::MethodRegistry& known);
  CompileResponse compile_locked(const CompileRequest& request, const pdl::MethodRegistry& known);

  ClientConfig config_;
  mutable std::mutex mu_;
  Fd conn_;
  std::uint64_t next_id_ = 1;
  ClientStats stats_;
};

}  // namespace parlogue::compilesvc
