#pragma once

#include <json.hpp>

#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace homchar {

inline constexpr const char* kReportSchema = "homchar/1";

/// Process exit codes shared by every command.
enum ExitCode : int {
  kExitOk = 0,
  kExitInvalid = 2,       // parse or validation error
  kExitVerifyFailed = 3,  // nonzero residual where zero is asserted
  kExitCapExceeded = 4,   // resource cap
};

struct ReportOptions {
  std::optional<unsigned> k;  // homomorphism count for constraints, default n-1
  bool real = false;          // add the real-valued specialization note
  std::uint64_t seed = 42;
  unsigned samples = 32;      // oracle sample points
  double tolerance = 1e-9;    // numeric constraint tolerance
};

enum class VerifyMode { Symbolic, Oracle, Both };

/// A finished command: key-sorted JSON, plain-text rendering, exit code.
struct CommandResult {
  nlohmann::json json;
  std::string text;
  int exit_code = kExitOk;
};

/// Split, admissibility check, derived identities, elimination, constraint
/// system, solution families with a numeric witness each, and notes.
CommandResult cmd_analyze(std::string_view equation, const ReportOptions& opts);

/// Symbolic residuals and/or exact field oracles for a candidate file.
/// `bindings_json` follows Bindings::parse_json; missing entries take defaults.
CommandResult cmd_verify(std::string_view equation, std::string_view candidates, VerifyMode mode,
                         std::optional<std::string> bindings_json, const ReportOptions& opts);

/// Symbolic polarization identities of order n.
CommandResult cmd_oracle_polarization(unsigned n);

/// S_N enumeration compared with the block-occupancy fast path.
CommandResult cmd_oracle_bruteforce(std::string_view profile, std::string_view pattern);

/// Exit code for a library exception.
int exit_code_for(const std::exception& e);

/// Runs `fn`, turning library exceptions into an error report.
CommandResult run_guarded(const std::string& command, const std::function<CommandResult()>& fn);

/// JSON text as written by the CLI (two-space indent, trailing newline).
std::string dump_json(const nlohmann::json& j);

}  // namespace homchar
