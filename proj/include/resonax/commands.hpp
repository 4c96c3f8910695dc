#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "resonax/lsolve.hpp"
#include "resonax/model.hpp"

namespace resonax {

inline constexpr const char* kVersion = "0.1.0";

/// Process exit codes. Stable across versions.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitSchema = 2,
  kExitValidation = 3,
  kExitSolver = 4,
  kExitIdentity = 5,
};

/// Model plus the optional "grid" {n_points, map_scale} and "solver"
/// {cond_limit, subtraction_tol} blocks of a config file.
struct RunConfig {
  ModelSpec model;
  int n_points = 100;
  double map_scale = 1.0;
  SolverOptions solver;
  std::string digest;  // FNV-1a of the canonical JSON, hex
};

/// Throws SchemaError for a missing file or bad structure, ValidationError
/// for bad values.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

Problem make_problem(const RunConfig& config);

/// Exit code for an exception escaping a command.
int exit_code_for(const std::exception& e);

/// "%.17g", or "null" for non-finite values.
std::string format_number(double x);

struct ScanArgs {
  std::string config;
  std::string sheet;
  std::string region;
  int nx = 40;
  int ny = 40;
  std::string out;     // CSV; stdout when empty
  std::string report;  // optional RunReport JSON
};

struct FindArgs {
  std::string config;
  std::string sheet;  // required unless bound_states
  std::string region;
  int nx = 40;
  int ny = 40;
  int boundary_points = 256;
  bool bound_states = false;
  std::string out;  // JSON; stdout when empty
  std::string report;
};

struct VerifyArgs {
  std::string config;
  int samples = 50;
  std::uint64_t seed = 1;
  bool flip_a_sign = false;  // fault injection for tests
  std::string report;
};

int cmd_validate(const std::string& config, std::ostream& out, std::ostream& err);
int cmd_scan(const ScanArgs& args, std::ostream& out, std::ostream& err);
int cmd_find(const FindArgs& args, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err);

}  // namespace resonax
