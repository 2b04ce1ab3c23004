#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "witnesskit/measures.hpp"

namespace witnesskit::cli {

enum class Command { IsoSweep, WitnessCheck, Measure, Bnt, GammaSigns, ChshScan };
enum class Format { Csv, Json };

/// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitNoConvergence = 2;

/// Inclusive grid start:end:step; `end` is included when within half a step.
struct AlphaRange {
  double start = 0.0;
  double end = 0.0;
  double step = 1.0;

  std::vector<double> values() const;
};

/// Parses "x" or "start:end:step". Throws DomainError on malformed input or step <= 0.
AlphaRange parse_alpha(const std::string& text);

struct RunConfig {
  Command command = Command::IsoSweep;
  int d = 2;
  std::optional<AlphaRange> alpha;
  std::optional<double> guess_alpha;     // witness-check; defaults to 1/(d+1)
  std::optional<std::string> state_path; // density JSON instead of --d/--alpha
  ProjectionConfig projection;           // projection.inner carries the solver settings and seed
  std::optional<std::string> output;     // file path; stdout when empty
  Format format = Format::Csv;

  /// Throws DomainError when the alpha grid leaves the positive range for d.
  void validate() const;
};

/// Column order of every measure/sweep CSV.
inline constexpr const char* kMeasureCsvHeader = "d,alpha,D_closed,D_numeric,B,discrepancy,gap,iters";

/// Executes one command, writing results to `out` and one-line diagnostics to
/// `err`. Never throws; failures map to the exit codes above.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Seed used when --seed is absent: WITNESSKIT_SEED if set and numeric, else 0.
std::uint64_t default_seed();

}  // namespace witnesskit::cli
