#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "densek/graph.hpp"
#include "densek/solver.hpp"

namespace densek::cli {

enum class Mode { dks, dkbs };

/// Everything one invocation needs. Unset overrides keep the mode defaults
/// (growth 20 / stop 1e-11 for dks, 10 / 1e-15 for dkbs).
struct RunSpec {
  std::string input;
  EdgeFormat format = EdgeFormat::snap;
  Mode mode = Mode::dks;
  std::vector<std::size_t> k;   ///< dks sweep
  std::vector<std::size_t> k1;  ///< dkbs
  std::vector<std::size_t> k2;
  std::vector<std::string> methods;

  std::optional<double> lambda0;
  std::optional<double> lambda_growth;
  std::optional<std::size_t> max_iter;
  std::optional<double> stop_tol;
  std::optional<double> c1;
  std::optional<double> c2;
  std::optional<ExtrapolationMode> extrapolation;

  std::string out;        ///< empty: stdout
  std::string trace_out;  ///< empty: no trace
  std::size_t jobs = 1;
  std::uint64_t seed = 0;
};

inline constexpr const char* kCsvHeader =
    "dataset,n,m,mode,k1,k2,method,density,edges_inside,runtime_ms,iterations,"
    "converged_by,distance_to_binary,seed";

/// Config actually used for a spec: mode defaults plus overrides.
SolverConfig solver_config(const RunSpec& spec);

/// Checks what can be checked before loading. Throws InvalidArgument.
void validate(const RunSpec& spec);

/// Loads, preprocesses and runs every (method, k) cell. Returns the process
/// exit code: 0 on success, 1 if any cell failed, 2 on input or usage errors
/// (in which case nothing is written).
int run(const RunSpec& spec);

/// Same, writing CSV to `csv` instead of spec.out.
int run(const RunSpec& spec, std::ostream& csv);

}  // namespace densek::cli
