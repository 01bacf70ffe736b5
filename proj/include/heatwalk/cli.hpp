#pragma once
/**
 * Front-end plumbing shared by the heatwalk binary and the tests: flat
 * key=value config files with flag > file > default precedence, named
 * data presets, problem assembly, and the solve / sweep / histogram /
 * validate commands emitting CSV.
 */

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "heatwalk/estimator.hpp"
#include "heatwalk/exprlang.hpp"
#include "heatwalk/geometry.hpp"

namespace heatwalk::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultSeed = 123456789;

/// All settings as strings, exactly as they arrive from flags or file.
/// Empty optional = not given; defaults apply at resolve time.
struct RawOptions {
  std::optional<std::string> domain, dim, f, f0, preset, t, x, eps, walks, seed, workers, out,
      bins, axis, values;
};

/// Reads a flat key = value file ('#' comments). Unknown keys are config
/// errors. File values fill only the fields the flags left unset.
RawOptions load_config_file(const std::string& path);
void merge_defaults_from(RawOptions& target, const RawOptions& fallback);

struct Options {
  std::string domain_text = "hypercube(3)";
  std::string f_text, f0_text;  // resolved expression strings
  std::string preset;           // hyp1 | hyp2 | eigen | "" (explicit f/f0)
  double t = 1.0;
  std::string x_text = "center";
  double eps = 1e-3;
  std::uint64_t walks = 10'000;
  std::uint64_t seed = kDefaultSeed;
  int workers = 0;
  std::string out_path;  // empty: stdout
  std::size_t bins = 50;
  std::string axis;                  // sweep axis
  std::vector<double> sweep_values;  // empty: per-axis default grid
};

/// Typed view of RawOptions; throws ConfigError on anything malformed.
Options resolve_options(const RawOptions& raw);

struct Problem {
  Domain domain;
  BoundaryData data;
  Point x;
};

/// Builds domain, data and start point, running the f(0,.) = f0
/// compatibility check. Throws ConfigError with an actionable message.
Problem build_problem(const Options& options);

/// The f/f0 expression strings of a named preset for dimension d.
std::pair<std::string, std::string> preset_expressions(const std::string& preset);

int run_solve(const Options& options, std::ostream& out);
int run_sweep(const Options& options, std::ostream& out);
int run_histogram(const Options& options, std::ostream& out);
int run_validate(const Options& options, std::ostream& out, bool corrupt_psi = false);

/// Serializes a double with 17 significant digits.
std::string fmt17(double v);

}  // namespace heatwalk::cli
