#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ergolab/measure_space.hpp"
#include "ergolab/semigroup.hpp"
#include "ergolab/vector_function.hpp"
#include "ergolab/vector_norm.hpp"

namespace ergolab::cli {

/// Thrown by the parser; `key` is the dotted path of the offending entry
/// (empty for file-level problems), `line` is 1-based or 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, std::size_t line, const std::string& message);
  const std::string& key() const { return key_; }
  std::size_t line() const { return line_; }

 private:
  std::string key_;
  std::size_t line_;
};

struct GeometricSpec {
  double start = 1.0;
  double ratio = 2.0;
  int count = 1;
  friend bool operator==(const GeometricSpec&, const GeometricSpec&) = default;
};

/// Either an explicit list or a geometric spec; `values` is always the
/// expanded grid.
struct GridSpec {
  std::vector<double> values;
  std::optional<GeometricSpec> geometric;
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

std::vector<double> expand(const GeometricSpec& spec);

struct SpaceSpec {
  std::string kind = "circle";  // circle | discrete | product
  std::size_t atoms = 0;        // discrete, uniform weights
  std::vector<double> weights;  // discrete, explicit weights
  std::size_t cyclic = 0;       // product
  std::vector<double> inner;    // product
  friend bool operator==(const SpaceSpec&, const SpaceSpec&) = default;
};

struct FlowSpec {
  std::string kind = "rotation";  // identity | rotation | step | shift
  double theta = kGoldenTheta;
  std::vector<std::size_t> map;
  std::size_t shift = 1;
  double h = 1.0;
  friend bool operator==(const FlowSpec&, const FlowSpec&) = default;
};

struct FunctionSpec {
  std::string kind;  // sawtooth | hat | smooth | explicit | atoms | random
  std::size_t dim = 0;
  std::vector<double> slopes, offsets, amplitudes, frequencies, phases;
  std::vector<double> breaks, coeffs, values;
  int degree = 0;
  std::size_t pieces = 4;
  friend bool operator==(const FunctionSpec&, const FunctionSpec&) = default;
};

struct ScenarioConfig {
  std::string name;
  std::vector<std::string> tags;
  SpaceSpec space;
  FlowSpec flow;
  FunctionSpec function;
  std::string norm = "euclidean";
  std::string direction;  // increasing | decreasing
  int max_level = 0;
  GridSpec t_grid, s_grid;
  double p = 2.0;
  double epsilon = 0.5;
  double threshold = 0.1;
  std::optional<double> t_max;
  std::vector<std::string> checks;
  std::uint64_t seed = 0;
  std::size_t families = 10;
  std::size_t members = 5;
  std::size_t cases = 20;

  bool has_tag(const std::string& tag) const;
  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Names accepted in `checks`, in the order `list` prints them.
const std::vector<std::string>& check_names();

ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig parse_config(const std::filesystem::path& path);

/// Canonical key = value text; parse_config_text(echo(c)) == c.
std::string echo(const ScenarioConfig& config);

/// Shortest round-trip decimal; integral values keep a trailing ".0".
std::string format_real(double value);

/// Objects built from a validated config. The function draws from `seed`
/// when its kind is random.
SpacePtr build_space(const ScenarioConfig& config);
Flow build_flow(const ScenarioConfig& config, const SpacePtr& space);
VectorFunction build_function(const ScenarioConfig& config, const SpacePtr& space);
VectorNorm build_norm(const ScenarioConfig& config);
Filtration build_filtration(const ScenarioConfig& config, const SpacePtr& space);

}  // namespace ergolab::cli
