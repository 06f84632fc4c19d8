#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bobw/context_model.hpp"
#include "bobw/environment.hpp"
#include "bobw/linalg.hpp"
#include "bobw/policy.hpp"

namespace bobw::harness {

// Carries "<source>:<line>:<column>: <message>" when the position is known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

struct ContextSpec {
  std::string kind = "discrete";  // discrete | scaled_sphere
  std::vector<Vector> points;
  std::vector<double> weights;
  std::optional<double> norm_bound;
  std::size_t dim = 0;
  double radius = 0.0;
};

struct AgentSpec {
  std::string kind = "bobw_real_ftrl";  // bobw_real_ftrl | real_lin_exp3 | uniform
  Beta1Mode beta1_mode = Beta1Mode::corollary;
  IterationSchedule iteration_schedule = IterationSchedule::bias_safe;
  std::optional<double> beta1;
  std::optional<double> eta;
  std::optional<double> gamma;
  std::optional<std::size_t> iterations;
};

// Draws theta_0(a) for each arm uniformly on the sphere of radius `norm` in
// the context dimension, from a stream keyed by `seed` alone.
struct ParamGenerator {
  std::size_t arms = 0;
  std::uint64_t seed = 0;
  double norm = 0.0;
};

std::vector<Vector> generate_base_params(const ParamGenerator& g, std::size_t dim);

struct ExperimentConfig {
  std::string name;
  ContextSpec context;
  EnvironmentSpec environment;
  std::optional<ParamGenerator> param_generator;  // when set, base_params came from it
  std::optional<double> gap;  // claimed Delta*, checked against the support
  AgentSpec agent;
  std::vector<std::size_t> horizons;
  std::size_t seed_count = 1;
  std::uint64_t seed_base = 0;
  std::string output_dir = "out";
  std::size_t continuous_probes = 256;
  std::size_t threads = 0;  // 0: hardware concurrency
  bool export_history = false;  // per-cell JSON of every emitted theta_t(a)
};

// YAML or JSON text. Unknown keys, missing fields and invalid values throw
// ConfigError anchored at the offending node.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

// Sorted-key JSON of every field after defaults are applied. Parsing the
// canonical form yields the same canonical form.
std::string canonical_json(const ExperimentConfig& cfg);
// FNV-1a 64 of canonical_json, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);
std::uint64_t fnv1a64(const std::string& bytes);

ContextModel build_context_model(const ExperimentConfig& cfg);
std::unique_ptr<Agent> build_agent(const ExperimentConfig& cfg, const Environment& env, const ContextModel& model,
                                   std::size_t horizon);

}  // namespace bobw::harness
