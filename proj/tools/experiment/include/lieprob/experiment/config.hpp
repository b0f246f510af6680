#pragma once

// Run configuration: INI text with [problem], [model], [sampler], [run],
// [baseline] and [verify] sections. Numbers are written with 17 significant
// digits so save -> load is exact.

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>

#include "lieprob/bayes_solver.hpp"
#include "lieprob/constrained_prior.hpp"

namespace lieprob::experiment {

/// Bad or missing configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// F(u) = sum_k c_k u^k over integer powers k.
struct LaurentProfile {
  std::map<int, double> terms;

  template <class T>
  T operator()(const T& u) const;

  /// "-1:1 1:1" (power:coefficient pairs, whitespace or comma separated).
  static LaurentProfile parse(const std::string& text);
  [[nodiscard]] std::string str() const;
  bool operator==(const LaurentProfile&) const = default;
};

struct ProblemConfig {
  std::string builtin;  ///< Registry name the values came from; informational.
  LaurentProfile F;
  double x_T = 0.0;
  double y0 = 0.0;
  double r_max = 0.0;
  /// y-range of the box used for symmetry sampling.
  double y_min = 0.05;
  double y_max = 5.0;
  bool operator==(const ProblemConfig&) const = default;
};

struct ModelConfig {
  std::size_t n_design = 16;
  /// 0 means kKnotsPerDesignPoint * n_design.
  std::size_t n_knots = 0;
  double kernel_variance = 1.0;
  /// Length scale as a fraction of r_max - r0.
  double lengthscale_factor = 0.3;
  double jitter = kDefaultJitter;
  bool operator==(const ModelConfig&) const = default;
};

struct BaselineConfig {
  std::size_t n = 16;
  double sigma = 1e-3;
  double kernel_variance = 1.0;
  double kernel_lengthscale = 1.0;
  double delta = 0.1;
  bool operator==(const BaselineConfig&) const = default;
};

struct VerifyConfig {
  /// scaling, x_translation, y_translation or rotation.
  std::string field = "scaling";
  std::size_t points = 100;
  std::uint64_t seed = 0;
  bool operator==(const VerifyConfig&) const = default;
};

struct RunConfig {
  ProblemConfig problem;
  ModelConfig model;
  SamplerParams sampler;
  std::uint64_t seed = 0;
  std::string out;
  BaselineConfig baseline;
  VerifyConfig verify;

  /// Knots for a given design size.
  [[nodiscard]] std::size_t knots_for(std::size_t n_design) const;
  /// Throws ConfigError on values outside module preconditions.
  void validate() const;
  bool operator==(const RunConfig& other) const;
};

/// F(u) = 1/u + u, y0 = 0.1, x_T = e, r_max = 1.5, n = 16, seed 0.
inline constexpr const char* kDefaultBuiltin = "paper_sec3";

[[nodiscard]] RunConfig builtin_config(const std::string& name);

/// Parses INI text. `[problem] builtin = name` seeds every field from the
/// registry; keys present in the text override it.
[[nodiscard]] RunConfig parse_config(const std::string& text);
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);
[[nodiscard]] std::string serialize_config(const RunConfig& config);

/// 17 significant digits ("%.17g"); parses back to the same double.
[[nodiscard]] std::string format_double(double value);

// ---------------------------------------------------------------------------

template <class T>
T LaurentProfile::operator()(const T& u) const {
  T acc = u * 0.0;
  for (const auto& [power, coef] : terms) {
    T term = u * 0.0 + 1.0;
    for (int i = 0; i < (power < 0 ? -power : power); ++i) term = term * u;
    acc = acc + (power < 0 ? coef / term : coef * term);
  }
  return acc;
}

}  // namespace lieprob::experiment
