#pragma once

#include <cstdint>

#include "offo/problems.hpp"

namespace offo {

/// Relative Gaussian noise on every scalar the oracle returns: v -> v (1 + level z).
struct NoisyOracle {
  const ProblemInstance* inner = nullptr;
  double level = 0.0;
  std::uint64_t seed = 0;
};

/// Standard normal draw fixed by (seed, position, component).
double noise_draw(std::uint64_t seed, std::uint64_t position, std::uint64_t component = 0);

double apply_noise(const NoisyOracle& oracle, double value, std::uint64_t position);

/// Components are consecutive draws of one generator seeded from (seed, position).
VectorXd apply_noise(const NoisyOracle& oracle, const VectorXd& value, std::uint64_t position);

/// Noise on the upper triangle, mirrored, so the result stays symmetric.
MatrixXd apply_noise(const NoisyOracle& oracle, const MatrixXd& value, std::uint64_t position);

/// Per-run evaluation front end: applies noise and counts calls.
/// Every call advances the stream position, so a run replays identically for a fixed seed.
class Oracle {
 public:
  explicit Oracle(const ProblemInstance& problem, double noise_level = 0.0,
                  std::uint64_t seed = 0);

  double value(const VectorXd& x);
  VectorXd gradient(const VectorXd& x);
  MatrixXd hessian(const VectorXd& x);

  /// Noise-free f for instrumentation. Counted separately from value().
  double clean_value(const VectorXd& x);

  const ProblemInstance& problem() const { return *spec_.inner; }
  double noise_level() const { return spec_.level; }

  long value_calls() const { return value_calls_; }
  long gradient_calls() const { return gradient_calls_; }
  long hessian_calls() const { return hessian_calls_; }
  long instrument_calls() const { return instrument_calls_; }

 private:
  NoisyOracle spec_;
  std::uint64_t position_ = 0;
  long value_calls_ = 0;
  long gradient_calls_ = 0;
  long hessian_calls_ = 0;
  long instrument_calls_ = 0;
};

}  // namespace offo
