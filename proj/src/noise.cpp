#include "offo/noise.hpp"

#include <random>

namespace offo {

namespace {

std::uint64_t mix(std::uint64_t seed, std::uint64_t position, std::uint64_t component) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(position),
                    static_cast<std::uint32_t>(position >> 32),
                    static_cast<std::uint32_t>(component),
                    static_cast<std::uint32_t>(component >> 32)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

}  // namespace

double noise_draw(std::uint64_t seed, std::uint64_t position, std::uint64_t component) {
  std::mt19937_64 rng(mix(seed, position, component));
  std::normal_distribution<double> normal(0.0, 1.0);
  return normal(rng);
}

double apply_noise(const NoisyOracle& oracle, double value, std::uint64_t position) {
  if (oracle.level == 0.0) return value;
  return value * (1.0 + oracle.level * noise_draw(oracle.seed, position, 0));
}

VectorXd apply_noise(const NoisyOracle& oracle, const VectorXd& value, std::uint64_t position) {
  if (oracle.level == 0.0) return value;
  // One generator per call; components are consecutive draws.
  std::mt19937_64 rng(mix(oracle.seed, position, ~0ULL));
  std::normal_distribution<double> normal(0.0, 1.0);
  VectorXd out(value.size());
  for (Index i = 0; i < value.size(); ++i) {
    out(i) = value(i) * (1.0 + oracle.level * normal(rng));
  }
  return out;
}

MatrixXd apply_noise(const NoisyOracle& oracle, const MatrixXd& value, std::uint64_t position) {
  if (oracle.level == 0.0) return value;
  std::mt19937_64 rng(mix(oracle.seed, position, ~1ULL));
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd out(value.rows(), value.cols());
  for (Index j = 0; j < value.cols(); ++j) {
    for (Index i = 0; i <= j; ++i) {
      out(i, j) = value(i, j) * (1.0 + oracle.level * normal(rng));
      out(j, i) = out(i, j);
    }
  }
  return out;
}

Oracle::Oracle(const ProblemInstance& problem, double noise_level, std::uint64_t seed)
    : spec_{&problem, noise_level, seed} {}

double Oracle::value(const VectorXd& x) {
  ++value_calls_;
  return apply_noise(spec_, spec_.inner->value(x), position_++);
}

VectorXd Oracle::gradient(const VectorXd& x) {
  ++gradient_calls_;
  return apply_noise(spec_, spec_.inner->gradient(x), position_++);
}

MatrixXd Oracle::hessian(const VectorXd& x) {
  ++hessian_calls_;
  return apply_noise(spec_, spec_.inner->hessian(x), position_++);
}

double Oracle::clean_value(const VectorXd& x) {
  ++instrument_calls_;
  return spec_.inner->value(x);
}

}  // namespace offo
