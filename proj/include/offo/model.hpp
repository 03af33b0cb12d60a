#pragma once

#include <deque>
#include <string>

#include "offo/problems.hpp"

namespace offo {

enum class ModelKind { Zero, BBDiag, LBFGS, Exact };

/// Bounded symmetric Hessian approximation B_k with ||B_k|| <= kappa_B.
///
/// The bound is enforced by rescaling the whole operator by kappa_B / ||B|| whenever the
/// raw norm exceeds it. LBFGS keeps the direct (not inverse) approximation, built from
/// at most `memory` secant pairs on the base bb_scale * I.
class HessianModel {
 public:
  explicit HessianModel(ModelKind kind = ModelKind::Zero, double kappa_B = 1e5,
                        Index memory = 3);

  ModelKind kind() const { return kind_; }
  double kappa_B() const { return kappa_B_; }
  double bb_scale() const { return bb_scale_; }
  Index memory() const { return memory_; }
  Index pair_count() const { return static_cast<Index>(pairs_.size()); }
  long accepted_pairs() const { return accepted_; }
  long rejected_pairs() const { return rejected_; }
  bool is_zero() const;

  /// Absorbs a secant pair. Pairs with y's < 1e-15 ||s||^2 are rejected silently.
  void absorb(const VectorXd& s, const VectorXd& y);

  /// Exact kind: installs the current Hessian.
  void set_hessian(MatrixXd H);
  bool has_hessian() const { return H_.size() > 0; }

  /// B v after kappa_B enforcement.
  VectorXd apply(const VectorXd& v) const;

  /// Spectral norm of the enforced operator (<= kappa_B).
  double norm_estimate() const;

  /// Spectral norm before enforcement.
  double raw_norm() const { return raw_norm_; }

  /// Dense matrix of the enforced operator, for diagnostics and tests.
  MatrixXd dense(Index n) const;

 private:
  struct Pair {
    VectorXd s;
    VectorXd y;
  };

  VectorXd apply_raw(const VectorXd& v) const;
  void rebuild_lbfgs();
  void refresh_norm();

  ModelKind kind_;
  double kappa_B_;
  Index memory_;
  double bb_scale_ = 1.0;
  std::deque<Pair> pairs_;
  std::vector<VectorXd> down_;  // B_i s_i / sqrt(s_i' B_i s_i)
  std::vector<VectorXd> up_;    // y_i / sqrt(y_i' s_i)
  MatrixXd H_;
  double raw_norm_ = 0.0;
  double enforce_ = 1.0;
  long accepted_ = 0;
  long rejected_ = 0;
};

/// Value-returning form of absorb.
HessianModel update(HessianModel model, const VectorXd& s, const VectorXd& y);

/// B v; for Exact the Hessian is evaluated from `problem` at `x`.
VectorXd apply(const HessianModel& model, const VectorXd& v);
VectorXd apply(const HessianModel& model, const VectorXd& v, const ProblemInstance& problem,
               const VectorXd& x);

double norm_estimate(const HessianModel& model);

/// "none" | "bb" | "lbfgs3" (any lbfgsN) | "exact".
ModelKind parse_model_kind(const std::string& name, Index* memory = nullptr);
std::string to_string(ModelKind kind);

}  // namespace offo
