#include "offo/model.hpp"

#include <cmath>

namespace offo {

namespace {

constexpr double kSecantSafeguard = 1e-15;
constexpr Index kDenseEigenLimit = 200;

double symmetric_norm(const MatrixXd& H) {
  if (H.rows() <= kDenseEigenLimit) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(H, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().cwiseAbs().maxCoeff();
  }
  // Both are upper bounds on the spectral norm of a symmetric matrix.
  const double row_sum = H.cwiseAbs().rowwise().sum().maxCoeff();
  return std::min(row_sum, H.norm());
}

}  // namespace

HessianModel::HessianModel(ModelKind kind, double kappa_B, Index memory)
    : kind_(kind), kappa_B_(kappa_B), memory_(memory) {
  if (kappa_B < 1.0) throw DomainError("kappa_B must be at least 1");
  if (kind == ModelKind::LBFGS && memory < 1) throw DomainError("LBFGS memory must be positive");
  refresh_norm();
}

bool HessianModel::is_zero() const {
  return kind_ == ModelKind::Zero || (kind_ == ModelKind::Exact && H_.size() > 0 && H_.isZero(0.0));
}

void HessianModel::absorb(const VectorXd& s, const VectorXd& y) {
  if (kind_ == ModelKind::Zero || kind_ == ModelKind::Exact) return;
  const double ss = s.squaredNorm();
  const double ys = y.dot(s);
  if (!(ss > 0.0) || !(ys >= kSecantSafeguard * ss) || !std::isfinite(ys)) {
    ++rejected_;
    return;
  }
  ++accepted_;
  bb_scale_ = ss / ys;
  if (kind_ == ModelKind::LBFGS) {
    pairs_.push_back({s, y});
    while (static_cast<Index>(pairs_.size()) > memory_) pairs_.pop_front();
    rebuild_lbfgs();
  }
  refresh_norm();
}

void HessianModel::rebuild_lbfgs() {
  down_.clear();
  up_.clear();
  for (const Pair& p : pairs_) {
    // B_i s with the pairs absorbed so far.
    VectorXd Bs = bb_scale_ * p.s;
    for (std::size_t j = 0; j < down_.size(); ++j) {
      Bs += up_[j].dot(p.s) * up_[j] - down_[j].dot(p.s) * down_[j];
    }
    const double sBs = p.s.dot(Bs);
    const double ys = p.y.dot(p.s);
    down_.push_back(Bs / std::sqrt(sBs));
    up_.push_back(p.y / std::sqrt(ys));
  }
}

void HessianModel::set_hessian(MatrixXd H) {
  if (kind_ != ModelKind::Exact) return;
  H_ = std::move(H);
  refresh_norm();
}

void HessianModel::refresh_norm() {
  switch (kind_) {
    case ModelKind::Zero:
      raw_norm_ = 0.0;
      break;
    case ModelKind::BBDiag:
      raw_norm_ = std::abs(bb_scale_);
      break;
    case ModelKind::LBFGS: {
      if (pairs_.empty()) {
        raw_norm_ = std::abs(bb_scale_);
        break;
      }
      // B = sigma I + U D U' with D = diag(-1.., +1..). With U = QR the nonzero part of the
      // spectrum is sigma + eig(R D R').
      const Index n = down_.front().size();
      const Index m = static_cast<Index>(down_.size());
      MatrixXd U(n, 2 * m);
      VectorXd d(2 * m);
      for (Index j = 0; j < m; ++j) {
        U.col(j) = down_[static_cast<std::size_t>(j)];
        U.col(m + j) = up_[static_cast<std::size_t>(j)];
        d(j) = -1.0;
        d(m + j) = 1.0;
      }
      Eigen::HouseholderQR<MatrixXd> qr(U);
      const Index r = std::min(n, 2 * m);
      MatrixXd R = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
      MatrixXd M = R * d.asDiagonal() * R.transpose();
      Eigen::SelfAdjointEigenSolver<MatrixXd> eig(M, Eigen::EigenvaluesOnly);
      double norm = (eig.eigenvalues().array() + bb_scale_).abs().maxCoeff();
      if (n > r) norm = std::max(norm, std::abs(bb_scale_));
      raw_norm_ = norm;
      break;
    }
    case ModelKind::Exact:
      raw_norm_ = H_.size() > 0 ? symmetric_norm(H_) : 0.0;
      break;
  }
  enforce_ = raw_norm_ > kappa_B_ ? kappa_B_ / raw_norm_ : 1.0;
}

VectorXd HessianModel::apply_raw(const VectorXd& v) const {
  switch (kind_) {
    case ModelKind::Zero:
      return VectorXd::Zero(v.size());
    case ModelKind::BBDiag:
      return bb_scale_ * v;
    case ModelKind::LBFGS: {
      VectorXd out = bb_scale_ * v;
      for (std::size_t j = 0; j < down_.size(); ++j) {
        out += up_[j].dot(v) * up_[j] - down_[j].dot(v) * down_[j];
      }
      return out;
    }
    case ModelKind::Exact:
      if (H_.size() == 0) throw CapabilityError("exact model used before a Hessian was set");
      return H_ * v;
  }
  return VectorXd::Zero(v.size());
}

VectorXd HessianModel::apply(const VectorXd& v) const {
  if (enforce_ == 1.0) return apply_raw(v);
  return enforce_ * apply_raw(v);
}

double HessianModel::norm_estimate() const { return enforce_ * raw_norm_; }

MatrixXd HessianModel::dense(Index n) const {
  MatrixXd B(n, n);
  for (Index j = 0; j < n; ++j) B.col(j) = apply(VectorXd::Unit(n, j));
  return B;
}

HessianModel update(HessianModel model, const VectorXd& s, const VectorXd& y) {
  model.absorb(s, y);
  return model;
}

VectorXd apply(const HessianModel& model, const VectorXd& v) { return model.apply(v); }

VectorXd apply(const HessianModel& model, const VectorXd& v, const ProblemInstance& problem,
               const VectorXd& x) {
  if (model.kind() != ModelKind::Exact) return model.apply(v);
  if (!problem.has_hessian()) throw CapabilityError(problem.name + " has no analytic Hessian");
  HessianModel local = model;
  local.set_hessian(problem.hessian(x));
  return local.apply(v);
}

double norm_estimate(const HessianModel& model) { return model.norm_estimate(); }

ModelKind parse_model_kind(const std::string& name, Index* memory) {
  if (name == "none" || name == "zero") return ModelKind::Zero;
  if (name == "bb") return ModelKind::BBDiag;
  if (name == "exact") return ModelKind::Exact;
  if (name.rfind("lbfgs", 0) == 0) {
    const std::string digits = name.substr(5);
    Index m = 3;
    if (!digits.empty()) {
      try {
        m = std::stol(digits);
      } catch (const std::exception&) {
        throw CatalogError("unknown model '" + name + "'");
      }
    }
    if (m < 1) throw CatalogError("unknown model '" + name + "'");
    if (memory) *memory = m;
    return ModelKind::LBFGS;
  }
  throw CatalogError("unknown model '" + name + "'");
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Zero:
      return "none";
    case ModelKind::BBDiag:
      return "bb";
    case ModelKind::LBFGS:
      return "lbfgs";
    case ModelKind::Exact:
      return "exact";
  }
  return "?";
}

}  // namespace offo
