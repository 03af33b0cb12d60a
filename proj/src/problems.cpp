#include "offo/problems.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace offo {

namespace {

// One additive term of the objective together with its sparse derivatives.
struct Element {
  double value = 0.0;
  std::vector<std::pair<Index, double>> grad;
  std::vector<std::tuple<Index, Index, double>> hess;  // each unordered pair once

  void clear() {
    value = 0.0;
    grad.clear();
    hess.clear();
  }
  void d(Index i, double v) { grad.emplace_back(i, v); }
  void h(Index i, Index j, double v) { hess.emplace_back(i, j, v); }
};

// f(x) = constant + sum_e phi(e(x)), phi(t) = t^2 when squared, t otherwise.
class ElementSum : public Objective {
 public:
  ElementSum(Index n, bool squared, double constant = 0.0)
      : n_(n), squared_(squared), constant_(constant) {}

  void evaluate(const VectorXd& x, double& f, VectorXd* g, MatrixXd* H) const override {
    const int order = H ? 2 : (g ? 1 : 0);
    f = constant_;
    if (g) g->setZero(n_);
    if (H) H->setZero(n_, n_);
    Element el;
    const Index m = element_count();
    for (Index e = 0; e < m; ++e) {
      el.clear();
      element(e, x, order, el);
      const double v = el.value;
      const double outer = squared_ ? 2.0 : 0.0;
      const double scale = squared_ ? 2.0 * v : 1.0;
      f += squared_ ? v * v : v;
      if (g) {
        for (const auto& [i, di] : el.grad) (*g)(i) += scale * di;
      }
      if (H) {
        if (squared_) {
          for (const auto& [i, di] : el.grad) {
            for (const auto& [j, dj] : el.grad) (*H)(i, j) += outer * di * dj;
          }
        }
        for (const auto& [i, j, hij] : el.hess) {
          (*H)(i, j) += scale * hij;
          if (i != j) (*H)(j, i) += scale * hij;
        }
      }
    }
  }

 protected:
  virtual Index element_count() const = 0;
  virtual void element(Index e, const VectorXd& x, int order, Element& out) const = 0;

  Index n_;

 private:
  bool squared_;
  double constant_;
};

// ---------------------------------------------------------------------------
// Catalog families

class Rosenbrock final : public ElementSum {
 public:
  explicit Rosenbrock(Index n) : ElementSum(n, true) {}

 protected:
  Index element_count() const override { return 2 * (n_ - 1); }
  void element(Index e, const VectorXd& x, int order, Element& out) const override {
    const Index i = e / 2;
    if (e % 2 == 0) {
      out.value = 10.0 * (x(i + 1) - x(i) * x(i));
      if (order >= 1) {
        out.d(i, -20.0 * x(i));
        out.d(i + 1, 10.0);
      }
      if (order >= 2) out.h(i, i, -20.0);
    } else {
      out.value = 1.0 - x(i);
      if (order >= 1) out.d(i, -1.0);
    }
  }
};

class BroydenTridiagonal final : public ElementSum {
 public:
  explicit BroydenTridiagonal(Index n) : ElementSum(n, true) {}

 protected:
  Index element_count() const override { return n_; }
  void element(Index i, const VectorXd& x, int order, Element& out) const override {
    const double prev = i > 0 ? x(i - 1) : 0.0;
    const double next = i + 1 < n_ ? x(i + 1) : 0.0;
    out.value = (3.0 - 2.0 * x(i)) * x(i) - prev - 2.0 * next + 1.0;
    if (order >= 1) {
      out.d(i, 3.0 - 4.0 * x(i));
      if (i > 0) out.d(i - 1, -1.0);
      if (i + 1 < n_) out.d(i + 1, -2.0);
    }
    if (order >= 2) out.h(i, i, -4.0);
  }
};

class BroydenBanded final : public ElementSum {
 public:
  explicit BroydenBanded(Index n) : ElementSum(n, true) {}

 protected:
  Index element_count() const override { return n_; }
  void element(Index i, const VectorXd& x, int order, Element& out) const override {
    const double xi = x(i);
    double v = xi * (2.0 + 5.0 * xi * xi) + 1.0;
    if (order >= 1) out.d(i, 2.0 + 15.0 * xi * xi);
    if (order >= 2) out.h(i, i, 30.0 * xi);
    const Index lo = std::max<Index>(0, i - 5);
    const Index hi = std::min<Index>(n_ - 1, i + 1);
    for (Index j = lo; j <= hi; ++j) {
      if (j == i) continue;
      v -= x(j) * (1.0 + x(j));
      if (order >= 1) out.d(j, -(1.0 + 2.0 * x(j)));
      if (order >= 2) out.h(j, j, -2.0);
    }
    out.value = v;
  }
};

// sum_i (x_i^2 + x_j^2)^2 - 4 x_i + 3 with j = partner(i); shared by arwhead and engval1.
class QuarticPairs final : public ElementSum {
 public:
  QuarticPairs(Index n, bool arrowhead) : ElementSum(n, false), arrowhead_(arrowhead) {}

 protected:
  Index element_count() const override { return n_ - 1; }
  void element(Index i, const VectorXd& x, int order, Element& out) const override {
    const Index j = arrowhead_ ? n_ - 1 : i + 1;
    const double a = x(i);
    const double b = x(j);
    const double q = a * a + b * b;
    out.value = q * q - 4.0 * a + 3.0;
    if (order >= 1) {
      out.d(i, 4.0 * q * a - 4.0);
      out.d(j, 4.0 * q * b);
    }
    if (order >= 2) {
      out.h(i, i, 4.0 * q + 8.0 * a * a);
      out.h(i, j, 8.0 * a * b);
      out.h(j, j, 4.0 * q + 8.0 * b * b);
    }
  }

 private:
  bool arrowhead_;
};

class Tridia final : public ElementSum {
 public:
  explicit Tridia(Index n) : ElementSum(n, true) {}

 protected:
  Index element_count() const override { return n_; }
  void element(Index i, const VectorXd& x, int order, Element& out) const override {
    if (i == 0) {
      out.value = x(0) - 1.0;
      if (order >= 1) out.d(0, 1.0);
      return;
    }
    const double c = std::sqrt(static_cast<double>(i + 1));
    out.value = c * (2.0 * x(i) - x(i - 1));
    if (order >= 1) {
      out.d(i, 2.0 * c);
      out.d(i - 1, -c);
    }
  }
};

class Woods final : public ElementSum {
 public:
  explicit Woods(Index n) : ElementSum(n, true) {}

 protected:
  Index element_count() const override { return 6 * (n_ / 4); }
  void element(Index e, const VectorXd& x, int order, Element& out) const override {
    const Index b = 4 * (e / 6);
    const Index a0 = b, a1 = b + 1, a2 = b + 2, a3 = b + 3;
    static const double s90 = std::sqrt(90.0);
    static const double s10 = std::sqrt(10.0);
    switch (e % 6) {
      case 0:
        out.value = 10.0 * (x(a1) - x(a0) * x(a0));
        if (order >= 1) {
          out.d(a0, -20.0 * x(a0));
          out.d(a1, 10.0);
        }
        if (order >= 2) out.h(a0, a0, -20.0);
        break;
      case 1:
        out.value = 1.0 - x(a0);
        if (order >= 1) out.d(a0, -1.0);
        break;
      case 2:
        out.value = s90 * (x(a3) - x(a2) * x(a2));
        if (order >= 1) {
          out.d(a2, -2.0 * s90 * x(a2));
          out.d(a3, s90);
        }
        if (order >= 2) out.h(a2, a2, -2.0 * s90);
        break;
      case 3:
        out.value = 1.0 - x(a2);
        if (order >= 1) out.d(a2, -1.0);
        break;
      case 4:
        out.value = s10 * (x(a1) + x(a3) - 2.0);
        if (order >= 1) {
          out.d(a1, s10);
          out.d(a3, s10);
        }
        break;
      default:
        out.value = (x(a1) - x(a3)) / s10;
        if (order >= 1) {
          out.d(a1, 1.0 / s10);
          out.d(a3, -1.0 / s10);
        }
        break;
    }
  }
};

class PowellSingular final : public ElementSum {
 public:
  explicit PowellSingular(Index n) : ElementSum(n, true) {}

 protected:
  Index element_count() const override { return n_; }
  void element(Index e, const VectorXd& x, int order, Element& out) const override {
    const Index b = 4 * (e / 4);
    const Index a0 = b, a1 = b + 1, a2 = b + 2, a3 = b + 3;
    static const double s5 = std::sqrt(5.0);
    static const double s10 = std::sqrt(10.0);
    switch (e % 4) {
      case 0:
        out.value = x(a0) + 10.0 * x(a1);
        if (order >= 1) {
          out.d(a0, 1.0);
          out.d(a1, 10.0);
        }
        break;
      case 1:
        out.value = s5 * (x(a2) - x(a3));
        if (order >= 1) {
          out.d(a2, s5);
          out.d(a3, -s5);
        }
        break;
      case 2: {
        const double u = x(a1) - 2.0 * x(a2);
        out.value = u * u;
        if (order >= 1) {
          out.d(a1, 2.0 * u);
          out.d(a2, -4.0 * u);
        }
        if (order >= 2) {
          out.h(a1, a1, 2.0);
          out.h(a1, a2, -4.0);
          out.h(a2, a2, 8.0);
        }
        break;
      }
      default: {
        const double u = x(a0) - x(a3);
        out.value = s10 * u * u;
        if (order >= 1) {
          out.d(a0, 2.0 * s10 * u);
          out.d(a3, -2.0 * s10 * u);
        }
        if (order >= 2) {
          out.h(a0, a0, 2.0 * s10);
          out.h(a0, a3, -2.0 * s10);
          out.h(a3, a3, 2.0 * s10);
        }
        break;
      }
    }
  }
};

class Beale final : public ElementSum {
 public:
  Beale() : ElementSum(2, true) {}

 protected:
  Index element_count() const override { return 3; }
  void element(Index e, const VectorXd& x, int order, Element& out) const override {
    static constexpr double y[3] = {1.5, 2.25, 2.625};
    const double p = static_cast<double>(e + 1);
    const double u = x(0);
    const double v = x(1);
    out.value = y[e] - u * (1.0 - std::pow(v, p));
    if (order >= 1) {
      out.d(0, -(1.0 - std::pow(v, p)));
      out.d(1, u * p * std::pow(v, p - 1.0));
    }
    if (order >= 2) {
      out.h(0, 1, p * std::pow(v, p - 1.0));
      if (e > 0) out.h(1, 1, u * p * (p - 1.0) * std::pow(v, p - 2.0));
    }
  }
};

class Box3 final : public ElementSum {
 public:
  Box3() : ElementSum(3, true) {}

 protected:
  Index element_count() const override { return 10; }
  void element(Index e, const VectorXd& x, int order, Element& out) const override {
    const double t = 0.1 * static_cast<double>(e + 1);
    const double ea = std::exp(-t * x(0));
    const double eb = std::exp(-t * x(1));
    const double c = std::exp(-t) - std::exp(-10.0 * t);
    out.value = ea - eb - x(2) * c;
    if (order >= 1) {
      out.d(0, -t * ea);
      out.d(1, t * eb);
      out.d(2, -c);
    }
    if (order >= 2) {
      out.h(0, 0, t * t * ea);
      out.h(1, 1, -t * t * eb);
    }
  }
};

class Cube final : public ElementSum {
 public:
  Cube() : ElementSum(2, true) {}

 protected:
  Index element_count() const override { return 2; }
  void element(Index e, const VectorXd& x, int order, Element& out) const override {
    if (e == 0) {
      out.value = 10.0 * (x(1) - x(0) * x(0) * x(0));
      if (order >= 1) {
        out.d(0, -30.0 * x(0) * x(0));
        out.d(1, 10.0);
      }
      if (order >= 2) out.h(0, 0, -60.0 * x(0));
    } else {
      out.value = 1.0 - x(0);
      if (order >= 1) out.d(0, -1.0);
    }
  }
};

class VariablyDimensioned final : public ElementSum {
 public:
  explicit VariablyDimensioned(Index n) : ElementSum(n, true) {}

 protected:
  Index element_count() const override { return n_ + 2; }
  void element(Index e, const VectorXd& x, int order, Element& out) const override {
    if (e < n_) {
      out.value = x(e) - 1.0;
      if (order >= 1) out.d(e, 1.0);
      return;
    }
    double s = 0.0;
    for (Index i = 0; i < n_; ++i) s += static_cast<double>(i + 1) * (x(i) - 1.0);
    if (e == n_) {
      out.value = s;
      if (order >= 1) {
        for (Index i = 0; i < n_; ++i) out.d(i, static_cast<double>(i + 1));
      }
      return;
    }
    out.value = s * s;
    if (order >= 1) {
      for (Index i = 0; i < n_; ++i) out.d(i, 2.0 * s * static_cast<double>(i + 1));
    }
    if (order >= 2) {
      for (Index i = 0; i < n_; ++i) {
        for (Index j = i; j < n_; ++j) {
          out.h(i, j, 2.0 * static_cast<double>((i + 1) * (j + 1)));
        }
      }
    }
  }
};

class Nondquar final : public ElementSum {
 public:
  explicit Nondquar(Index n) : ElementSum(n, true) {}

 protected:
  Index element_count() const override { return n_; }
  void element(Index e, const VectorXd& x, int order, Element& out) const override {
    const Index last = n_ - 1;
    if (e == 0) {
      out.value = x(0) - x(1);
      if (order >= 1) {
        out.d(0, 1.0);
        out.d(1, -1.0);
      }
      return;
    }
    if (e == n_ - 1) {
      out.value = x(last - 1) + x(last);
      if (order >= 1) {
        out.d(last - 1, 1.0);
        out.d(last, 1.0);
      }
      return;
    }
    const Index i = e - 1;
    const Index idx[3] = {i, i + 1, last};
    const double u = x(i) + x(i + 1) + x(last);
    out.value = u * u;
    if (order >= 1) {
      for (Index k : idx) out.d(k, 2.0 * u);
    }
    if (order >= 2) {
      for (int a = 0; a < 3; ++a) {
        for (int b = a; b < 3; ++b) out.h(idx[a], idx[b], 2.0);
      }
    }
  }
};

// Minimum-surface functional on a p x p grid with no boundary conditions.
class MinSurface final : public ElementSum {
 public:
  explicit MinSurface(Index p) : ElementSum(p * p, false), p_(p) {
    const double h = 1.0 / static_cast<double>(p - 1);
    h2_ = h * h;
    c_ = 1.0 / (2.0 * h2_);
  }

 protected:
  Index element_count() const override { return (p_ - 1) * (p_ - 1); }
  void element(Index e, const VectorXd& x, int order, Element& out) const override {
    const Index i = e / (p_ - 1);
    const Index j = e % (p_ - 1);
    const Index ip = i * p_ + j;              // (i, j)
    const Index iq = (i + 1) * p_ + j + 1;    // (i+1, j+1)
    const Index ir = (i + 1) * p_ + j;        // (i+1, j)
    const Index is = i * p_ + j + 1;          // (i, j+1)
    const double a = x(ip) - x(iq);
    const double b = x(ir) - x(is);
    const double S = std::sqrt(1.0 + c_ * (a * a + b * b));
    out.value = h2_ * S;
    if (order >= 1) {
      const double ea = h2_ * c_ * a / S;
      const double eb = h2_ * c_ * b / S;
      out.d(ip, ea);
      out.d(iq, -ea);
      out.d(ir, eb);
      out.d(is, -eb);
    }
    if (order >= 2) {
      const double S3 = S * S * S;
      const double eaa = h2_ * c_ * (1.0 + c_ * b * b) / S3;
      const double ebb = h2_ * c_ * (1.0 + c_ * a * a) / S3;
      const double eab = -h2_ * c_ * c_ * a * b / S3;
      const Index v[4] = {ip, iq, ir, is};
      const double ca[4] = {1.0, -1.0, 0.0, 0.0};
      const double cb[4] = {0.0, 0.0, 1.0, -1.0};
      for (int u = 0; u < 4; ++u) {
        for (int w = u; w < 4; ++w) {
          const double val = ca[u] * ca[w] * eaa + (ca[u] * cb[w] + cb[u] * ca[w]) * eab +
                             cb[u] * cb[w] * ebb;
          if (val != 0.0) out.h(v[u], v[w], val);
        }
      }
    }
  }

 private:
  Index p_;
  double h2_;
  double c_;
};

class Dixmaana final : public ElementSum {
 public:
  explicit Dixmaana(Index n) : ElementSum(n, false, 1.0), m_(n / 3) {}

 protected:
  static constexpr double kGamma = 0.125;
  static constexpr double kDelta = 0.125;

  Index element_count() const override { return n_ + 2 * m_ + m_; }
  void element(Index e, const VectorXd& x, int order, Element& out) const override {
    if (e < n_) {
      out.value = x(e) * x(e);
      if (order >= 1) out.d(e, 2.0 * x(e));
      if (order >= 2) out.h(e, e, 2.0);
      return;
    }
    e -= n_;
    if (e < 2 * m_) {
      const Index i = e;
      const Index j = e + m_;
      const double a = x(i);
      const double b = x(j);
      const double b2 = b * b;
      out.value = kGamma * a * a * b2 * b2;
      if (order >= 1) {
        out.d(i, 2.0 * kGamma * a * b2 * b2);
        out.d(j, 4.0 * kGamma * a * a * b2 * b);
      }
      if (order >= 2) {
        out.h(i, i, 2.0 * kGamma * b2 * b2);
        out.h(i, j, 8.0 * kGamma * a * b2 * b);
        out.h(j, j, 12.0 * kGamma * a * a * b2);
      }
      return;
    }
    const Index i = e - 2 * m_;
    const Index j = i + 2 * m_;
    out.value = kDelta * x(i) * x(j);
    if (order >= 1) {
      out.d(i, kDelta * x(j));
      out.d(j, kDelta * x(i));
    }
    if (order >= 2) out.h(i, j, kDelta);
  }

 private:
  Index m_;
};

class Helix final : public ElementSum {
 public:
  Helix() : ElementSum(3, true) {}

 protected:
  Index element_count() const override { return 3; }
  void element(Index e, const VectorXd& x, int order, Element& out) const override {
    constexpr double pi = std::numbers::pi;
    const double x1 = x(0);
    const double x2 = x(1);
    const double r2 = x1 * x1 + x2 * x2;
    const double r = std::sqrt(r2);
    switch (e) {
      case 0: {
        double theta = std::atan(x2 / x1) / (2.0 * pi);
        if (x1 < 0.0) theta += 0.5;
        out.value = 10.0 * (x(2) - 10.0 * theta);
        if (order >= 1) {
          out.d(0, 100.0 * x2 / (2.0 * pi * r2));
          out.d(1, -100.0 * x1 / (2.0 * pi * r2));
          out.d(2, 10.0);
        }
        if (order >= 2) {
          const double r4 = r2 * r2;
          out.h(0, 0, -100.0 * x1 * x2 / (pi * r4));
          out.h(1, 1, 100.0 * x1 * x2 / (pi * r4));
          out.h(0, 1, -100.0 * (x2 * x2 - x1 * x1) / (2.0 * pi * r4));
        }
        break;
      }
      case 1: {
        out.value = 10.0 * (r - 1.0);
        if (order >= 1) {
          out.d(0, 10.0 * x1 / r);
          out.d(1, 10.0 * x2 / r);
        }
        if (order >= 2) {
          const double r3 = r2 * r;
          out.h(0, 0, 10.0 * x2 * x2 / r3);
          out.h(0, 1, -10.0 * x1 * x2 / r3);
          out.h(1, 1, 10.0 * x1 * x1 / r3);
        }
        break;
      }
      default:
        out.value = x(2);
        if (order >= 1) out.d(2, 1.0);
        break;
    }
  }
};

class Booth final : public ElementSum {
 public:
  Booth() : ElementSum(2, true) {}

 protected:
  Index element_count() const override { return 2; }
  void element(Index e, const VectorXd& x, int order, Element& out) const override {
    if (e == 0) {
      out.value = x(0) + 2.0 * x(1) - 7.0;
      if (order >= 1) {
        out.d(0, 1.0);
        out.d(1, 2.0);
      }
    } else {
      out.value = 2.0 * x(0) + x(1) - 5.0;
      if (order >= 1) {
        out.d(0, 2.0);
        out.d(1, 1.0);
      }
    }
  }
};

// Linear function, full rank, with m = 2n residuals.
class LinearFullRank final : public ElementSum {
 public:
  explicit LinearFullRank(Index n) : ElementSum(n, true), m_(2 * n) {}

 protected:
  Index element_count() const override { return m_; }
  void element(Index e, const VectorXd& x, int order, Element& out) const override {
    const double c = 2.0 / static_cast<double>(m_);
    out.value = -c * x.sum() - 1.0;
    if (e < n_) out.value += x(e);
    if (order >= 1) {
      for (Index j = 0; j < n_; ++j) out.d(j, (j == e ? 1.0 : 0.0) - c);
    }
  }

 private:
  Index m_;
};

// ---------------------------------------------------------------------------
// Catalog table

enum class DimRule { Fixed, AtLeast2, AtLeast3, MultipleOf3, MultipleOf4, PerfectSquare, AtLeast1 };

struct CatalogEntry {
  Index default_n;
  DimRule rule;
  bool sum_of_squares;
  bool quadratic;
  double f_low;
  std::function<std::shared_ptr<const Objective>(Index)> build;
  std::function<VectorXd(Index)> start;
};

VectorXd constant_start(Index n, double v) { return VectorXd::Constant(n, v); }

VectorXd alternating_start(Index n, double odd, double even) {
  VectorXd x(n);
  for (Index i = 0; i < n; ++i) x(i) = (i % 2 == 0) ? odd : even;
  return x;
}

Index integer_sqrt(Index n) {
  auto p = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n))));
  return p;
}

const std::map<std::string, CatalogEntry>& catalog() {
  static const std::map<std::string, CatalogEntry> table = [] {
    std::map<std::string, CatalogEntry> t;
    t["rosenbr"] = {10, DimRule::AtLeast2, true, false, 0.0,
                    [](Index n) { return std::make_shared<Rosenbrock>(n); },
                    [](Index n) { return alternating_start(n, -1.2, 1.0); }};
    t["broyden3d"] = {10, DimRule::AtLeast2, true, false, 0.0,
                      [](Index n) { return std::make_shared<BroydenTridiagonal>(n); },
                      [](Index n) { return constant_start(n, -1.0); }};
    t["broydenbd"] = {10, DimRule::AtLeast2, true, false, 0.0,
                      [](Index n) { return std::make_shared<BroydenBanded>(n); },
                      [](Index n) { return constant_start(n, -1.0); }};
    t["arwhead"] = {10, DimRule::AtLeast2, false, false, 0.0,
                    [](Index n) { return std::make_shared<QuarticPairs>(n, true); },
                    [](Index n) { return constant_start(n, 1.0); }};
    t["tridia"] = {10, DimRule::AtLeast2, true, true, 0.0,
                   [](Index n) { return std::make_shared<Tridia>(n); },
                   [](Index n) { return constant_start(n, 1.0); }};
    t["woods"] = {12, DimRule::MultipleOf4, true, false, 0.0,
                  [](Index n) { return std::make_shared<Woods>(n); },
                  [](Index n) { return alternating_start(n, -3.0, -1.0); }};
    t["powellsg"] = {12, DimRule::MultipleOf4, true, false, 0.0,
                     [](Index n) { return std::make_shared<PowellSingular>(n); },
                     [](Index n) {
                       VectorXd x(n);
                       for (Index i = 0; i < n; i += 4) x.segment<4>(i) << 3.0, -1.0, 0.0, 1.0;
                       return x;
                     }};
    t["engval1"] = {10, DimRule::AtLeast2, false, false, 0.0,
                    [](Index n) { return std::make_shared<QuarticPairs>(n, false); },
                    [](Index n) { return constant_start(n, 2.0); }};
    t["beale"] = {2, DimRule::Fixed, true, false, 0.0,
                  [](Index) { return std::make_shared<Beale>(); },
                  [](Index n) { return constant_start(n, 1.0); }};
    t["box3"] = {3, DimRule::Fixed, true, false, 0.0,
                 [](Index) { return std::make_shared<Box3>(); },
                 [](Index) { return VectorXd{{0.0, 10.0, 20.0}}; }};
    t["cube"] = {2, DimRule::Fixed, true, false, 0.0,
                 [](Index) { return std::make_shared<Cube>(); },
                 [](Index) { return VectorXd{{-1.2, 1.0}}; }};
    t["vardim"] = {10, DimRule::AtLeast1, true, false, 0.0,
                   [](Index n) { return std::make_shared<VariablyDimensioned>(n); },
                   [](Index n) {
                     VectorXd x(n);
                     for (Index i = 0; i < n; ++i) {
                       x(i) = 1.0 - static_cast<double>(i + 1) / static_cast<double>(n);
                     }
                     return x;
                   }};
    t["nondquar"] = {10, DimRule::AtLeast3, true, false, 0.0,
                     [](Index n) { return std::make_shared<Nondquar>(n); },
                     [](Index n) { return alternating_start(n, 1.0, -1.0); }};
    t["nlminsurf"] = {16, DimRule::PerfectSquare, false, false, 1.0,
                      [](Index n) { return std::make_shared<MinSurface>(integer_sqrt(n)); },
                      [](Index n) {
                        const Index p = integer_sqrt(n);
                        const double h = 1.0 / static_cast<double>(p - 1);
                        VectorXd x(n);
                        for (Index i = 0; i < p; ++i) {
                          for (Index j = 0; j < p; ++j) {
                            const double u = static_cast<double>(i) * h;
                            const double v = static_cast<double>(j) * h;
                            x(i * p + j) = 1.0 + u * u - v * v;
                          }
                        }
                        return x;
                      }};
    t["dixmaana"] = {12, DimRule::MultipleOf3, false, false, 1.0,
                     [](Index n) { return std::make_shared<Dixmaana>(n); },
                     [](Index n) { return constant_start(n, 2.0); }};
    t["helix"] = {3, DimRule::Fixed, true, false, 0.0,
                  [](Index) { return std::make_shared<Helix>(); },
                  [](Index) { return VectorXd{{-1.0, 0.0, 0.0}}; }};
    t["booth"] = {2, DimRule::Fixed, true, true, 0.0,
                  [](Index) { return std::make_shared<Booth>(); },
                  [](Index n) { return constant_start(n, 0.0); }};
    t["arglina"] = {10, DimRule::AtLeast1, true, true, 0.0,
                    [](Index n) { return std::make_shared<LinearFullRank>(n); },
                    [](Index n) { return constant_start(n, 1.0); }};
    return t;
  }();
  return table;
}

bool dimension_ok(const CatalogEntry& entry, Index n) {
  switch (entry.rule) {
    case DimRule::Fixed:
      return n == entry.default_n;
    case DimRule::AtLeast1:
      return n >= 1;
    case DimRule::AtLeast2:
      return n >= 2;
    case DimRule::AtLeast3:
      return n >= 3;
    case DimRule::MultipleOf3:
      return n >= 3 && n % 3 == 0;
    case DimRule::MultipleOf4:
      return n >= 4 && n % 4 == 0;
    case DimRule::PerfectSquare: {
      const Index p = integer_sqrt(n);
      return p >= 2 && p * p == n;
    }
  }
  return false;
}

void require_finite(double f, const VectorXd* g, const MatrixXd* H, const std::string& name) {
  bool ok = std::isfinite(f);
  if (ok && g) ok = g->allFinite();
  if (ok && H) ok = H->allFinite();
  if (!ok) throw NonFiniteError("non-finite value while evaluating " + name);
}

}  // namespace

double ProblemInstance::value(const VectorXd& x) const { return evaluate(*this, x, 0).f; }

VectorXd ProblemInstance::gradient(const VectorXd& x) const { return *evaluate(*this, x, 1).g; }

MatrixXd ProblemInstance::hessian(const VectorXd& x) const { return *evaluate(*this, x, 2).H; }

Evaluation evaluate(const ProblemInstance& problem, const VectorXd& x, int order) {
  if (x.size() != problem.n) {
    throw DimensionError("point has dimension " + std::to_string(x.size()) + ", expected " +
                         std::to_string(problem.n));
  }
  if (order == 2 && !problem.has_hessian()) {
    throw CapabilityError(problem.name + " has no analytic Hessian");
  }
  Evaluation out;
  if (order >= 1) out.g.emplace(problem.n);
  if (order >= 2) out.H.emplace(problem.n, problem.n);
  problem.objective->evaluate(x, out.f, out.g ? &*out.g : nullptr, out.H ? &*out.H : nullptr);
  require_finite(out.f, out.g ? &*out.g : nullptr, out.H ? &*out.H : nullptr, problem.name);
  return out;
}

const std::vector<std::string>& problem_names() {
  static const std::vector<std::string> names = {
      "rosenbr", "broyden3d", "broydenbd", "arwhead",  "tridia", "woods",
      "powellsg", "engval1",  "beale",     "box3",     "cube",   "vardim",
      "nondquar", "nlminsurf", "dixmaana", "helix",    "booth",  "arglina"};
  return names;
}

Index default_dimension(const std::string& name) {
  const auto it = catalog().find(name);
  if (it == catalog().end()) throw CatalogError("unknown problem '" + name + "'");
  return it->second.default_n;
}

std::vector<std::string> exact_lipschitz_problem_names() {
  std::vector<std::string> out;
  for (const auto& name : problem_names()) {
    if (catalog().at(name).quadratic) out.push_back(name);
  }
  return out;
}

ProblemInstance make_problem(const std::string& name, Index n) {
  const auto it = catalog().find(name);
  if (it == catalog().end()) throw CatalogError("unknown problem '" + name + "'");
  const CatalogEntry& entry = it->second;
  if (!dimension_ok(entry, n)) {
    throw DimensionError("dimension " + std::to_string(n) + " is not valid for " + name);
  }
  ProblemInstance p;
  p.name = name;
  p.n = n;
  p.x0 = entry.start(n);
  p.f_low = entry.f_low;
  p.sum_of_squares = entry.sum_of_squares;
  p.objective = entry.build(n);
  if (entry.quadratic) {
    // Constant Hessian: L is its largest eigenvalue.
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(p.hessian(p.x0), Eigen::EigenvaluesOnly);
    p.lipschitz_hint = eig.eigenvalues().cwiseAbs().maxCoeff();
    p.lipschitz_exact = true;
  } else {
    p.lipschitz_hint = estimate_lipschitz(p);
  }
  return p;
}

ProblemInstance make_problem(const std::string& name) {
  return make_problem(name, default_dimension(name));
}

ProblemInstance make_custom_problem(std::string name, VectorXd x0, double f_low,
                                    std::shared_ptr<const Objective> objective) {
  ProblemInstance p;
  p.name = std::move(name);
  p.n = x0.size();
  p.x0 = std::move(x0);
  p.f_low = f_low;
  p.objective = std::move(objective);
  return p;
}

double estimate_lipschitz(const ProblemInstance& problem, int pairs, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double best = 0.0;
  for (int k = 0; k < pairs; ++k) {
    VectorXd a = problem.x0;
    VectorXd b = problem.x0;
    for (Index i = 0; i < problem.n; ++i) {
      a(i) += unit(rng);
      b(i) += unit(rng);
    }
    try {
      const double num = (problem.gradient(a) - problem.gradient(b)).norm();
      const double den = (a - b).norm();
      if (den > 0.0) best = std::max(best, num / den);
    } catch (const NonFiniteError&) {
      // sample landed on a singularity; skip it
    }
  }
  return best;
}

std::string problem_to_json(const ProblemInstance& problem) {
  nlohmann::json j;
  j["name"] = problem.name;
  j["n"] = problem.n;
  j["x0"] = std::vector<double>(problem.x0.data(), problem.x0.data() + problem.x0.size());
  j["f_low"] = problem.f_low;
  return j.dump(2);
}

}  // namespace offo
