// First-order methods as d=1 state-space models, their standard parameter
// tunings, and exact worst-case rates on the quadratic function class.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "iqccert/matrix.hpp"
#include "iqccert/state_space.hpp"

namespace iqccert {

enum class Method { gradient, nesterov, heavy_ball, three_param };
enum class TuningVariant { popular, optimal, standard };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::gradient: return "gradient";
    case Method::nesterov: return "nesterov";
    case Method::heavy_ball: return "heavy_ball";
    case Method::three_param: return "three_param";
  }
  return "?";
}

/// Algorithm parameters on the class S(m, L).
struct Tuning {
  Method method = Method::gradient;
  double alpha = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double m = 1.0;
  double L = 1.0;

  double kappa() const { return L / m; }

  void validate() const {
    if (!(m > 0.0) || !(L >= m)) throw std::invalid_argument("Tuning: need 0 < m <= L");
    if (!(alpha > 0.0)) throw std::invalid_argument("Tuning: need alpha > 0");
    if (!std::isfinite(beta1) || !std::isfinite(beta2))
      throw std::invalid_argument("Tuning: momentum coefficients must be finite");
  }
};

/// State-space realization of the method; gradient is 1-state, the momentum
/// family is 2-state with D = 0.
inline StateSpace make_algorithm(const Tuning& t) {
  t.validate();
  switch (t.method) {
    case Method::gradient:
      return StateSpace(Mat{{1.0}}, Mat{{-t.alpha}}, Mat{{1.0}}, Mat{{0.0}});
    case Method::nesterov: {
      const double b = t.beta1;
      return StateSpace(Mat{{1.0 + b, -b}, {1.0, 0.0}}, Mat{{-t.alpha}, {0.0}},
                        Mat{{1.0 + b, -b}}, Mat{{0.0}});
    }
    case Method::heavy_ball: {
      const double b = t.beta1;
      return StateSpace(Mat{{1.0 + b, -b}, {1.0, 0.0}}, Mat{{-t.alpha}, {0.0}},
                        Mat{{1.0, 0.0}}, Mat{{0.0}});
    }
    case Method::three_param:
      return StateSpace(Mat{{1.0 + t.beta1, -t.beta1}, {1.0, 0.0}}, Mat{{-t.alpha}, {0.0}},
                        Mat{{1.0 + t.beta2, -t.beta2}}, Mat{{0.0}});
  }
  throw std::invalid_argument("make_algorithm: unknown method");
}

/// Standard parameter choices from the literature.
///   gradient/popular:   alpha = 1/L
///   gradient/optimal:   alpha = 2/(L+m)
///   nesterov/standard:  alpha = 1/L,        beta = (sqrt(k)-1)/(sqrt(k)+1)
///   nesterov/optimal:   alpha = 4/(3L+m),   beta = (sqrt(3k+1)-2)/(sqrt(3k+1)+2)
///   heavy_ball/optimal: alpha = 4/(sqrt(L)+sqrt(m))^2, beta = ((sqrt(k)-1)/(sqrt(k)+1))^2
inline Tuning standard_tuning(Method method, TuningVariant variant, double m, double L) {
  if (!(m > 0.0) || !(L >= m)) throw std::invalid_argument("standard_tuning: need 0 < m <= L");
  const double kappa = L / m;
  Tuning t;
  t.method = method;
  t.m = m;
  t.L = L;
  if (method == Method::gradient && variant == TuningVariant::popular) {
    t.alpha = 1.0 / L;
    return t;
  }
  if (method == Method::gradient && variant == TuningVariant::optimal) {
    t.alpha = 2.0 / (L + m);
    return t;
  }
  if (method == Method::nesterov && variant == TuningVariant::standard) {
    t.alpha = 1.0 / L;
    t.beta1 = t.beta2 = (std::sqrt(kappa) - 1.0) / (std::sqrt(kappa) + 1.0);
    return t;
  }
  if (method == Method::nesterov && variant == TuningVariant::optimal) {
    t.alpha = 4.0 / (3.0 * L + m);
    t.beta1 = t.beta2 = (std::sqrt(3.0 * kappa + 1.0) - 2.0) / (std::sqrt(3.0 * kappa + 1.0) + 2.0);
    return t;
  }
  if (method == Method::heavy_ball && variant == TuningVariant::optimal) {
    t.alpha = 4.0 / ((std::sqrt(L) + std::sqrt(m)) * (std::sqrt(L) + std::sqrt(m)));
    const double r = (std::sqrt(kappa) - 1.0) / (std::sqrt(kappa) + 1.0);
    t.beta1 = r * r;
    return t;
  }
  throw std::invalid_argument(std::string("standard_tuning: unsupported pair (") +
                              method_name(method) + ", variant)");
}

/// Closed-loop matrix A + lambda * B * C for a quadratic with curvature lambda.
inline Mat closed_loop_matrix(const StateSpace& ss, double lambda) {
  return ss.a + lambda * (ss.b * ss.c);
}

/// Exact worst-case linear rate on quadratics with curvature in [m, L]:
/// max over lambda of the spectral radius of the closed loop. Endpoints plus
/// a fine grid are evaluated and the best grid cell is refined by
/// golden-section (the general three-parameter family has no quasiconvexity
/// guarantee).
inline double quad_worst_rate(const StateSpace& ss, double m, double L) {
  if (!(m > 0.0) || !(L >= m)) throw std::invalid_argument("quad_worst_rate: need 0 < m <= L");
  const auto rate_at = [&](double lam) { return spectral_radius(closed_loop_matrix(ss, lam)); };
  double best = std::max(rate_at(m), rate_at(L));
  if (L == m) return best;
  const int grid = 10001;
  double best_lam = m;
  double best_grid = -1.0;
  for (int i = 0; i <= grid; ++i) {
    const double lam = m + (L - m) * i / grid;
    const double r = rate_at(lam);
    if (r > best_grid) {
      best_grid = r;
      best_lam = lam;
    }
  }
  best = std::max(best, best_grid);
  // golden-section refinement inside the best cell
  const double h = (L - m) / grid;
  double lo = std::max(m, best_lam - h), hi = std::min(L, best_lam + h);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = rate_at(x1), f2 = rate_at(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = rate_at(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = rate_at(x1);
    }
  }
  return std::max(best, std::max(f1, f2));
}

inline double quad_worst_rate(const Tuning& t) {
  return quad_worst_rate(make_algorithm(t), t.m, t.L);
}

/// Fixed-point structure check: a minimizing algorithm's A must have an
/// eigenvalue 1; returns the fixed-point direction when it does.
struct FixedPointCheck {
  bool has_unit_eigenvalue = false;
  std::vector<double> xi_star;  // eigenvector for eigenvalue 1 (unit norm)
  double y_star = 0.0;          // C * xi_star
};

inline FixedPointCheck fixed_point_check(const StateSpace& ss) {
  if (ss.d.max_abs() != 0.0)
    throw std::invalid_argument("fixed_point_check: expects an algorithm model (D = 0)");
  const int n = ss.states();
  const Mat shifted = ss.a - Mat::identity(n);
  // smallest singular direction of (A - I)
  const SymEig e = eig_sym(shifted.transpose() * shifted);
  FixedPointCheck out;
  const double sigma_min = std::sqrt(std::max(e.values.front(), 0.0));
  if (sigma_min > 1e-9 * (1.0 + ss.a.max_abs())) return out;
  out.has_unit_eigenvalue = true;
  out.xi_star.resize(n);
  for (int i = 0; i < n; ++i) out.xi_star[i] = e.vectors(i, 0);
  double y = 0.0;
  for (int i = 0; i < n; ++i) y += ss.c(0, i) * out.xi_star[i];
  out.y_star = y;
  return out;
}

}  // namespace iqccert
