// Feasibility of small affine linear matrix inequalities in scalar decision
// variables, decided by a logarithmic-barrier interior-point method with a
// strict-margin verdict. Certificates are re-verified by eigenvalue
// substitution before being returned.
#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "iqccert/matrix.hpp"

namespace iqccert::lmi {

class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// One affine symmetric-matrix constraint  F0 + sum_i x_i * F_i <= 0.
struct AffineBlock {
  Mat f0;
  std::vector<std::pair<int, Mat>> terms;  // (variable index, coefficient)
};

/// Affine scalar constraint  a.x + b <= 0.
struct LinearIneq {
  std::vector<std::pair<int, double>> a;
  double b = 0.0;
};

enum class BlockSense { negative_semidefinite, positive_semidefinite };

struct Problem {
  int var_count = 0;
  std::vector<AffineBlock> blocks;
  std::vector<int> nonneg_vars;      // variables constrained >= 0
  std::vector<LinearIneq> linear;    // a.x + b <= 0

  /// Appends a block; positive_semidefinite senses are stored negated.
  void add_block(AffineBlock b, BlockSense sense = BlockSense::negative_semidefinite) {
    if (sense == BlockSense::positive_semidefinite) {
      b.f0 *= -1.0;
      for (auto& [idx, f] : b.terms) f *= -1.0;
    }
    blocks.push_back(std::move(b));
  }

  double max_entry() const {
    double m = 0.0;
    for (const auto& b : blocks) {
      m = std::max(m, b.f0.max_abs());
      for (const auto& [idx, f] : b.terms) m = std::max(m, f.max_abs());
    }
    return m;
  }

  void validate() const {
    if (var_count < 1) throw std::invalid_argument("lmi: var_count must be >= 1");
    for (const auto& b : blocks) {
      if (!b.f0.square()) throw std::invalid_argument("lmi: block F0 not square");
      if (!is_symmetric(b.f0)) throw std::invalid_argument("lmi: block F0 not symmetric");
      for (const auto& [idx, f] : b.terms) {
        if (idx < 0 || idx >= var_count)
          throw std::invalid_argument("lmi: variable index out of range");
        if (f.rows() != b.f0.rows() || f.cols() != b.f0.cols())
          throw std::invalid_argument("lmi: block coefficient dimension mismatch");
        if (!is_symmetric(f)) throw std::invalid_argument("lmi: block coefficient not symmetric");
      }
    }
    for (int v : nonneg_vars)
      if (v < 0 || v >= var_count) throw std::invalid_argument("lmi: sign index out of range");
    for (const auto& li : linear)
      for (const auto& [idx, c] : li.a)
        if (idx < 0 || idx >= var_count) throw std::invalid_argument("lmi: linear index out of range");
  }

  /// Largest block eigenvalue over all matrix constraints at x.
  double block_margin(const std::vector<double>& x) const {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& b : blocks) {
      Mat f = b.f0;
      for (const auto& [idx, coef] : b.terms) f += x[idx] * coef;
      worst = std::max(worst, eig_max_sym(f));
    }
    return worst;
  }

  /// Worst violation of the sign and linear constraints at x (<= 0 means satisfied).
  double scalar_violation(const std::vector<double>& x) const {
    double worst = -std::numeric_limits<double>::infinity();
    for (int v : nonneg_vars) worst = std::max(worst, -x[v]);
    for (const auto& li : linear) {
      double val = li.b;
      for (const auto& [idx, c] : li.a) val += c * x[idx];
      worst = std::max(worst, val);
    }
    return worst;
  }

  /// Worst constraint value of any kind at x.
  double point_margin(const std::vector<double>& x) const {
    return std::max(block_margin(x), scalar_violation(x));
  }
};

enum class Verdict { feasible, infeasible, ambiguous };

struct Solution {
  Verdict verdict = Verdict::ambiguous;
  std::vector<double> x;    // certificate assignment when feasible
  double margin = 0.0;      // achieved strict margin (feasible verdicts)
  double t_upper = 0.0;     // best achieved relaxation value (original units)
  double t_lower = 0.0;     // barrier dual bound on the optimum
  int newton_steps = 0;
};

struct SolveOptions {
  double margin_required = -1.0;  // < 0 selects 1e-8 * (1 + max |F|)
  double tol_ambiguous = 1e-8;
  double var_bound = 1e8;         // internal |x_i| cap that bounds the scaling ray
  int max_newton = 20000;
};

namespace detail {

// One barrier constraint  G0 + sum_i y_i G_i  > 0 over variables y.
struct BarrierBlock {
  Mat g0;
  std::vector<std::pair<int, Mat>> terms;

  Mat eval(const std::vector<double>& y) const {
    Mat s = g0;
    for (const auto& [idx, g] : terms) s += y[idx] * g;
    return s;
  }
};

// Cholesky of a symmetric matrix; empty when not positive definite.
inline std::optional<Mat> cholesky(const Mat& s) {
  const int n = s.rows();
  Mat l(n, n);
  for (int j = 0; j < n; ++j) {
    double d = s(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) return std::nullopt;
    l(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double v = s(i, j);
      for (int k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / l(j, j);
    }
  }
  return l;
}

inline bool strictly_feasible(const std::vector<BarrierBlock>& blocks,
                              const std::vector<double>& y) {
  for (const auto& b : blocks)
    if (!cholesky(b.eval(y))) return false;
  return true;
}

inline double barrier_value(const std::vector<BarrierBlock>& blocks,
                            const std::vector<double>& y) {
  double phi = 0.0;
  for (const auto& b : blocks) {
    const auto l = cholesky(b.eval(y));
    if (!l) return std::numeric_limits<double>::infinity();
    for (int i = 0; i < l->rows(); ++i) phi -= 2.0 * std::log((*l)(i, i));
  }
  return phi;
}

// W = L^-1 G L^-T for lower-triangular L; result symmetric.
inline Mat whiten(const Mat& l, const Mat& g) {
  const int n = l.rows();
  Mat x = g;  // forward solve L X = G, column by column
  for (int col = 0; col < n; ++col) {
    for (int i = 0; i < n; ++i) {
      double v = x(i, col);
      for (int k = 0; k < i; ++k) v -= l(i, k) * x(k, col);
      x(i, col) = v / l(i, i);
    }
  }
  // solve W L^T = X  =>  rows of W from forward solves with L
  Mat w(n, n);
  for (int row = 0; row < n; ++row) {
    for (int j = 0; j < n; ++j) {
      double v = x(row, j);
      for (int k = 0; k < j; ++k) v -= l(j, k) * w(row, k);
      w(row, j) = v / l(j, j);
    }
  }
  return w;
}

inline double frob_inner(const Mat& a, const Mat& b) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) s += a(i, j) * b(i, j);
  return s;
}

// Solves H d = -g with eigenvalue clamping; H symmetric PSD up to roundoff.
inline std::vector<double> solve_newton_system(const Mat& h, const std::vector<double>& g) {
  const int n = h.rows();
  const SymEig e = eig_sym(h);
  const double lmax = std::max(e.values.back(), 1e-300);
  const double floor_ev = 1e-13 * lmax;
  std::vector<double> d(n, 0.0);
  for (int k = 0; k < n; ++k) {
    double proj = 0.0;
    for (int i = 0; i < n; ++i) proj += e.vectors(i, k) * g[i];
    const double ev = std::max(e.values[k], floor_ev);
    const double coef = -proj / ev;
    for (int i = 0; i < n; ++i) d[i] += coef * e.vectors(i, k);
  }
  return d;
}

struct CenterResult {
  double decrement_sq = 0.0;
  int steps = 0;
};

// Newton centering of tau * c.y + Phi(y); mutates y in place.
inline CenterResult center(const std::vector<BarrierBlock>& blocks,
                           const std::vector<double>& c, double tau,
                           std::vector<double>* y, int max_steps, int* budget) {
  const int nv = static_cast<int>(y->size());
  CenterResult res;
  for (int step = 0; step < max_steps; ++step) {
    if (--(*budget) < 0) throw SolverError("lmi: Newton iteration limit exceeded");
    ++res.steps;
    std::vector<double> grad(nv, 0.0);
    for (int i = 0; i < nv; ++i) grad[i] = tau * c[i];
    Mat hess(nv, nv);
    for (const auto& b : blocks) {
      const Mat s = b.eval(*y);
      const auto l = cholesky(s);
      if (!l) throw SolverError("lmi: iterate left the interior");
      std::vector<std::pair<int, Mat>> whitened;
      whitened.reserve(b.terms.size());
      for (const auto& [idx, g] : b.terms) whitened.emplace_back(idx, whiten(*l, g));
      for (const auto& [idx, w] : whitened) {
        double tr = 0.0;
        for (int i = 0; i < w.rows(); ++i) tr += w(i, i);
        grad[idx] -= tr;
      }
      for (size_t a = 0; a < whitened.size(); ++a)
        for (size_t bb = a; bb < whitened.size(); ++bb) {
          const double v = frob_inner(whitened[a].second, whitened[bb].second);
          hess(whitened[a].first, whitened[bb].first) += v;
          if (whitened[a].first != whitened[bb].first)
            hess(whitened[bb].first, whitened[a].first) += v;
        }
    }
    const std::vector<double> dir = solve_newton_system(hess, grad);
    double dec_sq = 0.0, gd = 0.0;
    for (int i = 0; i < nv; ++i) {
      double hd = 0.0;
      for (int j = 0; j < nv; ++j) hd += hess(i, j) * dir[j];
      dec_sq += dir[i] * hd;
      gd += grad[i] * dir[i];
    }
    res.decrement_sq = dec_sq;
    if (dec_sq * 0.5 < 1e-10) return res;

    double objective = 0.0;
    for (int i = 0; i < nv; ++i) objective += tau * c[i] * (*y)[i];
    const double psi0 = objective + barrier_value(blocks, *y);
    double alpha = 1.0;
    std::vector<double> trial(nv);
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (int i = 0; i < nv; ++i) trial[i] = (*y)[i] + alpha * dir[i];
      if (strictly_feasible(blocks, trial)) {
        double obj_t = 0.0;
        for (int i = 0; i < nv; ++i) obj_t += tau * c[i] * trial[i];
        const double psi_t = obj_t + barrier_value(blocks, trial);
        if (psi_t <= psi0 + 0.25 * alpha * gd) {
          *y = trial;
          moved = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!moved) return res;  // stalled at numerical floor; caller inspects state
  }
  return res;
}

}  // namespace detail

/// Decides strict-margin feasibility. The relaxation "minimize t with every
/// constraint <= t" is traced by a barrier path and stopped as soon as either
/// a point with the required margin is found or the dual bound proves the
/// optimum nonnegative.
inline Solution solve_feasibility(const Problem& problem, SolveOptions opts = {}) {
  problem.validate();
  const double scale = 1.0 + problem.max_entry();
  const double margin_req =
      opts.margin_required > 0 ? opts.margin_required : 1e-8 * scale;

  // Barrier formulation over y = (x, t), everything relaxed against t.
  const int nv = problem.var_count;
  const int t_idx = nv;
  std::vector<detail::BarrierBlock> blocks;
  const double inv_scale = 1.0 / scale;
  for (const auto& b : problem.blocks) {
    detail::BarrierBlock bb;
    const int k = b.f0.rows();
    bb.g0 = (-inv_scale) * b.f0;
    for (const auto& [idx, f] : b.terms) bb.terms.emplace_back(idx, (-inv_scale) * f);
    bb.terms.emplace_back(t_idx, Mat::identity(k));
    blocks.push_back(std::move(bb));
  }
  auto scalar_block = [&](double g0, std::vector<std::pair<int, double>> coeffs) {
    detail::BarrierBlock bb;
    bb.g0 = Mat{{g0}};
    for (auto& [idx, c] : coeffs) bb.terms.emplace_back(idx, Mat{{c}});
    bb.terms.emplace_back(t_idx, Mat{{1.0}});
    blocks.push_back(std::move(bb));
  };
  for (int v : problem.nonneg_vars) scalar_block(0.0, {{v, 1.0}});
  for (const auto& li : problem.linear) {
    // scale linear rows like the matrix blocks so t has one meaning
    std::vector<std::pair<int, double>> coeffs;
    for (const auto& [idx, c] : li.a) coeffs.emplace_back(idx, -c * inv_scale);
    scalar_block(-li.b * inv_scale, std::move(coeffs));
  }
  for (int v = 0; v < nv; ++v) {
    scalar_block(opts.var_bound, {{v, -1.0}});
    scalar_block(opts.var_bound, {{v, 1.0}});
  }
  const double total_degree = [&] {
    double m = 0.0;
    for (const auto& b : blocks) m += b.g0.rows();
    return m;
  }();

  std::vector<double> y(nv + 1, 0.0);
  {
    // x = 0; pick t inside every relaxed block
    double t0 = 0.0;
    for (const auto& b : blocks) t0 = std::max(t0, -eig_min_sym(b.g0));
    y[t_idx] = t0 + 1.0;
  }

  const double margin_scaled = margin_req * inv_scale;
  const double tol_amb_scaled = opts.tol_ambiguous * inv_scale;
  const double gap_target = 0.05 * std::min(margin_scaled, tol_amb_scaled);
  std::vector<double> objective(nv + 1, 0.0);
  objective[t_idx] = 1.0;

  Solution sol;
  int budget = opts.max_newton;
  double tau = 1.0;
  double gap = std::numeric_limits<double>::infinity();
  std::vector<double> x(nv, 0.0);
  for (int stage = 0; stage < 80; ++stage) {
    detail::center(blocks, objective, tau, &y, 100, &budget);
    sol.newton_steps = opts.max_newton - budget;
    gap = total_degree / tau;
    for (int i = 0; i < nv; ++i) x[i] = y[i];
    const double incumbent = problem.block_margin(x);  // original units
    sol.t_upper = incumbent;
    sol.t_lower = (y[t_idx] - gap) * scale;
    if (incumbent <= -margin_req && problem.scalar_violation(x) <= 1e-10) {
      sol.verdict = Verdict::feasible;
      sol.x = x;
      sol.margin = -incumbent;
      return sol;
    }
    if (sol.t_lower >= opts.tol_ambiguous) {
      sol.verdict = Verdict::infeasible;
      return sol;
    }
    if (gap <= gap_target) break;
    tau *= 10.0;
  }
  sol.verdict = Verdict::ambiguous;
  return sol;
}

struct MinimizeResult {
  bool ok = false;
  std::vector<double> x;
  double objective = 0.0;
};

/// Minimizes c.x over the strict interior of the problem's constraints,
/// starting from a strictly feasible x0. Used to polish certificates.
inline MinimizeResult minimize_linear(const Problem& problem, const std::vector<double>& c,
                                      const std::vector<double>& x0, double rel_tol = 1e-6,
                                      SolveOptions opts = {}) {
  problem.validate();
  const double scale = 1.0 + problem.max_entry();
  const int nv = problem.var_count;
  std::vector<detail::BarrierBlock> blocks;
  const double inv_scale = 1.0 / scale;
  for (const auto& b : problem.blocks) {
    detail::BarrierBlock bb;
    bb.g0 = (-inv_scale) * b.f0;
    for (const auto& [idx, f] : b.terms) bb.terms.emplace_back(idx, (-inv_scale) * f);
    blocks.push_back(std::move(bb));
  }
  for (int v : problem.nonneg_vars) {
    detail::BarrierBlock bb;
    bb.g0 = Mat{{0.0}};
    bb.terms.emplace_back(v, Mat{{1.0}});
    blocks.push_back(std::move(bb));
  }
  for (const auto& li : problem.linear) {
    detail::BarrierBlock bb;
    bb.g0 = Mat{{-li.b * inv_scale}};
    for (const auto& [idx, cc] : li.a) bb.terms.emplace_back(idx, Mat{{-cc * inv_scale}});
    blocks.push_back(std::move(bb));
  }
  for (int v = 0; v < nv; ++v) {
    detail::BarrierBlock lo, hi;
    lo.g0 = Mat{{opts.var_bound}};
    lo.terms.emplace_back(v, Mat{{1.0}});
    hi.g0 = Mat{{opts.var_bound}};
    hi.terms.emplace_back(v, Mat{{-1.0}});
    blocks.push_back(std::move(lo));
    blocks.push_back(std::move(hi));
  }

  MinimizeResult res;
  if (static_cast<int>(x0.size()) != nv)
    throw std::invalid_argument("minimize_linear: x0 size mismatch");
  std::vector<double> y = x0;
  if (!detail::strictly_feasible(blocks, y)) return res;
  double total_degree = 0.0;
  for (const auto& b : blocks) total_degree += b.g0.rows();
  double cnorm = 0.0;
  for (double v : c) cnorm = std::max(cnorm, std::abs(v));
  if (cnorm == 0.0) cnorm = 1.0;

  int budget = opts.max_newton;
  double tau = 1.0;
  try {
    for (int stage = 0; stage < 60; ++stage) {
      detail::center(blocks, c, tau, &y, 100, &budget);
      const double gap = total_degree / tau;
      double obj = 0.0;
      for (int i = 0; i < nv; ++i) obj += c[i] * y[i];
      if (gap <= rel_tol * (1.0 + std::abs(obj))) break;
      tau *= 10.0;
    }
  } catch (const SolverError&) {
    return res;  // polish is best-effort
  }
  res.ok = true;
  res.x = y;
  res.objective = 0.0;
  for (int i = 0; i < nv; ++i) res.objective += c[i] * y[i];
  return res;
}

/// Grid-search oracle for tiny instances (test cross-validation only).
struct BruteForceResult {
  Verdict verdict = Verdict::infeasible;
  double best_margin = std::numeric_limits<double>::infinity();
  std::vector<double> best_x;
};

inline BruteForceResult brute_force_feasibility(const Problem& problem,
                                                const std::vector<std::pair<double, double>>& box,
                                                int grid_points) {
  problem.validate();
  if (problem.var_count > 4)
    throw std::invalid_argument("brute_force_feasibility: var_count > 4 refused");
  if (static_cast<int>(box.size()) != problem.var_count)
    throw std::invalid_argument("brute_force_feasibility: box size mismatch");
  if (grid_points < 2) throw std::invalid_argument("brute_force_feasibility: grid too small");

  BruteForceResult res;
  const int nv = problem.var_count;
  std::vector<int> idx(nv, 0);
  std::vector<double> x(nv, 0.0);
  while (true) {
    for (int i = 0; i < nv; ++i) {
      const auto [lo, hi] = box[i];
      x[i] = lo + (hi - lo) * idx[i] / (grid_points - 1);
    }
    const double margin = problem.point_margin(x);
    if (margin < res.best_margin) {
      res.best_margin = margin;
      res.best_x = x;
    }
    int d = 0;
    while (d < nv && ++idx[d] == grid_points) idx[d++] = 0;
    if (d == nv) break;
  }
  res.verdict = res.best_margin <= 0.0 ? Verdict::feasible : Verdict::infeasible;
  return res;
}

}  // namespace iqccert::lmi
