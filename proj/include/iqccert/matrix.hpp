// Small dense matrix helpers for the rate-certification pipeline.
// Everything here targets matrices of size <= ~10; algorithms are chosen
// for robustness, not asymptotic speed.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace iqccert {

/// Dense real matrix, row-major storage.
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("Mat: negative dimension");
  }
  Mat(std::initializer_list<std::initializer_list<double>> init) {
    rows_ = static_cast<int>(init.size());
    cols_ = rows_ > 0 ? static_cast<int>(init.begin()->size()) : 0;
    data_.reserve(static_cast<size_t>(rows_) * cols_);
    for (const auto& row : init) {
      if (static_cast<int>(row.size()) != cols_)
        throw std::invalid_argument("Mat: ragged initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Mat identity(int n) {
    Mat I(n, n);
    for (int i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
  }
  static Mat zeros(int rows, int cols) { return Mat(rows, cols); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

  Mat transpose() const {
    Mat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  Mat& operator+=(const Mat& o) {
    check_same_shape(o);
    for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    check_same_shape(o);
    for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Mat& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }

  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator*(Mat a, double s) { return a *= s; }
  friend Mat operator*(double s, Mat a) { return a *= s; }

  friend Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("Mat: incompatible product");
    Mat c(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const double aik = a(i, k);
        if (aik == 0.0) continue;
        for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

 private:
  void check_same_shape(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("Mat: shape mismatch");
  }
  int rows_;
  int cols_;
  std::vector<double> data_;
};

inline double symmetry_defect(const Mat& a) {
  if (!a.square()) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i + 1; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - a(j, i)));
  return d;
}

/// Tolerances are scale-relative: tol * (1 + max|entry|).
inline bool is_symmetric(const Mat& a, double tol = 1e-12) {
  return a.square() && symmetry_defect(a) <= tol * (1.0 + a.max_abs());
}

struct SymEig {
  std::vector<double> values;  // ascending
  Mat vectors;                 // columns are orthonormal eigenvectors
};

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
/// Accepts square matrices symmetric within 1e-12*(1+max|A|); rejects others.
inline SymEig eig_sym(const Mat& a_in) {
  if (!a_in.square()) throw std::invalid_argument("eig_sym: matrix not square");
  if (!is_symmetric(a_in)) throw std::invalid_argument("eig_sym: matrix not symmetric");
  const int n = a_in.rows();
  Mat a = a_in;
  // symmetrize exactly to avoid drift from the tolerated defect
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = a(j, i) = v;
    }
  Mat v = Mat::identity(n);
  const double scale = 1.0 + a.max_abs();

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off <= 1e-34 * scale * scale) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        const double app = a(p, p), aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (int r = 0; r < n; ++r) {
          if (r != p && r != q) {
            const double arp = a(r, p), arq = a(r, q);
            a(r, p) = a(p, r) = arp - s * (arq + tau * arp);
            a(r, q) = a(q, r) = arq + s * (arp - tau * arq);
          }
          const double vrp = v(r, p), vrq = v(r, q);
          v(r, p) = vrp - s * (vrq + tau * vrp);
          v(r, q) = vrq + s * (vrp - tau * vrq);
        }
      }
    }
  }

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return a(i, i) < a(j, j); });
  SymEig out;
  out.values.resize(n);
  out.vectors = Mat(n, n);
  for (int j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (int i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

inline double eig_max_sym(const Mat& a) { return eig_sym(a).values.back(); }
inline double eig_min_sym(const Mat& a) { return eig_sym(a).values.front(); }

/// Condition number lambda_max/lambda_min of a symmetric positive definite matrix.
inline double cond_sym(const Mat& a) {
  const SymEig e = eig_sym(a);
  if (e.values.front() <= 0.0)
    throw std::invalid_argument("cond_sym: matrix not positive definite");
  return e.values.back() / e.values.front();
}

namespace detail {

// Eigenvalue moduli of the trailing 1x1/2x2 blocks of a quasi-triangular matrix.
inline void push_block_moduli(const Mat& h, int lo, int hi, std::vector<double>* out) {
  if (hi == lo) {
    out->push_back(std::abs(h(lo, lo)));
    return;
  }
  const double tr = h(lo, lo) + h(hi, hi);
  const double det = h(lo, lo) * h(hi, hi) - h(lo, hi) * h(hi, lo);
  const double disc = tr * tr - 4.0 * det;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    out->push_back(std::abs(0.5 * (tr + s)));
    out->push_back(std::abs(0.5 * (tr - s)));
  } else {
    out->push_back(std::sqrt(std::max(det, 0.0)));
    out->push_back(std::sqrt(std::max(det, 0.0)));
  }
}

// Francis double-shift QR on an upper Hessenberg matrix; returns eigenvalue moduli.
inline std::vector<double> hessenberg_qr_moduli(Mat h) {
  const int n = h.rows();
  std::vector<double> mods;
  const double scale = 1.0 + h.max_abs();
  int hi = n - 1;
  int iter_since_deflate = 0;
  while (hi >= 0) {
    // find the active block [lo, hi]
    int lo = hi;
    while (lo > 0 && std::abs(h(lo, lo - 1)) >
                         1e-15 * (std::abs(h(lo, lo)) + std::abs(h(lo - 1, lo - 1)) + scale * 1e-30))
      --lo;
    if (lo > 0) h(lo, lo - 1) = 0.0;
    if (hi - lo <= 1) {
      push_block_moduli(h, lo, hi, &mods);
      hi = lo - 1;
      iter_since_deflate = 0;
      continue;
    }
    if (++iter_since_deflate > 120)
      throw std::runtime_error("hessenberg_qr: failed to converge");

    // double shift from the trailing 2x2 block (exceptional shift occasionally)
    double s = h(hi - 1, hi - 1) + h(hi, hi);
    double t = h(hi - 1, hi - 1) * h(hi, hi) - h(hi - 1, hi) * h(hi, hi - 1);
    if (iter_since_deflate % 31 == 30) {
      const double w = std::abs(h(hi, hi - 1)) + std::abs(h(hi - 1, hi - 2));
      s = 2.0 * w;
      t = w * w;
    }
    double x = h(lo, lo) * h(lo, lo) + h(lo, lo + 1) * h(lo + 1, lo) - s * h(lo, lo) + t;
    double y = h(lo + 1, lo) * (h(lo, lo) + h(lo + 1, lo + 1) - s);
    double z = h(lo + 2, lo + 1) * h(lo + 1, lo);
    for (int k = lo; k <= hi - 2; ++k) {
      // Householder on (x,y,z)
      const double alpha = std::sqrt(x * x + y * y + z * z);
      if (alpha > 0.0) {
        const double sign = x >= 0 ? 1.0 : -1.0;
        double v0 = x + sign * alpha, v1 = y, v2 = z;
        const double vnorm2 = v0 * v0 + v1 * v1 + v2 * v2;
        if (vnorm2 > 0.0) {
          const int r0 = k, r1 = k + 1, r2 = k + 2;
          for (int j = std::max(lo, k - 1); j < n; ++j) {
            const double dot = v0 * h(r0, j) + v1 * h(r1, j) + v2 * h(r2, j);
            const double f = 2.0 * dot / vnorm2;
            h(r0, j) -= f * v0;
            h(r1, j) -= f * v1;
            h(r2, j) -= f * v2;
          }
          const int last = std::min(hi, k + 3);
          for (int i = 0; i <= last; ++i) {
            const double dot = v0 * h(i, r0) + v1 * h(i, r1) + v2 * h(i, r2);
            const double f = 2.0 * dot / vnorm2;
            h(i, r0) -= f * v0;
            h(i, r1) -= f * v1;
            h(i, r2) -= f * v2;
          }
        }
      }
      x = h(k + 1, k);
      y = h(k + 2, k);
      z = (k + 3 <= hi) ? h(k + 3, k) : 0.0;
    }
    // final 2x2 rotation on (x, y)
    const double alpha = std::sqrt(x * x + y * y);
    if (alpha > 0.0) {
      const double sign = x >= 0 ? 1.0 : -1.0;
      double v0 = x + sign * alpha, v1 = y;
      const double vnorm2 = v0 * v0 + v1 * v1;
      const int r0 = hi - 1, r1 = hi;
      for (int j = hi - 2; j < n; ++j) {
        const double dot = v0 * h(r0, j) + v1 * h(r1, j);
        const double f = 2.0 * dot / vnorm2;
        h(r0, j) -= f * v0;
        h(r1, j) -= f * v1;
      }
      for (int i = 0; i <= hi; ++i) {
        const double dot = v0 * h(i, r0) + v1 * h(i, r1);
        const double f = 2.0 * dot / vnorm2;
        h(i, r0) -= f * v0;
        h(i, r1) -= f * v1;
      }
    }
  }
  return mods;
}

inline Mat to_hessenberg(Mat a) {
  const int n = a.rows();
  for (int k = 0; k < n - 2; ++k) {
    double norm = 0.0;
    for (int i = k + 1; i < n; ++i) norm += a(i, k) * a(i, k);
    norm = std::sqrt(norm);
    if (norm <= 1e-300) continue;
    std::vector<double> v(n, 0.0);
    const double sign = a(k + 1, k) >= 0 ? 1.0 : -1.0;
    v[k + 1] = a(k + 1, k) + sign * norm;
    for (int i = k + 2; i < n; ++i) v[i] = a(i, k);
    double vnorm2 = 0.0;
    for (int i = k + 1; i < n; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 <= 0.0) continue;
    for (int j = 0; j < n; ++j) {
      double dot = 0.0;
      for (int i = k + 1; i < n; ++i) dot += v[i] * a(i, j);
      const double f = 2.0 * dot / vnorm2;
      for (int i = k + 1; i < n; ++i) a(i, j) -= f * v[i];
    }
    for (int i = 0; i < n; ++i) {
      double dot = 0.0;
      for (int j = k + 1; j < n; ++j) dot += a(i, j) * v[j];
      const double f = 2.0 * dot / vnorm2;
      for (int j = k + 1; j < n; ++j) a(i, j) -= f * v[j];
    }
  }
  for (int i = 2; i < n; ++i)
    for (int j = 0; j < i - 1; ++j) a(i, j) = 0.0;
  return a;
}

// Largest root modulus of x^3 + a x^2 + b x + c.
inline double cubic_max_root_modulus(double a, double b, double c) {
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double disc = q * q / 4.0 + p * p * p / 27.0;
  const double shift = -a / 3.0;
  if (disc <= 0.0) {
    // three real roots
    const double r = std::sqrt(std::max(-p * p * p / 27.0, 0.0));
    double phi = 0.0;
    if (r > 0.0) {
      double arg = -q / (2.0 * r);
      arg = std::clamp(arg, -1.0, 1.0);
      phi = std::acos(arg);
    }
    const double mag = 2.0 * std::sqrt(std::max(-p / 3.0, 0.0));
    double best = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double root = shift + mag * std::cos((phi + 2.0 * M_PI * k) / 3.0);
      best = std::max(best, std::abs(root));
    }
    return best;
  }
  // one real root, complex pair
  const double s = std::sqrt(disc);
  const double u = std::cbrt(-q / 2.0 + s);
  const double w = std::cbrt(-q / 2.0 - s);
  const double real_root = shift + u + w;
  // deflate: remaining quadratic x^2 + (a + r) x + (b + r(a + r))
  const double qb = a + real_root;
  const double qc = b + real_root * qb;
  const double qdisc = qb * qb - 4.0 * qc;
  double pair_mod;
  if (qdisc >= 0.0) {
    const double sq = std::sqrt(qdisc);
    pair_mod = std::max(std::abs(0.5 * (-qb + sq)), std::abs(0.5 * (-qb - sq)));
  } else {
    pair_mod = std::sqrt(std::max(qc, 0.0));
  }
  return std::max(std::abs(real_root), pair_mod);
}

}  // namespace detail

/// Largest eigenvalue magnitude of a square real matrix (spectrum may be complex).
/// n <= 3 is handled analytically; larger matrices go through Hessenberg-QR.
inline double spectral_radius(const Mat& a) {
  if (!a.square()) throw std::invalid_argument("spectral_radius: matrix not square");
  const int n = a.rows();
  if (n == 0) return 0.0;
  if (n == 1) return std::abs(a(0, 0));
  if (n == 2) {
    // Extended precision plus a repeated-root snap: discriminants below the
    // double-rounding noise floor of the entries are indistinguishable from
    // a double root, and the square-root kink would otherwise inflate the
    // result by ~sqrt(ulp) exactly where worst-case rates live.
    const long double tr = static_cast<long double>(a(0, 0)) + a(1, 1);
    const long double det = static_cast<long double>(a(0, 0)) * a(1, 1) -
                            static_cast<long double>(a(0, 1)) * a(1, 0);
    const long double disc = tr * tr - 4.0L * det;
    const long double noise = 64.0L * 2.22e-16L * (tr * tr + 4.0L * fabsl(det));
    if (disc > noise) {
      const long double s = sqrtl(disc);
      return static_cast<double>(std::max(fabsl(0.5L * (tr + s)), fabsl(0.5L * (tr - s))));
    }
    if (disc >= -noise) return static_cast<double>(fabsl(0.5L * tr));
    return static_cast<double>(sqrtl(det > 0.0L ? det : 0.0L));
  }
  if (n == 3) {
    const double tr = a(0, 0) + a(1, 1) + a(2, 2);
    const double m01 = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const double m02 = a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0);
    const double m12 = a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
    const double det = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
                       a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
                       a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    return detail::cubic_max_root_modulus(-tr, m01 + m02 + m12, -det);
  }
  const std::vector<double> mods = detail::hessenberg_qr_moduli(detail::to_hessenberg(a));
  double best = 0.0;
  for (double m : mods) best = std::max(best, m);
  return best;
}

/// Kronecker product, block structure [a_ij * B].
inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      const double aij = a(i, j);
      if (aij == 0.0) continue;
      for (int p = 0; p < b.rows(); ++p)
        for (int q = 0; q < b.cols(); ++q)
          out(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
    }
  return out;
}

}  // namespace iqccert
