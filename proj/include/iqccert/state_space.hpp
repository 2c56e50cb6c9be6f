#pragma once

#include <stdexcept>

#include "iqccert/matrix.hpp"

namespace iqccert {

/// Discrete-time state-space block (A, B, C, D); all signals are scalar
/// per coordinate here (d = 1 reductions).
struct StateSpace {
  Mat a, b, c, d;

  StateSpace() = default;
  StateSpace(Mat a_, Mat b_, Mat c_, Mat d_)
      : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {
    if (!a.square()) throw std::invalid_argument("StateSpace: A not square");
    if (b.rows() != a.rows()) throw std::invalid_argument("StateSpace: B row mismatch");
    if (c.cols() != a.cols()) throw std::invalid_argument("StateSpace: C column mismatch");
    if (d.rows() != c.rows() || d.cols() != b.cols())
      throw std::invalid_argument("StateSpace: D dimension mismatch");
  }

  int states() const { return a.rows(); }
  int inputs() const { return b.cols(); }
  int outputs() const { return c.rows(); }
};

}  // namespace iqccert
