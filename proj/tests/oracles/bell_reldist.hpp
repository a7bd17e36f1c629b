#pragma once

// Relative entropy of the two-qubit Bell state |Phi+> to the hull of the four computational
// product states and I/4. Every hull point is diagonal, sigma = diag(a, b, c, e), and
// S(Phi+ || sigma) = -(log2 a + log2 e) / 2. By symmetry the optimum has a = e = t and
// b = c = 1/2 - t, leaving a one-parameter problem in t on (0, 1/2].

#include <cmath>

namespace oracle {

inline double bell_diagonal_objective(double t) { return -std::log2(t); }

inline double bell_diagonal_hull_reldist() {
  // Golden-section search on the one-parameter family.
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 1e-6, hi = 0.5;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  for (int it = 0; it < 200; ++it) {
    if (bell_diagonal_objective(x1) < bell_diagonal_objective(x2)) {
      hi = x2;
    } else {
      lo = x1;
    }
    x1 = hi - g * (hi - lo);
    x2 = lo + g * (hi - lo);
  }
  return bell_diagonal_objective(0.5 * (lo + hi));
}

}  // namespace oracle
