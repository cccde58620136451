#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace sizewind {

// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
// on the Legendre recurrence.
inline std::vector<std::pair<double, double>> gauss_legendre_nodes(int n) {
  std::vector<std::pair<double, double>> out(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    out[i] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
  }
  return out;
}

// Adaptive Simpson quadrature for complex-valued integrands on [a, b].
namespace detail {
inline std::complex<double> simpson_step(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    std::complex<double> fa, std::complex<double> fm, std::complex<double> fb,
    std::complex<double> whole, double tol, int depth, bool* converged) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  std::complex<double> flm = f(lm), frm = f(rm);
  std::complex<double> left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  std::complex<double> right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  std::complex<double> sum = left + right;
  if (depth <= 0) {
    *converged = false;
    return sum;
  }
  if (std::abs(sum - whole) < 15.0 * tol) return sum + (sum - whole) / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, tol / 2, depth - 1, converged) +
         simpson_step(f, m, b, fm, frm, fb, right, tol / 2, depth - 1, converged);
}
}  // namespace detail

inline std::complex<double> adaptive_simpson(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    double tol = 1e-10, int max_depth = 40) {
  std::complex<double> fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  std::complex<double> whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  bool converged = true;
  auto result =
      detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth, &converged);
  if (!converged)
    throw std::runtime_error("adaptive quadrature failed to converge");
  return result;
}

}  // namespace sizewind
