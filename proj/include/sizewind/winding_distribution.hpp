#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace sizewind {

// Axis on which a size-type distribution is resolved. The ZZ coupling reads
// the number of X/Y factors on the carrier sites rather than the full size,
// so grid inversions naturally live on the xy_weight axis.
enum class SizeAxis { kSize, kXyWeight };

// Winding distribution q(l) = sum_{|P|=l} c_P^2 together with the
// conventional distribution p(l) = sum_{|P|=l} |c_P|^2, l = 0..n.
struct WindingDistribution {
  int n = 0;
  SizeAxis axis = SizeAxis::kSize;
  std::vector<std::complex<double>> q;
  std::vector<double> p;

  WindingDistribution() = default;
  WindingDistribution(int n_, SizeAxis axis_ = SizeAxis::kSize)
      : n(n_), axis(axis_), q(n_ + 1, 0.0), p(n_ + 1, 0.0) {}

  std::complex<double> total_q() const {
    std::complex<double> s = 0;
    for (auto v : q) s += v;
    return s;
  }
  double total_p() const {
    double s = 0;
    for (auto v : p) s += v;
    return s;
  }
  double mean_p() const {
    double s = 0;
    for (int l = 0; l <= n; ++l) s += l * p[l];
    return s / total_p();
  }
  double sigma_p() const {
    double m = mean_p(), s = 0;
    for (int l = 0; l <= n; ++l) s += (l - m) * (l - m) * p[l];
    return std::sqrt(s / total_p());
  }

  void normalize() {
    double s = total_p();
    if (s <= 0) throw std::runtime_error("cannot normalize empty distribution");
    for (auto& v : p) v /= s;
    for (auto& v : q) v /= s;
  }

  // |q(l)| <= p(l) is a Cauchy-Schwarz bound over equal-size Paulis.
  void validate(double tol = 1e-12) const {
    for (int l = 0; l <= n; ++l) {
      if (p[l] < -tol) throw std::runtime_error("negative probability bin");
      if (std::abs(q[l]) > p[l] + tol)
        throw std::runtime_error("winding bin exceeds probability bin");
    }
  }
};

// Heuristic conversion of an xy-weight axis value to an expected full size:
// a uniformly random non-identity factor is X or Y with probability 2/3.
inline double xy_weight_to_size_estimate(double w) { return 1.5 * w; }

}  // namespace sizewind
