#include "sizewind/winding.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sizewind::winding {

using std::complex;
namespace {
const complex<double> kI{0.0, 1.0};

const complex<double> kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
}  // namespace

std::complex<double> PauliCoefficients::at(const PauliString& p) const {
  std::uint64_t zm = 0, xm = 0;
  for (int j = 0; j < n; ++j) {
    if (p.z_bit(j)) zm |= std::uint64_t{1} << (n - 1 - j);
    if (p.x_bit(j)) xm |= std::uint64_t{1} << (n - 1 - j);
  }
  return c[index(zm, xm)];
}

PauliString PauliCoefficients::pattern_of(std::size_t idx) const {
  std::uint64_t zm = idx >> n, xm = idx & ((std::uint64_t{1} << n) - 1);
  PauliString p(n);
  for (int j = 0; j < n; ++j) {
    std::uint64_t bit = std::uint64_t{1} << (n - 1 - j);
    p.set_site(j, zm & bit, xm & bit);
  }
  return p;
}

PauliCoefficients pauli_coefficients(const SpectralCache& h, double beta,
                                     const PauliString& o, double t, int max_n) {
  int d = h.dim();
  int n = std::countr_zero(static_cast<unsigned>(d));
  if (n > max_n) {
    std::ostringstream msg;
    msg << "pauli_coefficients: n = " << n << " exceeds the 4^n expansion cap "
        << max_n << "; use fourier_distribution instead";
    throw std::runtime_error(msg.str());
  }
  // rho^{1/2} O(t) with the thermal factor normalized to unit trace
  double e0 = h.eigenvalues().minCoeff();
  Eigen::VectorXd w(d);
  for (int i = 0; i < d; ++i)
    w[i] = std::exp(-0.5 * beta * (h.eigenvalues()[i] - e0));
  w /= std::sqrt(w.squaredNorm());
  Eigen::MatrixXcd sqrt_rho = h.eigenvectors() *
                              w.cast<complex<double>>().asDiagonal() *
                              h.eigenvectors().adjoint();
  Eigen::MatrixXcd u = h.propagator(t);
  Eigen::MatrixXcd m = sqrt_rho * u.adjoint() * o.dense() * u;

  PauliCoefficients out;
  out.n = n;
  out.c.assign(std::size_t{1} << (2 * n), 0.0);
  double scale = std::pow(2.0, -0.5 * n);
  const std::uint64_t dim_mask = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t zm = 0; zm <= dim_mask; ++zm) {
    for (std::uint64_t xm = 0; xm <= dim_mask; ++xm) {
      // Tr[P M] = i^{-|z&x|} sum_a (-1)^{z.a} M(a^x, a)
      complex<double> acc = 0;
      for (std::uint64_t a = 0; a <= dim_mask; ++a) {
        double sign = (std::popcount(zm & a) & 1) ? -1.0 : 1.0;
        acc += sign * m(a ^ xm, a);
      }
      int ys = std::popcount(zm & xm) & 3;
      out.c[out.index(zm, xm)] = scale * kIPow[(4 - ys) & 3] * acc;
    }
  }
  return out;
}

DenseOperator resynthesize(const PauliCoefficients& coeffs) {
  int n = coeffs.n;
  Eigen::Index d = Eigen::Index{1} << n;
  DenseOperator m = DenseOperator::Zero(d, d);
  double scale = std::pow(2.0, -0.5 * n);
  const std::uint64_t dim_mask = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t zm = 0; zm <= dim_mask; ++zm)
    for (std::uint64_t xm = 0; xm <= dim_mask; ++xm) {
      complex<double> c = coeffs.c[coeffs.index(zm, xm)];
      if (std::abs(c) < 1e-300) continue;
      int ys = std::popcount(zm & xm) & 3;
      complex<double> pref = scale * c * kIPow[(4 - ys) & 3];
      for (std::uint64_t a = 0; a <= dim_mask; ++a) {
        double sign = (std::popcount(zm & (a ^ xm)) & 1) ? -1.0 : 1.0;
        m(a ^ xm, a) += pref * sign;
      }
    }
  return m;
}

WindingDistribution distributions_from_coefficients(
    const PauliCoefficients& coeffs, SizeAxis axis,
    const std::vector<int>& carriers) {
  int n = coeffs.n;
  std::uint64_t carrier_mask;
  int top;
  if (axis == SizeAxis::kXyWeight) {
    if (carriers.empty()) {
      carrier_mask = (std::uint64_t{1} << n) - 1;
      top = n;
    } else {
      carrier_mask = 0;
      for (int j : carriers) carrier_mask |= std::uint64_t{1} << (n - 1 - j);
      top = static_cast<int>(carriers.size());
    }
  } else {
    carrier_mask = (std::uint64_t{1} << n) - 1;
    top = n;
  }

  WindingDistribution dist(top, axis);
  const std::uint64_t dim_mask = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t zm = 0; zm <= dim_mask; ++zm)
    for (std::uint64_t xm = 0; xm <= dim_mask; ++xm) {
      complex<double> c = coeffs.c[coeffs.index(zm, xm)];
      int l = axis == SizeAxis::kSize
                  ? std::popcount((zm | xm) & carrier_mask)
                  : std::popcount(xm & carrier_mask);
      dist.q[l] += c * c;
      dist.p[l] += std::norm(c);
    }
  return dist;
}

std::vector<double> default_g_grid(int k) {
  std::vector<double> grid(k + 1);
  for (int j = 0; j <= k; ++j) grid[j] = M_PI * k * j / (k + 1.0);
  return grid;
}

WindingDistribution fourier_distribution(const SpectralCache& h, double beta,
                                         const PauliString& o, double t,
                                         const std::vector<double>& g_grid,
                                         const exact::CouplingSpec& spec) {
  int k = spec.k();
  int rows = static_cast<int>(g_grid.size());
  if (rows < k + 1)
    throw std::invalid_argument("coupling grid must have at least k+1 points");

  Eigen::MatrixXcd a(rows, k + 1);
  Eigen::VectorXcd yq(rows), yp(rows);
  for (int j = 0; j < rows; ++j) {
    double g = g_grid[j];
    for (int w = 0; w <= k; ++w)
      a(j, w) = std::exp(-2.0 * kI * g * static_cast<double>(w) /
                         static_cast<double>(k));
    complex<double> strip = std::exp(-kI * g);
    yq[j] = strip * exact::two_point(h, beta, t, t, g, spec, o,
                                     exact::TwoPointForm::kDressedI, true);
    yp[j] = strip * exact::two_point(h, beta, t, t, g, spec, o,
                                     exact::TwoPointForm::kConventional, true);
  }

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double cond = svd.singularValues()(0) /
                svd.singularValues()(svd.singularValues().size() - 1);
  if (!(cond < 1e8)) {
    std::ostringstream msg;
    msg << "fourier_distribution: ill-conditioned inversion, cond = " << cond;
    throw std::runtime_error(msg.str());
  }
  Eigen::VectorXcd q = svd.solve(yq);
  Eigen::VectorXcd p = svd.solve(yp);

  WindingDistribution dist(k, SizeAxis::kXyWeight);
  for (int w = 0; w <= k; ++w) {
    dist.q[w] = q[w];
    dist.p[w] = p[w].real();
  }
  return dist;
}

namespace {

struct PhaseFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
};

// weighted least squares on the unwrapped bin phases
PhaseFit fit_phases(const WindingDistribution& dist, double floor_abs) {
  double sw = 0, sl = 0, sll = 0, sth = 0, slth = 0;
  double prev = 0.0;
  bool have_prev = false;
  std::vector<std::pair<double, double>> pts;  // (l, theta) with weight in p
  std::vector<double> ws;
  for (int l = 0; l <= dist.n; ++l) {
    if (dist.p[l] <= floor_abs) continue;
    double theta = std::arg(dist.q[l]);
    if (have_prev) {
      while (theta - prev > M_PI) theta -= 2.0 * M_PI;
      while (theta - prev < -M_PI) theta += 2.0 * M_PI;
    }
    prev = theta;
    have_prev = true;
    pts.emplace_back(l, theta);
    ws.push_back(dist.p[l]);
  }
  if (pts.empty()) throw std::runtime_error("all winding weight below floor");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double w = ws[i], l = pts[i].first, th = pts[i].second;
    sw += w;
    sl += w * l;
    sll += w * l * l;
    sth += w * th;
    slth += w * l * th;
  }
  PhaseFit fit;
  double denom = sw * sll - sl * sl;
  if (std::abs(denom) < 1e-300) {
    fit.slope = 0.0;
    fit.intercept = sth / sw;
  } else {
    fit.slope = (sw * slth - sl * sth) / denom;
    fit.intercept = (sth - fit.slope * sl) / sw;
  }
  double rss = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double r = pts[i].second - fit.intercept - fit.slope * pts[i].first;
    rss += ws[i] * r * r;
  }
  fit.residual = std::sqrt(rss / sw);
  return fit;
}

}  // namespace

PerfectWindingReport check_perfect_winding(const WindingDistribution& dist,
                                           double tol, double weight_floor_rel) {
  double pmax = 0;
  for (auto v : dist.p) pmax = std::max(pmax, v);
  double floor_abs = weight_floor_rel * pmax;

  PerfectWindingReport rep;
  rep.min_ratio = 1.0;
  bool any = false;
  for (int l = 0; l <= dist.n; ++l) {
    if (dist.p[l] <= floor_abs) continue;
    any = true;
    rep.min_ratio = std::min(rep.min_ratio, std::abs(dist.q[l]) / dist.p[l]);
  }
  if (!any) throw std::runtime_error("all winding weight below floor");

  auto fit = fit_phases(dist, floor_abs);
  rep.phase_slope = fit.slope;
  rep.alpha_fit = 0.5 * fit.slope * dist.n;
  rep.residual = fit.residual;
  rep.is_perfect = rep.min_ratio >= 1.0 - tol;
  return rep;
}

double windings_per_sigma(const WindingDistribution& dist,
                          double weight_floor_rel) {
  double pmax = 0;
  for (auto v : dist.p) pmax = std::max(pmax, v);
  auto fit = fit_phases(dist, weight_floor_rel * pmax);
  return std::abs(fit.slope) * dist.sigma_p() / (2.0 * M_PI);
}

}  // namespace sizewind::winding
