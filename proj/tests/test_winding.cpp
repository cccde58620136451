#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <complex>

#include "sizewind/ensembles.hpp"
#include "sizewind/exact_sim.hpp"
#include "sizewind/winding.hpp"

using namespace sizewind;
using namespace sizewind::winding;
namespace ens = sizewind::ensembles;
using std::complex;

namespace {
const complex<double> kI{0.0, 1.0};
}

TEST_CASE("pauli coefficients: trivial operator at t=0, beta=0") {
  ens::EnsembleSpec es{ens::EnsembleKind::kGue, 3, 1, 10};
  SpectralCache h(ens::sample(es, 0));
  auto x0 = PauliString::single(3, 0, 'X');
  auto coeffs = pauli_coefficients(h, 0.0, x0, 0.0);
  CHECK(std::abs(coeffs.at(x0) - 1.0) < 1e-12);
  double off = 0;
  for (std::size_t i = 0; i < coeffs.c.size(); ++i) {
    auto pat = coeffs.pattern_of(i);
    if (!pat.same_pattern(x0)) off = std::max(off, std::abs(coeffs.c[i]));
  }
  CHECK(off < 1e-12);
}

TEST_CASE("pauli coefficients: resynthesis reproduces the operator") {
  ens::EnsembleSpec es{ens::EnsembleKind::kGue, 3, 1, 11};
  SpectralCache h(ens::sample(es, 0));
  auto x0 = PauliString::single(3, 0, 'X');
  auto coeffs = pauli_coefficients(h, 1.7, x0, 0.9);
  DenseOperator rebuilt = resynthesize(coeffs);

  // direct rho^{1/2} O(t)
  Eigen::MatrixXcd u = h.propagator(0.9);
  Eigen::VectorXd w(h.dim());
  for (int i = 0; i < h.dim(); ++i)
    w[i] = std::exp(-0.5 * 1.7 * (h.eigenvalues()[i] - h.eigenvalues().minCoeff()));
  w /= std::sqrt(w.squaredNorm());
  Eigen::MatrixXcd target = h.eigenvectors() *
                            w.cast<complex<double>>().asDiagonal() *
                            h.eigenvectors().adjoint() * u.adjoint() *
                            x0.dense() * u;
  CHECK((rebuilt - target).cwiseAbs().maxCoeff() < 1e-10);

  // Parseval: total probability equals Tr[O rho O] = 1
  double total = 0;
  for (auto c : coeffs.c) total += std::norm(c);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));

  ens::EnsembleSpec big{ens::EnsembleKind::kGue, 8, 1, 1};
  SpectralCache hbig(ens::sample(big, 0));
  CHECK_THROWS(pauli_coefficients(hbig, 0.0, PauliString::single(8, 0, 'X'), 0.0));
}

TEST_CASE("distributions from coefficients") {
  ens::EnsembleSpec es{ens::EnsembleKind::kGue, 4, 1, 12};
  SpectralCache h(ens::sample(es, 0));
  auto x0 = PauliString::single(4, 0, 'X');

  // beta = 0: q = p elementwise (real coefficients)
  auto c0 = pauli_coefficients(h, 0.0, x0, 1.2);
  auto d0 = distributions_from_coefficients(c0);
  d0.validate();
  for (int l = 0; l <= 4; ++l) {
    CHECK(std::abs(d0.q[l].imag()) < 1e-10);
    CHECK(std::abs(d0.q[l].real() - d0.p[l]) < 1e-10);
  }

  // single X at t = 0: q(1) = 1
  auto c1 = pauli_coefficients(h, 0.0, x0, 0.0);
  auto d1 = distributions_from_coefficients(c1);
  CHECK(std::abs(d1.q[1] - 1.0) < 1e-12);
  CHECK(d1.total_p() == doctest::Approx(1.0).epsilon(1e-10));

  // beta > 0: |q| <= p with strict inequality somewhere at finite t
  auto c2 = pauli_coefficients(h, 6.0, x0, 1.0);
  auto d2 = distributions_from_coefficients(c2);
  d2.validate();
}

TEST_CASE("xy-weight axis bins by carrier X/Y content") {
  ens::EnsembleSpec es{ens::EnsembleKind::kGue, 3, 1, 14};
  SpectralCache h(ens::sample(es, 0));
  auto x0 = PauliString::single(3, 0, 'X');
  auto coeffs = pauli_coefficients(h, 0.0, x0, 0.0);
  auto dist = distributions_from_coefficients(coeffs, SizeAxis::kXyWeight,
                                              {0, 1, 2});
  // X counts one unit of xy weight
  CHECK(std::abs(dist.q[1] - 1.0) < 1e-12);
  // restricting carriers away from the support moves the weight to w = 0
  auto dist2 = distributions_from_coefficients(coeffs, SizeAxis::kXyWeight, {1, 2});
  CHECK(std::abs(dist2.q[0] - 1.0) < 1e-12);
}

TEST_CASE("fourier link: coupling grid of two-points is the DFT of the winding"
          " distribution at beta=0") {
  const int n = 5;
  ens::EnsembleSpec es{ens::EnsembleKind::kGue, n, 1, 15};
  SpectralCache h(ens::sample(es, 0));
  auto spec = exact::CouplingSpec::all(n);
  auto x0 = PauliString::single(n, 0, 'X');
  double t = 1.1;

  auto coeffs = pauli_coefficients(h, 0.0, x0, t);
  auto direct = distributions_from_coefficients(coeffs, SizeAxis::kXyWeight, {});
  for (double g : {0.0, 0.7, 2.9}) {
    complex<double> tp = exact::two_point(h, 0.0, t, t, g, spec, x0,
                                          exact::TwoPointForm::kDressedI);
    complex<double> expect = 0;
    for (int w = 0; w <= n; ++w)
      expect += direct.q[w] *
                std::exp(kI * g * (n - 2.0 * w) / static_cast<double>(n));
    CHECK(std::abs(tp - expect) < 1e-8);
  }
}

TEST_CASE("fourier_distribution inverts to the direct expansion, n=5") {
  const int n = 5;
  ens::EnsembleSpec es{ens::EnsembleKind::kGue, n, 1, 16};
  SpectralCache h(ens::sample(es, 0));
  auto spec = exact::CouplingSpec::all(n);
  auto x0 = PauliString::single(n, 0, 'X');

  for (double beta : {0.0, 1.5}) {
    double t = 0.8;
    auto grid = default_g_grid(n);
    auto inverted = fourier_distribution(h, beta, x0, t, grid, spec);
    auto coeffs = pauli_coefficients(h, beta, x0, t);
    auto direct = distributions_from_coefficients(coeffs, SizeAxis::kXyWeight, {});
    REQUIRE(inverted.n == n);
    for (int w = 0; w <= n; ++w) {
      CHECK(std::abs(inverted.q[w] - direct.q[w]) < 1e-8);
      CHECK(std::abs(inverted.p[w] - direct.p[w]) < 1e-8);
    }
    if (beta == 0.0) {
      for (int w = 0; w <= n; ++w) CHECK(std::abs(inverted.q[w].imag()) < 1e-8);
    }
    // zero-frequency component: g = 0 two-point equals sum_w q(w)
    complex<double> tp0 = exact::two_point(h, beta, t, t, 0.0, spec, x0,
                                           exact::TwoPointForm::kDressedI);
    CHECK(std::abs(inverted.total_q() - tp0) < 1e-8);
  }

  // a degenerate grid must be rejected with a condition-number report
  std::vector<double> bad(n + 1, 0.3);
  CHECK_THROWS_WITH_AS(fourier_distribution(h, 0.0, x0, 0.8, bad, spec),
                       doctest::Contains("ill-conditioned"),
                       std::runtime_error);
}

TEST_CASE("perfect winding detector") {
  // beta = 0: perfect with alpha = 0
  ens::EnsembleSpec es{ens::EnsembleKind::kGue, 4, 1, 17};
  SpectralCache h(ens::sample(es, 0));
  auto x0 = PauliString::single(4, 0, 'X');
  auto dist0 = distributions_from_coefficients(
      pauli_coefficients(h, 0.0, x0, 1.0));
  auto rep0 = check_perfect_winding(dist0, 1e-6);
  CHECK(rep0.is_perfect);
  CHECK(std::abs(rep0.alpha_fit) < 1e-6);

  // constructed coefficients c_P = e^{i alpha |P|/n} r_P recover alpha
  const int n = 4;
  const double alpha = 0.8;
  CounterRng rng(18, 0);
  PauliCoefficients built;
  built.n = n;
  built.c.assign(std::size_t{1} << (2 * n), 0.0);
  for (std::size_t i = 0; i < built.c.size(); ++i) {
    auto pat = built.pattern_of(i);
    double r = rng.normal();
    built.c[i] =
        r * std::exp(kI * (alpha * static_cast<double>(pat.size()) / n));
  }
  auto distc = distributions_from_coefficients(built);
  auto repc = check_perfect_winding(distc, 1e-9);
  CHECK(repc.is_perfect);
  CHECK(repc.alpha_fit == doctest::Approx(alpha).epsilon(1e-6));
  CHECK(repc.residual < 1e-9);

  // flipping signs of individual r_P leaves the verdict unchanged
  PauliCoefficients flipped = built;
  for (std::size_t i = 0; i < flipped.c.size(); i += 3) flipped.c[i] *= -1.0;
  auto repf = check_perfect_winding(distributions_from_coefficients(flipped), 1e-9);
  CHECK(repf.is_perfect);
  CHECK(repf.alpha_fit == doctest::Approx(alpha).epsilon(1e-6));

  // GUE at beta = 20, t = 1: strictly imperfect winding
  ens::EnsembleSpec es6{ens::EnsembleKind::kGue, 6, 1, 19};
  SpectralCache h6(ens::sample(es6, 0));
  auto dist_im = distributions_from_coefficients(
      pauli_coefficients(h6, 20.0, PauliString::single(6, 0, 'X'), 1.0));
  auto rep_im = check_perfect_winding(dist_im, 1e-3);
  CHECK_FALSE(rep_im.is_perfect);
  CHECK(rep_im.min_ratio < 0.999);

  // degenerate input: all weight below floor
  WindingDistribution empty(3);
  CHECK_THROWS(check_perfect_winding(empty, 1e-6));
}

TEST_CASE("windings per sigma of a constructed linear winding") {
  // p: gaussian bump; q = p e^{i theta l} with known rate
  const int n = 40;
  const double theta = 0.5;
  WindingDistribution dist(n);
  for (int l = 0; l <= n; ++l) {
    double p = std::exp(-0.5 * (l - 20.0) * (l - 20.0) / 16.0);
    dist.p[l] = p;
    dist.q[l] = p * std::exp(kI * theta * static_cast<double>(l));
  }
  double expect = theta * dist.sigma_p() / (2.0 * M_PI);
  CHECK(windings_per_sigma(dist) == doctest::Approx(expect).epsilon(1e-6));
}
