#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <complex>

#include "sizewind/dense.hpp"
#include "sizewind/ensembles.hpp"
#include "sizewind/exact_sim.hpp"

using namespace sizewind;
using namespace sizewind::exact;
namespace ens = sizewind::ensembles;
using std::complex;

namespace {
const complex<double> kI{0.0, 1.0};

DenseOperator random_hermitian(int d, CounterRng& rng) {
  DenseOperator h(d, d);
  for (int i = 0; i < d; ++i) {
    h(i, i) = rng.normal();
    for (int j = i + 1; j < d; ++j) {
      auto v = rng.cnormal();
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  }
  return h;
}

}  // namespace

TEST_CASE("thermofield double: infinite and zero temperature limits") {
  CounterRng rng(1, 0);
  DenseOperator h = random_hermitian(8, rng);
  auto t0 = thermofield_double(h, 0.0);
  // beta = 0 is the maximally entangled state
  CHECK((t0.m - TwoSidedState::epr(3).m).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(t0.norm() == doctest::Approx(1.0).epsilon(1e-12));

  // beta -> infinity on a nondegenerate spectrum: ground product state
  auto tinf = thermofield_double(h, 4000.0);
  Eigen::SelfAdjointEigenSolver<DenseOperator> es(h);
  Eigen::VectorXcd ground = es.eigenvectors().col(0);
  Eigen::MatrixXcd rr = reduced_right(tinf);
  CHECK(std::abs((ground.adjoint() * rr * ground)(0, 0).real() - 1.0) < 1e-9);
}

TEST_CASE("thermofield double: reduced state is thermal, n=2, beta=1") {
  CounterRng rng(2, 0);
  DenseOperator h = random_hermitian(4, rng);
  SpectralCache cache(h);
  auto tfd = thermofield_double(cache, 1.0);
  CHECK(std::abs(tfd.norm() - 1.0) < 1e-10);
  Eigen::MatrixXcd rho = reduced_right(tfd);
  Eigen::MatrixXcd expect = cache.thermal_density(1.0);
  CHECK((rho - expect).cwiseAbs().maxCoeff() < 1e-9);
  // the left side is thermal for the transposed Hamiltonian
  Eigen::MatrixXcd rho_l = reduced_left(tfd);
  CHECK((rho_l - expect.transpose()).cwiseAbs().maxCoeff() < 1e-9);

  DenseOperator bad = h;
  bad(0, 1) += 0.5;
  CHECK_THROWS(thermofield_double(bad, 1.0));
}

TEST_CASE("coupling unitary: trivial cases and EPR eigenvalues") {
  // g = 0 is the identity
  auto id_phases = coupling_phase_matrix(CouplingSpec::all(3), 0.0, 3);
  CHECK((id_phases - Eigen::MatrixXcd::Ones(8, 8)).cwiseAbs().maxCoeff() < 1e-15);

  // single carrier pair at g = pi: phases e^{+-i pi}
  CouplingSpec one;
  one.carriers = {0};
  auto ph = coupling_phase_matrix(one, M_PI, 1);
  CHECK(std::abs(ph(0, 0) - std::exp(kI * M_PI)) < 1e-14);
  CHECK(std::abs(ph(0, 1) - std::exp(-kI * M_PI)) < 1e-14);

  CouplingSpec empty;
  CHECK_THROWS(coupling_phase_matrix(empty, 1.0, 2));

  // V eigenvalue on P_L |EPR>: (k - 2 w_XY(P))/k, dense check at n = 3
  int n = 3;
  CouplingSpec spec = CouplingSpec::all(n);
  Eigen::Index d = 1 << n;
  // dense V = (1/k) sum Z_j Z_j acting on |a>_L |b>_R
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b) {
      double acc = 0;
      for (int j = 0; j < n; ++j) {
        double za = (a >> (n - 1 - j)) & 1 ? -1.0 : 1.0;
        double zb = (b >> (n - 1 - j)) & 1 ? -1.0 : 1.0;
        acc += za * zb;
      }
      v(a * d + b, a * d + b) = acc / n;
    }
  CounterRng rng(5, 1);
  for (int trial = 0; trial < 10; ++trial) {
    auto p = PauliString::random(n, rng);
    Eigen::VectorXcd epr = Eigen::VectorXcd::Zero(d * d);
    for (Eigen::Index a = 0; a < d; ++a)
      epr[a * d + a] = 1.0 / std::sqrt(static_cast<double>(d));
    Eigen::MatrixXcd pl = kron(p.dense(), DenseOperator::Identity(d, d));
    Eigen::VectorXcd state = pl * epr;
    Eigen::VectorXcd vstate = v * state;
    double expect = (n - 2.0 * p.xy_weight_all()) / n;
    CHECK((vstate - expect * state).norm() < 1e-12);
  }

  // full diagonal unitary agrees with the phase matrix
  auto u = coupling_unitary_dense(spec, 0.7, n);
  auto phm = coupling_phase_matrix(spec, 0.7, n);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b)
      CHECK(std::abs(u(a * d + b, a * d + b) - phm(a, b)) < 1e-14);
}

TEST_CASE("two-point trivial values and time independence") {
  CounterRng rng(7, 0);
  DenseOperator h = random_hermitian(16, rng);
  SpectralCache cache(h);
  auto spec = CouplingSpec::all(4);
  auto x0 = PauliString::single(4, 0, 'X');

  // g = 0, beta = 0, t_L = t_R: sum_s q(s,t) = 1
  complex<double> v = two_point(cache, 0.0, 1.3, 1.3, 0.0, spec, x0,
                                TwoPointForm::kDressedI);
  CHECK(std::abs(v - 1.0) < 1e-10);

  // independence of t at g = 0 (any beta)
  complex<double> a = two_point(cache, 2.0, 0.4, 0.4, 0.0, spec, x0,
                                TwoPointForm::kDressedI);
  complex<double> b = two_point(cache, 2.0, 2.9, 2.9, 0.0, spec, x0,
                                TwoPointForm::kDressedI);
  CHECK(std::abs(a - b) < 1e-9);
}

TEST_CASE("two-point forms against a dense 4^n oracle at n=3") {
  const int n = 3;
  const Eigen::Index d = 1 << n;
  CounterRng rng(404, 0);
  DenseOperator h = random_hermitian(static_cast<int>(d), rng);
  SpectralCache cache(h);
  auto spec = CouplingSpec::all(n);
  auto p = PauliString::single(n, 1, 'Y');
  double beta = 1.3, tl = 0.7, tr = 1.9, g = 0.8;

  // state vector |T> on 2n qubits from the matrix representation
  auto tfd = thermofield_double(cache, beta);
  Eigen::VectorXcd psi(d * d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b) psi[a * d + b] = tfd.m(a, b);

  DenseOperator eg = coupling_unitary_dense(spec, g, n);
  DenseOperator id = DenseOperator::Identity(d, d);
  DenseOperator pr = kron(id, heisenberg_right(cache, p.dense(), tr));
  DenseOperator plt =
      kron(heisenberg_left(cache, p.dense().transpose(), -tl), id);
  complex<double> oracle_i = (psi.adjoint() * pr * eg * plt * psi)(0, 0);
  complex<double> got_i =
      two_point(cache, beta, tl, tr, g, spec, p, TwoPointForm::kDressedI);
  CHECK(std::abs(oracle_i - got_i) < 1e-10);

  DenseOperator pl = kron(heisenberg_left(cache, p.dense(), -tl), id);
  complex<double> oracle_ii =
      (psi.adjoint() * eg.adjoint() * pr * eg * pl * psi)(0, 0);
  complex<double> got_ii = two_point(cache, beta, tl, tr, g, spec, p,
                                     TwoPointForm::kConjugatedII, false);
  CHECK(std::abs(oracle_ii - got_ii) < 1e-10);

  DenseOperator prr = kron(id, heisenberg_right(cache, p.dense(), tr));
  complex<double> oracle_p = (psi.adjoint() * prr * eg * prr * psi)(0, 0);
  complex<double> got_p = two_point(cache, beta, tr, tr, g, spec, p,
                                    TwoPointForm::kConventional);
  CHECK(std::abs(oracle_p - got_p) < 1e-10);
}

TEST_CASE("two-point ensemble average matches the closed forms") {
  // annealed estimator: reweight each sample by Z_sample/(d f(-beta))
  const int n = 6, samples = 160;
  const Eigen::Index d = 1 << n;
  auto spec = CouplingSpec::all(n);
  auto x0 = PauliString::single(n, 0, 'X');
  const double t = 1.0;

  // finite-n oracle for form I: sum over all Pauli labels of the s-function
  // with the exact ZZ coupling phase of each label
  auto finite_n_form_i = [&](double beta, double g) {
    complex<double> acc = 0;
    complex<double> a{-beta / 2.0, t}, b{0.0, -t};
    for (int code = 0; code < (1 << (2 * n)); ++code) {
      PauliString v(n);
      for (int j = 0; j < n; ++j) {
        int bits = (code >> (2 * j)) & 3;
        v.set_site(j, bits & 1, (bits >> 1) & 1);
      }
      double theta = (n - 2.0 * v.xy_weight_all()) / n;
      acc += ens::s_function(a, b, x0, v, static_cast<double>(d)) *
             std::exp(kI * g * theta);
    }
    return acc / ens::f_semicircle({-beta, 0});
  };

  for (double beta : {0.0, 1.0}) {
    double fb = ens::f_semicircle({-beta, 0}).real();
    for (double g : {0.0, 1.2}) {
      complex<double> sumI = 0, sumII = 0;
      double sqI = 0, sqII = 0;
      for (int s = 0; s < samples; ++s) {
        CounterRng rng(4100, s);
        DenseOperator h = ens::sample_gue_dim(static_cast<int>(d), rng);
        SpectralCache cache(h);
        double z_over_d = 0;
        for (int i = 0; i < d; ++i)
          z_over_d += std::exp(-beta * cache.eigenvalues()[i]);
        z_over_d /= static_cast<double>(d);
        double weight = z_over_d / fb;
        complex<double> vI = weight * two_point(cache, beta, t, t, g, spec, x0,
                                                TwoPointForm::kDressedI);
        sumI += vI;
        sqI += std::norm(vI);
        complex<double> vII = weight * two_point(cache, beta, t, t, g, spec, x0,
                                                 TwoPointForm::kConjugatedII);
        sumII += vII;
        sqII += std::norm(vII);
      }
      complex<double> meanI = sumI / static_cast<double>(samples);
      double errI = std::sqrt((sqI / samples - std::norm(meanI)) / samples);
      // sharp finite-n expectation
      CHECK(std::abs(meanI - finite_n_form_i(beta, g)) <
            3.0 * errI + 6.0 / (d * d));
      // the printed n->infinity form carries a finite-n phase slop on the
      // delta branch, O(2g/n) of its weight
      complex<double> closedI = ens::twopoint_I_gue(beta, t, g);
      CHECK(std::abs(meanI - closedI) < 3.0 * errI + 2.5 * g / n + 6.0 / (d * d));

      complex<double> meanII = sumII / static_cast<double>(samples);
      double errII = std::sqrt((sqII / samples - std::norm(meanII)) / samples);
      complex<double> expectII = ens::twopoint_II_goe(beta, t, t, g);
      CHECK(std::abs(meanII - expectII) <
            3.0 * errII + 2.0 * (2.5 * g / n) + 0.02);
    }
  }
}

TEST_CASE("state transfer: no coupling means no signal") {
  CounterRng rng(9, 0);
  ens::EnsembleSpec es{ens::EnsembleKind::kGoe, 5, 1, 321};
  SpectralCache h(ens::sample(es, 0));
  auto est = state_transfer_channel(h, 0.0, 4.0, 4.0, 0.0, CouplingSpec::all(5));
  CHECK(std::abs(est.lambda) < 1e-10);
  CHECK(est.trace_dev < 1e-9);
  CHECK(est.cp_min_eig > -1e-9);
}

TEST_CASE("state transfer: single GOE sample sits near the finite-n value") {
  ens::EnsembleSpec es{ens::EnsembleKind::kGoe, 6, 1, 77};
  SpectralCache h(ens::sample(es, 0));
  auto est = state_transfer_channel(h, 0.0, 4.0, 4.0, M_PI, CouplingSpec::all(6));
  double expect = ens::finite_n_lambda(0.0, 4.0, 4.0, M_PI, 6);
  CHECK(std::abs(est.lambda - expect) < 0.05);
  CHECK(est.trace_dev < 1e-9);
  // the averaged channel form holds only on average; per-sample residual is
  // small but nonzero
  CHECK(est.residual < 0.2);
  CHECK(est.raw_fidelities.count("yframe_fidelity") == 1);
}

TEST_CASE("state transfer channel is physical") {
  CounterRng rng(31, 0);
  DenseOperator h = random_hermitian(32, rng);
  SpectralCache cache(h);
  auto est = state_transfer_channel(cache, 1.5, 2.0, 1.0, 2.2,
                                    CouplingSpec::all_but(5, {0}));
  CHECK(est.trace_dev < 1e-9);
  CHECK(est.cp_min_eig > -1e-9);
}

TEST_CASE("operator transfer: response matches the dense commutator") {
  ens::EnsembleSpec es{ens::EnsembleKind::kGoe, 5, 1, 13};
  SpectralCache h(ens::sample(es, 0));
  auto spec = CouplingSpec::all(5);
  auto phi = PauliString::single(5, 0, 'X');

  // g = 0, t = 0, beta = 0: both sides commute
  CHECK(std::abs(operator_transfer_response(h, 0.0, 0.0, 0.0, 0.0, spec, phi)) <
        1e-8);

  for (double g : {0.9, -0.9}) {
    double est = operator_transfer_response(h, 0.0, 1.5, 1.5, g, spec, phi, 1e-4);
    double exact_v = commutator_response(h, 0.0, 1.5, 1.5, g, spec, phi);
    CHECK(est == doctest::Approx(exact_v).epsilon(1e-4));
  }
}

TEST_CASE("operator transfer: response is asymmetric under g -> -g at beta > 0") {
  // ensemble-averaged responses at beta-analog 20 on n=6 dense runs
  const int n = 6, samples = 12;
  auto spec = CouplingSpec::all(n);
  auto phi = PauliString::single(n, 0, 'X');
  double plus = 0, minus = 0;
  for (int s = 0; s < samples; ++s) {
    ens::EnsembleSpec es{ens::EnsembleKind::kGoe, n, samples,
                         static_cast<std::uint64_t>(600)};
    SpectralCache h(ens::sample(es, s));
    plus += commutator_response(h, 20.0, 1.0, 1.0, 1.5, spec, phi);
    minus += commutator_response(h, 20.0, 1.0, 1.0, -1.5, spec, phi);
  }
  CHECK(std::abs(plus - minus) / samples > 1e-4);
}

TEST_CASE("measurement-based transfer") {
  ens::EnsembleSpec es{ens::EnsembleKind::kGoe, 4, 1, 55};
  SpectralCache h(ens::sample(es, 0));
  auto obs = PauliString::single(4, 0, 'Z');

  // mu = 0: projecting the left side does not disturb the right average,
  // with or without a left message
  double base = measurement_transfer_expectation(h, 1.0, 0.0, 0.8, std::nullopt,
                                                 0.0, obs);
  auto msg = PauliString::single(4, 0, 'X');
  double with_msg = measurement_transfer_expectation(h, 1.0, 0.0, 0.8, msg,
                                                     -0.5, obs);
  CHECK(base == doctest::Approx(with_msg).epsilon(1e-9));
  // and equals the thermal expectation of the evolved observable
  auto tfd = thermofield_double(h, 1.0);
  Eigen::MatrixXcd rho = reduced_right(tfd);
  Eigen::MatrixXcd obs_t = heisenberg_right(h, obs.dense(), -0.8);
  // evolve state forward = evolve observable backward
  double thermal = (rho * obs_t).trace().real();
  CHECK(base == doctest::Approx(thermal).epsilon(1e-9));

  // beta = 0: the projected right state is the measured product string
  CounterRng rng(77, 0);
  auto res = measurement_based_transfer(h, 0.0, 0.0, 0.0, std::nullopt, 0.0, rng);
  int nonzero = 0;
  Eigen::Index support = -1;
  for (Eigen::Index i = 0; i < res.right_state.amplitudes.size(); ++i)
    if (std::abs(res.right_state.amplitudes[i]) > 1e-12) {
      ++nonzero;
      support = i;
    }
  CHECK(nonzero == 1);
  for (int j = 0; j < 4; ++j) {
    int bit = (support >> (3 - j)) & 1;
    CHECK(res.z[j] == (bit ? -1 : 1));
  }
  CHECK(res.probability == doctest::Approx(1.0 / 16).epsilon(1e-12));

  // a tuned mu produces a nonzero response to the left perturbation
  double resp0 = 0, resp = 0;
  double b0 = measurement_transfer_expectation(h, 2.0, 0.0, 1.0, std::nullopt, 0.0, obs);
  double b1 = measurement_transfer_expectation(h, 2.0, 0.0, 1.0, msg, -0.3, obs);
  resp0 = b1 - b0;
  double c0 = measurement_transfer_expectation(h, 2.0, 0.8, 1.0, std::nullopt, 0.0, obs);
  double c1 = measurement_transfer_expectation(h, 2.0, 0.8, 1.0, msg, -0.3, obs);
  resp = c1 - c0;
  CHECK(std::abs(resp0) < 1e-9);
  CHECK(std::abs(resp) > 1e-4);
}

TEST_CASE("q_tilde helper matches the dressed definition") {
  ens::EnsembleSpec es{ens::EnsembleKind::kGue, 4, 1, 3};
  SpectralCache h(ens::sample(es, 0));
  auto spec = CouplingSpec::all(4);
  auto p = PauliString::single(4, 1, 'X');
  complex<double> lhs = q_tilde(h, 0.5, 1.0, 0.9, spec, p);
  complex<double> rhs = std::exp(-kI * 0.9) *
                        two_point(h, 0.5, 1.0, 1.0, 0.9, spec, p,
                                  TwoPointForm::kDressedI);
  CHECK(std::abs(lhs - rhs) < 1e-14);
}
