#include "sizewind/exact_sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace sizewind::exact {

using std::complex;
namespace {
const complex<double> kI{0.0, 1.0};
}

CouplingSpec CouplingSpec::all(int n) {
  CouplingSpec s;
  s.carriers.resize(n);
  for (int j = 0; j < n; ++j) s.carriers[j] = j;
  return s;
}

CouplingSpec CouplingSpec::all_but(int n, const std::vector<int>& skip) {
  CouplingSpec s;
  for (int j = 0; j < n; ++j)
    if (std::find(skip.begin(), skip.end(), j) == skip.end())
      s.carriers.push_back(j);
  return s;
}

std::uint64_t CouplingSpec::mask(int n) const {
  std::uint64_t m = 0;
  for (int j : carriers) {
    if (j < 0 || j >= n) throw std::invalid_argument("carrier site out of range");
    m |= std::uint64_t{1} << (n - 1 - j);
  }
  return m;
}

TwoSidedState TwoSidedState::epr(int n) {
  TwoSidedState s;
  s.n = n;
  Eigen::Index d = Eigen::Index{1} << n;
  s.m = Eigen::MatrixXcd::Identity(d, d) / std::sqrt(static_cast<double>(d));
  return s;
}

std::complex<double> overlap(const TwoSidedState& a, const TwoSidedState& b) {
  return (a.m.adjoint() * b.m).trace();
}

TwoSidedState thermofield_double(const DenseOperator& h, double beta) {
  return thermofield_double(SpectralCache(h), beta);
}

TwoSidedState thermofield_double(const SpectralCache& h, double beta) {
  int d = h.dim();
  int n = std::countr_zero(static_cast<unsigned>(d));
  if ((1 << n) != d) throw std::invalid_argument("dimension is not a power of 2");
  // m = (e^{-beta h/2})^T / sqrt(Z), stabilized by the ground-state shift
  double e0 = h.eigenvalues().minCoeff();
  Eigen::VectorXd w(d);
  for (int i = 0; i < d; ++i)
    w[i] = std::exp(-0.5 * beta * (h.eigenvalues()[i] - e0));
  double z = w.squaredNorm();
  TwoSidedState s;
  s.n = n;
  Eigen::MatrixXcd half =
      h.eigenvectors() * (w / std::sqrt(z)).cast<complex<double>>().asDiagonal() *
      h.eigenvectors().adjoint();
  s.m = half.transpose();
  return s;
}

Eigen::MatrixXcd reduced_right(const TwoSidedState& s) {
  return (s.m.adjoint() * s.m).transpose();
}

Eigen::MatrixXcd reduced_left(const TwoSidedState& s) {
  return s.m * s.m.adjoint();
}

Eigen::MatrixXcd coupling_phase_matrix(const CouplingSpec& spec, double g, int n) {
  if (spec.carriers.empty()) throw std::invalid_argument("empty carrier set");
  std::uint64_t mask = spec.mask(n);
  double k = spec.k();
  Eigen::Index d = Eigen::Index{1} << n;
  Eigen::MatrixXcd phases(d, d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b) {
      int ham = std::popcount(static_cast<std::uint64_t>(a ^ b) & mask);
      phases(a, b) = std::exp(kI * g * (k - 2.0 * ham) / k);
    }
  return phases;
}

DenseOperator coupling_unitary_dense(const CouplingSpec& spec, double g, int n) {
  if (2 * n > kDenseLimit)
    throw std::runtime_error("coupling_unitary_dense beyond dense limit");
  Eigen::MatrixXcd phases = coupling_phase_matrix(spec, g, n);
  Eigen::Index d = Eigen::Index{1} << n;
  DenseOperator u = DenseOperator::Zero(d * d, d * d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b) u(a * d + b, a * d + b) = phases(a, b);
  return u;
}

Eigen::MatrixXcd heisenberg_right(const SpectralCache& h, const DenseOperator& op,
                                  double t) {
  Eigen::MatrixXcd u = h.propagator(t);  // e^{-iht}
  return u.adjoint() * op * u;
}

Eigen::MatrixXcd heisenberg_left(const SpectralCache& h, const DenseOperator& op,
                                 double t) {
  // H_L = h^T, so e^{-i H_L s} = (e^{-i h s})^T
  Eigen::MatrixXcd u = h.propagator(-t);  // e^{+iht}
  return u.transpose() * op * u.conjugate();
}

std::complex<double> two_point(const SpectralCache& h, double beta, double t_l,
                               double t_r, double g, const CouplingSpec& spec,
                               const PauliString& p, TwoPointForm form,
                               bool transpose_left) {
  TwoSidedState tfd = thermofield_double(h, beta);
  DenseOperator pd = p.dense();
  Eigen::MatrixXcd phases = coupling_phase_matrix(spec, g, tfd.n);
  Eigen::MatrixXcd right_op = heisenberg_right(h, pd, t_r).transpose();

  Eigen::MatrixXcd m;
  if (form == TwoPointForm::kConventional) {
    m = (tfd.m * right_op).cwiseProduct(phases) * right_op;
  } else {
    // the transpose acts on the inserted operator, before its evolution
    DenseOperator base = pd;
    if (transpose_left) base = pd.transpose();
    Eigen::MatrixXcd left_op = heisenberg_left(h, base, -t_l);
    m = (left_op * tfd.m).cwiseProduct(phases) * right_op;
    if (form == TwoPointForm::kConjugatedII)
      m = m.cwiseProduct(coupling_phase_matrix(spec, -g, tfd.n));
  }
  return (tfd.m.adjoint() * m).trace();
}

std::complex<double> q_tilde(const SpectralCache& h, double beta, double t,
                             double g, const CouplingSpec& spec,
                             const PauliString& p) {
  return std::exp(-kI * g) *
         two_point(h, beta, t, t, g, spec, p, TwoPointForm::kDressedI, true);
}

namespace {

// swaps two bits of every row index of m (a cheap row permutation)
void swap_row_bits(Eigen::MatrixXcd& m, int bit_a, int bit_b) {
  Eigen::Index rows = m.rows();
  std::uint64_t ma = std::uint64_t{1} << bit_a, mb = std::uint64_t{1} << bit_b;
  for (Eigen::Index r = 0; r < rows; ++r) {
    bool ba = r & ma, bb = r & mb;
    if (ba == bb) continue;
    std::uint64_t s = (static_cast<std::uint64_t>(r) ^ ma) ^ mb;
    if (static_cast<Eigen::Index>(s) > r) m.row(r).swap(m.row(s));
  }
}

const PauliString kPauliX = PauliString::from_string("X");
const PauliString kPauliY = PauliString::from_string("Y");
const PauliString kPauliZ = PauliString::from_string("Z");

}  // namespace

ChannelEstimate channel_from_choi(const Eigen::MatrixXcd& choi) {
  auto block = [&](int i, int j) {
    Eigen::Matrix2cd b;
    for (int s = 0; s < 2; ++s)
      for (int t = 0; t < 2; ++t) b(s, t) = choi(i * 2 + s, j * 2 + t);
    return b;
  };
  auto apply = [&](const Eigen::Matrix2cd& input) {
    Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out += 2.0 * input(i, j) * block(i, j);
    return out;
  };

  const Eigen::Matrix2cd sig[3] = {kPauliX.dense(), kPauliY.dense(),
                                   kPauliZ.dense()};
  ChannelEstimate est;
  for (int q = 0; q < 3; ++q) {
    Eigen::Matrix2cd out = apply(sig[q]);
    for (int pdx = 0; pdx < 3; ++pdx)
      est.pauli_transfer(pdx, q) = 0.5 * (sig[pdx] * out).trace().real();
  }
  // lambda = (1/6) sum_P Tr[(Y P Y) E(P)]
  double lam = 0;
  for (int q = 0; q < 3; ++q) {
    Eigen::Matrix2cd ypy = sig[1] * sig[q] * sig[1];
    lam += (ypy * apply(sig[q])).trace().real();
  }
  est.lambda = lam / 6.0;

  // residual against E(P) = lambda Y P Y (transfer matrix diag(-l, l, -l))
  Eigen::Matrix3d ideal = Eigen::Matrix3d::Zero();
  ideal(0, 0) = -est.lambda;
  ideal(1, 1) = est.lambda;
  ideal(2, 2) = -est.lambda;
  est.residual = (est.pauli_transfer - ideal).norm();

  Eigen::Matrix2cd out_id = apply(Eigen::Matrix2cd::Identity());
  est.trace_dev = std::abs(out_id.trace() - 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(choi);
  est.cp_min_eig = es.eigenvalues().minCoeff();

  // entanglement fidelity with and without the Y frame correction
  Eigen::Vector4cd phi;
  phi << M_SQRT1_2, 0, 0, M_SQRT1_2;
  est.raw_fidelities["choi_fidelity"] = (phi.adjoint() * choi * phi)(0, 0).real();
  Eigen::Matrix4cd yframe = Eigen::Matrix4cd::Zero();
  Eigen::Matrix2cd y = sig[1];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      yframe.block<2, 2>(2 * i, 2 * j) = (i == j ? 1.0 : 0.0) * y;
  Eigen::MatrixXcd corrected = yframe * choi * yframe.adjoint();
  est.raw_fidelities["yframe_fidelity"] =
      (phi.adjoint() * corrected * phi)(0, 0).real();
  return est;
}

ChannelEstimate state_transfer_channel(const SpectralCache& h, double beta,
                                       double t_l, double t_r, double g,
                                       const CouplingSpec& spec) {
  TwoSidedState tfd = thermofield_double(h, beta);
  const int n = tfd.n;
  const Eigen::Index d = Eigen::Index{1} << n;

  // rows: (ref, message slot, L register); cols: R register
  Eigen::MatrixXcd m(4 * d, d);
  m.setZero();
  for (int r = 0; r < 2; ++r) {
    Eigen::Index off = (Eigen::Index{r} * 2 + r) * d;  // ref == msg component
    m.block(off, 0, d, d) = M_SQRT1_2 * tfd.m;
  }

  Eigen::MatrixXcd u_fwd = h.propagator(t_l).transpose();  // e^{-i H_L t_l}
  std::vector<int> lqubits(n);
  for (int j = 0; j < n; ++j) lqubits[j] = 2 + j;

  apply_to_rows(m, u_fwd.adjoint(), lqubits, n + 2);      // backward to -t_l
  swap_row_bits(m, n, n - 1);                             // message into A_L
  apply_to_rows(m, u_fwd, lqubits, n + 2);                // forward to 0
  Eigen::MatrixXcd phases = coupling_phase_matrix(spec, g, n);
  for (Eigen::Index blockdx = 0; blockdx < 4; ++blockdx)
    m.block(blockdx * d, 0, d, d) =
        m.block(blockdx * d, 0, d, d).cwiseProduct(phases).eval();
  m = m * h.propagator(t_r).transpose();                  // right side to t_r

  // Choi on (ref, A_R): trace message slot, L, and the rest of R
  Eigen::MatrixXcd choi = Eigen::MatrixXcd::Zero(4, 4);
  const Eigen::Index half = d / 2;  // A_R is the top bit of the column index
  for (int rr = 0; rr < 2; ++rr)
    for (int rc = 0; rc < 2; ++rc)
      for (int sr = 0; sr < 2; ++sr)
        for (int sc = 0; sc < 2; ++sc) {
          complex<double> acc = 0;
          for (int w = 0; w < 2; ++w) {
            Eigen::Index row_off_r = (Eigen::Index{rr} * 2 + w) * d;
            Eigen::Index row_off_c = (Eigen::Index{rc} * 2 + w) * d;
            for (Eigen::Index a = 0; a < d; ++a)
              for (Eigen::Index brest = 0; brest < half; ++brest)
                acc += m(row_off_r + a, sr * half + brest) *
                       std::conj(m(row_off_c + a, sc * half + brest));
          }
          choi(rr * 2 + sr, rc * 2 + sc) = acc;
        }
  return channel_from_choi(choi);
}

namespace {

double right_observable_after_insertion(const SpectralCache& h, double beta,
                                        double t_l, double t_r, double g,
                                        const CouplingSpec& spec,
                                        const PauliString& phi, double eps) {
  TwoSidedState tfd = thermofield_double(h, beta);
  DenseOperator pd = phi.dense();
  // e^{i eps phi_L(-t_l)} built from the Pauli exponential
  Eigen::Index d = pd.rows();
  DenseOperator rot = std::cos(eps) * DenseOperator::Identity(d, d) +
                      kI * std::sin(eps) * pd;
  Eigen::MatrixXcd left = heisenberg_left(h, rot, -t_l);
  Eigen::MatrixXcd m = (left * tfd.m)
                           .cwiseProduct(coupling_phase_matrix(spec, g, tfd.n));
  m = m * h.propagator(t_r).transpose();
  Eigen::MatrixXcd obs = heisenberg_right(h, pd, 0.0).transpose();
  return ((m * obs).cwiseProduct(m.conjugate())).sum().real();
}

}  // namespace

double operator_transfer_response(const SpectralCache& h, double beta, double t_l,
                                  double t_r, double g, const CouplingSpec& spec,
                                  const PauliString& phi, double epsilon) {
  double plus = right_observable_after_insertion(h, beta, t_l, t_r, g, spec, phi,
                                                 epsilon);
  double minus = right_observable_after_insertion(h, beta, t_l, t_r, g, spec, phi,
                                                  -epsilon);
  return (plus - minus) / (2.0 * epsilon);
}

double commutator_response(const SpectralCache& h, double beta, double t_l,
                           double t_r, double g, const CouplingSpec& spec,
                           const PauliString& phi) {
  complex<double> z = two_point(h, beta, t_l, t_r, g, spec, phi,
                                TwoPointForm::kConjugatedII, false);
  return -2.0 * z.imag();
}

MeasurementTransferResult measurement_based_transfer(
    const SpectralCache& h, double beta, double mu, double t,
    const std::optional<PauliString>& message, double t_insert, CounterRng& rng) {
  TwoSidedState tfd = thermofield_double(h, beta);
  const int n = tfd.n;
  const Eigen::Index d = Eigen::Index{1} << n;
  Eigen::MatrixXcd m = tfd.m;
  if (message) m = heisenberg_left(h, message->dense(), t_insert) * m;

  // Born sampling of the left computational-basis measurement
  double u = rng.uniform();
  double cum = 0.0;
  Eigen::Index picked = d - 1;
  for (Eigen::Index a = 0; a < d; ++a) {
    cum += m.row(a).squaredNorm();
    if (u < cum) {
      picked = a;
      break;
    }
  }
  double prob = m.row(picked).squaredNorm();

  MeasurementTransferResult out;
  out.probability = prob;
  out.z.resize(n);
  for (int j = 0; j < n; ++j)
    out.z[j] = (picked >> (n - 1 - j)) & 1 ? -1 : 1;

  // one-sided generator H + (mu/2) sum_i z_i Z_i^R
  DenseOperator tilted = h.eigenvectors() *
                             h.eigenvalues().cast<complex<double>>().asDiagonal() *
                             h.eigenvectors().adjoint();
  for (Eigen::Index b = 0; b < d; ++b) {
    double zsum = 0;
    for (int j = 0; j < n; ++j)
      zsum += out.z[j] * (((b >> (n - 1 - j)) & 1) ? -1.0 : 1.0);
    tilted(b, b) += 0.5 * mu * zsum;
  }
  SpectralCache tilted_cache(tilted);
  DenseVector psi = m.row(picked).transpose() / std::sqrt(prob);
  out.right_state.n_total = n;
  out.right_state.amplitudes = tilted_cache.propagator(t) * psi;
  return out;
}

double measurement_transfer_expectation(const SpectralCache& h, double beta,
                                        double mu, double t,
                                        const std::optional<PauliString>& message,
                                        double t_insert, const PauliString& obs) {
  TwoSidedState tfd = thermofield_double(h, beta);
  const int n = tfd.n;
  const Eigen::Index d = Eigen::Index{1} << n;
  Eigen::MatrixXcd m = tfd.m;
  if (message) m = heisenberg_left(h, message->dense(), t_insert) * m;
  DenseOperator obs_d = obs.dense();

  double acc = 0.0;
  for (Eigen::Index a = 0; a < d; ++a) {
    double prob = m.row(a).squaredNorm();
    if (prob < 1e-300) continue;
    DenseOperator tilted = h.eigenvectors() *
                               h.eigenvalues().cast<complex<double>>().asDiagonal() *
                               h.eigenvectors().adjoint();
    for (Eigen::Index b = 0; b < d; ++b) {
      double zsum = 0;
      for (int j = 0; j < n; ++j) {
        int za = (a >> (n - 1 - j)) & 1 ? -1 : 1;
        int zb = (b >> (n - 1 - j)) & 1 ? -1 : 1;
        zsum += za * zb;
      }
      tilted(b, b) += 0.5 * mu * zsum;
    }
    SpectralCache tilted_cache(tilted);
    DenseVector psi = tilted_cache.propagator(t) *
                      (m.row(a).transpose() / std::sqrt(prob)).eval();
    acc += prob * (psi.adjoint() * obs_d * psi)(0, 0).real();
  }
  return acc;
}

}  // namespace sizewind::exact
