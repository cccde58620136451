#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sizewind/dense.hpp"
#include "sizewind/pauli.hpp"
#include "sizewind/rng.hpp"

namespace sizewind::exact {

// Two-sided coupling V = (1/k) sum_{j in carriers} Z_j^L Z_j^R.
struct CouplingSpec {
  std::vector<int> carriers;

  static CouplingSpec all(int n);
  static CouplingSpec all_but(int n, const std::vector<int>& skip);
  int k() const { return static_cast<int>(carriers.size()); }
  std::uint64_t mask(int n) const;  // bit n-1-j set for each carrier j
};

// Two-sided pure state |psi> = sum_{ab} m(a,b) |a>_L |b>_R. The right
// Hamiltonian is the one handed to the preparation routines; the left one is
// its transpose throughout.
struct TwoSidedState {
  int n = 0;
  Eigen::MatrixXcd m;

  double norm() const { return m.norm(); }
  static TwoSidedState epr(int n);
};

std::complex<double> overlap(const TwoSidedState& a, const TwoSidedState& b);

// |T> with H_L = H_R^T; reduced state on the right equals e^{-beta H}/Z.
TwoSidedState thermofield_double(const DenseOperator& h, double beta);
TwoSidedState thermofield_double(const SpectralCache& h, double beta);

Eigen::MatrixXcd reduced_right(const TwoSidedState& s);
Eigen::MatrixXcd reduced_left(const TwoSidedState& s);

// Elementwise phases exp(ig(k - 2 ham((a xor b) & mask))/k); multiplying the
// state matrix by this is exactly the action of e^{igV}.
Eigen::MatrixXcd coupling_phase_matrix(const CouplingSpec& spec, double g, int n);
// Full 4^n-dimensional diagonal unitary, for small-n oracle checks.
DenseOperator coupling_unitary_dense(const CouplingSpec& spec, double g, int n);

// Heisenberg operators. `h` always refers to the right Hamiltonian.
Eigen::MatrixXcd heisenberg_right(const SpectralCache& h, const DenseOperator& op,
                                  double t);
Eigen::MatrixXcd heisenberg_left(const SpectralCache& h, const DenseOperator& op,
                                 double t);

enum class TwoPointForm {
  kDressedI,       // <T| P_R(t_R) e^{igV} P_L(-t_L) |T>
  kConjugatedII,   // <T| e^{-igV} P_R(t_R) e^{igV} P_L(-t_L) |T>
  kConventional,   // <T| P_R(t_R) e^{igV} P_R(t_R) |T>   (size distribution side)
};

std::complex<double> two_point(const SpectralCache& h, double beta, double t_l,
                               double t_r, double g, const CouplingSpec& spec,
                               const PauliString& p, TwoPointForm form,
                               bool transpose_left = true);

// e^{-ig} * form I, the dressed two-point function of the figures.
std::complex<double> q_tilde(const SpectralCache& h, double beta, double t,
                             double g, const CouplingSpec& spec,
                             const PauliString& p);

struct ChannelEstimate {
  double lambda = 0.0;
  Eigen::Matrix3d pauli_transfer;  // rows: output X,Y,Z; cols: input X,Y,Z
  double residual = 0.0;     // Frobenius distance to the ideal Y-depolarizing form
  double trace_dev = 0.0;    // |Tr E(rho) - 1| for the maximally mixed input
  double cp_min_eig = 0.0;   // smallest Choi eigenvalue
  std::map<std::string, double> raw_fidelities;
};

// Builds the channel estimate from the 4x4 Choi state (reference x output).
ChannelEstimate channel_from_choi(const Eigen::MatrixXcd& choi);

// State transfer protocol of the two-sided circuit: insert the message on the
// left at time -t_l, couple at t = 0, read the first right qubit at t_r.
ChannelEstimate state_transfer_channel(const SpectralCache& h, double beta,
                                       double t_l, double t_r, double g,
                                       const CouplingSpec& spec);

// First-order response of <phi_R(t_r)> to the insertion of e^{i eps phi} on
// the left at -t_l; the dressed left-right commutator.
double operator_transfer_response(const SpectralCache& h, double beta, double t_l,
                                  double t_r, double g, const CouplingSpec& spec,
                                  const PauliString& phi, double epsilon = 1e-3);

// Exact value the response estimates: i <[e^{-igV} phi_R(t_r) e^{igV}, phi_L(-t_l)]>.
double commutator_response(const SpectralCache& h, double beta, double t_l,
                           double t_r, double g, const CouplingSpec& spec,
                           const PauliString& phi);

struct MeasurementTransferResult {
  std::vector<int> z;      // measured left Z values, +-1 per site
  double probability = 0;  // Born probability of the sampled string
  DenseState right_state;  // right side evolved with H + (mu/2) sum z_i Z_i
};

// Measurement-based protocol: project the left side in the computational
// basis, then evolve the right side with the z-dependent one-sided generator.
MeasurementTransferResult measurement_based_transfer(
    const SpectralCache& h, double beta, double mu, double t,
    const std::optional<PauliString>& message, double t_insert, CounterRng& rng);

// Deterministic outcome average of a right-side observable under the same
// protocol (sums over all 2^n measurement strings).
double measurement_transfer_expectation(const SpectralCache& h, double beta,
                                        double mu, double t,
                                        const std::optional<PauliString>& message,
                                        double t_insert, const PauliString& obs);

}  // namespace sizewind::exact
