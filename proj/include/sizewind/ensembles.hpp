#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "sizewind/dense.hpp"
#include "sizewind/pauli.hpp"
#include "sizewind/rng.hpp"
#include "sizewind/winding_distribution.hpp"

namespace sizewind::ensembles {

enum class EnsembleKind { kGue, kGoe };

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::kGoe;
  int n = 6;  // qubits per side, d = 2^n
  int samples = 64;
  std::uint64_t seed = 0;
};

// One Hamiltonian draw, normalized so the semicircle edges sit at +-1
// (entry scale 1/(2 sqrt d)). `index` selects the counter-RNG stream.
DenseOperator sample(const EnsembleSpec& spec, int index);
DenseOperator sample_gue_dim(int dim, CounterRng& rng);
DenseOperator sample_goe_dim(int dim, CounterRng& rng);

// Haar-random unitary via QR of a Ginibre matrix with phase fixing.
DenseOperator haar_unitary(int dim, CounterRng& rng);

// f(z) = 2 I_1(z)/z, the two-sided Laplace transform of the semicircle law.
// Entire; evaluated by power series (small |z|) or asymptotics (large |z|).
std::complex<double> f_semicircle(std::complex<double> z);

// Ensemble-averaged depolarizing parameter of the state transfer channel.
double lambda_master(double beta, double t_l, double t_r, double g);
double lambda_inf_temperature(double t_l, double t_r, double g);
double lambda_sametime(double t, double g);
// Leading finite-n corrections via the substitution of the g-dependent
// coefficients; n is the per-side qubit count.
double finite_n_lambda(double beta, double t_l, double t_r, double g, int n);

// First grid time at which lambda_sametime is within `rel_tol` of its
// plateau (1 - cos g)/2 and stays there.
double plateau_onset(double g, double rel_tol = 0.02, double t_max = 8.0,
                     double dt = 1e-3);

// Options for the bulk-branch width of the two-branch size distribution.
enum class BulkSigma { kBinomial, kAppendix, kMainText };
double bulk_sigma_value(BulkSigma opt, int n);

// Winding size distribution of an evolved Pauli of initial size l0 under the
// ensemble average, two-branch form. Bulk branch discretized on l = 0..n.
WindingDistribution winding_size_gue(int l0, int n, double beta, double t,
                                     BulkSigma sigma_opt = BulkSigma::kBinomial);

// Exact size distribution of a uniformly random non-identity Pauli string,
// 3^l C(n,l)/(4^n - 1); the finite-n bulk branch.
std::vector<double> uniform_nonidentity_size_distribution(int n);

std::complex<double> twopoint_I_gue(double beta, double t, double g);
std::complex<double> twopoint_II_goe(double beta, double t_l, double t_r,
                                     double g);
// e^{-ig} * form I: the dressed two-point function.
std::complex<double> qtilde_formula(double beta, double t, double g);

// Relationship of the Pauli labels entering the ensemble-averaged squared
// trace; selects one of the five closed-form cases.
enum class PairClass {
  kBothZero,
  kEqualNonzero,
  kOneZero,
  kDistinctCommuting,
  kDistinctAnticommuting
};
PairClass classify_pair(const PauliString& u, const PauliString& v);

// E[(tr e^{aH} P_u e^{bH} P_v)^2]/d^2 at leading order in d.
std::complex<double> s_function(std::complex<double> a, std::complex<double> b,
                                PairClass cls, double d);
std::complex<double> s_function(std::complex<double> a, std::complex<double> b,
                                const PauliString& u, const PauliString& v,
                                double d);

// ---- permutation toolkit -------------------------------------------------

struct Permutation {
  std::vector<int> images;  // one-line notation, 0-based

  int degree() const { return static_cast<int>(images.size()); }
  static Permutation identity(int r);
  Permutation inverse() const;
  Permutation operator*(const Permutation& rhs) const;  // (this o rhs)(i)
  std::vector<std::vector<int>> cycles() const;
  int num_cycles() const;
  int length() const { return degree() - num_cycles(); }  // |pi|
  bool operator==(const Permutation& rhs) const { return images == rhs.images; }
};

int permutation_distance(const Permutation& a, const Permutation& b);
std::vector<Permutation> all_permutations(int r);

long long catalan(int k);
long long mobius(const Permutation& pi);
double wg_leading(const Permutation& pi, double d);

// Replica permutation operator R_pi on (C^d)^{tensor r}, for oracle tests.
DenseOperator replica_operator(const Permutation& pi, int d);

// Tr[(a_1 x ... x a_r) R_pi] as a product of traces along cycles.
std::complex<double> product_trace_with_replica(
    const std::vector<DenseOperator>& slots, const Permutation& pi);

// E[Tr(U^{x r} A U^{dag x r} B)] with A, B given as tensor-slot factor lists.
// Exact for r = 1, 2; leading order in d via Weingarten sums for r = 3, 4.
std::complex<double> haar_moment(const std::vector<DenseOperator>& a_slots,
                                 const std::vector<DenseOperator>& b_slots,
                                 double d);

}  // namespace sizewind::ensembles
