#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace sizewind {

using Complex = std::complex<double>;
using DenseOperator = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;

// State of an n_total-qubit register as a flat amplitude vector. Qubit j maps
// to bit (n_total-1-j) of the index, so qubit 0 is the leftmost tensor factor.
struct DenseState {
  int n_total = 0;
  DenseVector amplitudes;

  double norm() const { return amplitudes.norm(); }
};

DenseOperator kron(const DenseOperator& a, const DenseOperator& b);

// Applies `op` (2^k x 2^k) to the listed qubits of an n-qubit state vector.
void apply_to_qubits(DenseVector& state, const DenseOperator& op,
                     const std::vector<int>& qubits, int n_total);

// Same, acting on the row index of a matrix-shaped object (each column is an
// independent state).
void apply_to_rows(Eigen::MatrixXcd& m, const DenseOperator& op,
                   const std::vector<int>& qubits, int n_row_qubits);

// Acts with the operator transpose on the column index: m <- m * op^T, where
// op addresses the listed qubits of the column register.
void apply_to_cols(Eigen::MatrixXcd& m, const DenseOperator& op,
                   const std::vector<int>& qubits, int n_col_qubits);

// Partial trace of |psi><psi| keeping the listed qubits (in the given order).
Eigen::MatrixXcd reduced_density(const DenseVector& state, int n_total,
                                 const std::vector<int>& keep);

bool is_hermitian(const DenseOperator& m, double tol = 1e-10);
bool is_unitary(const DenseOperator& m, double tol = 1e-9);

// Spectral decomposition of a Hermitian matrix, cached so that propagators
// e^{-iHt} and Boltzmann factors e^{-beta H/2} at many parameters reuse one
// diagonalization.
class SpectralCache {
 public:
  explicit SpectralCache(const DenseOperator& h);

  int dim() const { return static_cast<int>(eigs_.size()); }
  const Eigen::VectorXd& eigenvalues() const { return eigs_; }
  const Eigen::MatrixXcd& eigenvectors() const { return vecs_; }

  // e^{-iHt}
  Eigen::MatrixXcd propagator(double t) const;
  // e^{c H} for complex c
  Eigen::MatrixXcd exp_scaled(Complex c) const;
  // e^{-beta H}/Z
  Eigen::MatrixXcd thermal_density(double beta) const;

 private:
  Eigen::VectorXd eigs_;
  Eigen::MatrixXcd vecs_;
};

}  // namespace sizewind
