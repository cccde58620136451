#include "sizewind/dense.hpp"

#include <stdexcept>

namespace sizewind {

DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
  DenseOperator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace {

// Gathers the amplitudes of each 2^k-dim fiber addressed by `qubits`,
// multiplies by op, and scatters back.
void apply_generic(Complex* data, Eigen::Index stride, Eigen::Index count,
                   const DenseOperator& op, const std::vector<int>& qubits,
                   int n_total) {
  const int k = static_cast<int>(qubits.size());
  const Eigen::Index dim = Eigen::Index{1} << n_total;
  const Eigen::Index sub = Eigen::Index{1} << k;
  if (op.rows() != sub || op.cols() != sub)
    throw std::invalid_argument("operator dimension does not match qubit list");

  std::vector<Eigen::Index> masks(k);
  for (int i = 0; i < k; ++i) {
    if (qubits[i] < 0 || qubits[i] >= n_total)
      throw std::invalid_argument("qubit index out of range");
    masks[i] = Eigen::Index{1} << (n_total - 1 - qubits[i]);
  }
  Eigen::Index addressed = 0;
  for (auto m : masks) addressed |= m;

  std::vector<Eigen::Index> fiber(sub);
  std::vector<Complex> mixed(sub);
  for (Eigen::Index base = 0; base < dim; ++base) {
    if (base & addressed) continue;  // enumerate fibers by their zero offset
    for (Eigen::Index s = 0; s < sub; ++s) {
      Eigen::Index idx = base;
      for (int i = 0; i < k; ++i)
        if ((s >> (k - 1 - i)) & 1) idx |= masks[i];
      fiber[s] = idx;
    }
    for (Eigen::Index c = 0; c < count; ++c) {
      Complex* col = data + c * stride;
      for (Eigen::Index s = 0; s < sub; ++s) mixed[s] = col[fiber[s]];
      for (Eigen::Index r = 0; r < sub; ++r) {
        Complex acc = 0;
        for (Eigen::Index s = 0; s < sub; ++s) acc += op(r, s) * mixed[s];
        col[fiber[r]] = acc;
      }
    }
  }
}

}  // namespace

void apply_to_qubits(DenseVector& state, const DenseOperator& op,
                     const std::vector<int>& qubits, int n_total) {
  if (state.size() != (Eigen::Index{1} << n_total))
    throw std::invalid_argument("state length does not match qubit count");
  apply_generic(state.data(), state.size(), 1, op, qubits, n_total);
}

void apply_to_rows(Eigen::MatrixXcd& m, const DenseOperator& op,
                   const std::vector<int>& qubits, int n_row_qubits) {
  if (m.rows() != (Eigen::Index{1} << n_row_qubits))
    throw std::invalid_argument("row count does not match qubit count");
  // column-major storage: each column is contiguous
  apply_generic(m.data(), m.rows(), m.cols(), op, qubits, n_row_qubits);
}

void apply_to_cols(Eigen::MatrixXcd& m, const DenseOperator& op,
                   const std::vector<int>& qubits, int n_col_qubits) {
  if (m.cols() != (Eigen::Index{1} << n_col_qubits))
    throw std::invalid_argument("column count does not match qubit count");
  Eigen::MatrixXcd mt = m.transpose();
  apply_generic(mt.data(), mt.rows(), mt.cols(), op, qubits, n_col_qubits);
  m = mt.transpose();
}

Eigen::MatrixXcd reduced_density(const DenseVector& state, int n_total,
                                 const std::vector<int>& keep) {
  const int k = static_cast<int>(keep.size());
  const Eigen::Index dim = Eigen::Index{1} << n_total;
  const Eigen::Index sub = Eigen::Index{1} << k;
  if (state.size() != dim)
    throw std::invalid_argument("state length does not match qubit count");

  std::vector<Eigen::Index> masks(k);
  for (int i = 0; i < k; ++i)
    masks[i] = Eigen::Index{1} << (n_total - 1 - keep[i]);
  Eigen::Index addressed = 0;
  for (auto m : masks) addressed |= m;

  auto sub_index = [&](Eigen::Index idx) {
    Eigen::Index s = 0;
    for (int i = 0; i < k; ++i)
      if (idx & masks[i]) s |= Eigen::Index{1} << (k - 1 - i);
    return s;
  };

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(sub, sub);
  // group amplitudes by the traced-out remainder
  std::vector<Eigen::Index> members(sub);
  for (Eigen::Index base = 0; base < dim; ++base) {
    if (base & addressed) continue;
    for (Eigen::Index s = 0; s < sub; ++s) {
      Eigen::Index idx = base;
      for (int i = 0; i < k; ++i)
        if ((s >> (k - 1 - i)) & 1) idx |= masks[i];
      members[sub_index(idx)] = idx;
    }
    for (Eigen::Index r = 0; r < sub; ++r)
      for (Eigen::Index c = 0; c < sub; ++c)
        rho(r, c) += state[members[r]] * std::conj(state[members[c]]);
  }
  return rho;
}

bool is_hermitian(const DenseOperator& m, double tol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const DenseOperator& m, double tol) {
  DenseOperator d = m.adjoint() * m;
  d -= DenseOperator::Identity(m.rows(), m.cols());
  return d.cwiseAbs().maxCoeff() <= tol;
}

SpectralCache::SpectralCache(const DenseOperator& h) {
  if (!is_hermitian(h, 1e-10))
    throw std::invalid_argument("Hamiltonian is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  eigs_ = solver.eigenvalues();
  vecs_ = solver.eigenvectors();
}

Eigen::MatrixXcd SpectralCache::propagator(double t) const {
  return exp_scaled(Complex(0.0, -t));
}

Eigen::MatrixXcd SpectralCache::exp_scaled(Complex c) const {
  Eigen::VectorXcd d(eigs_.size());
  for (Eigen::Index i = 0; i < eigs_.size(); ++i)
    d[i] = std::exp(c * eigs_[i]);
  return vecs_ * d.asDiagonal() * vecs_.adjoint();
}

Eigen::MatrixXcd SpectralCache::thermal_density(double beta) const {
  // shift by the ground energy so that large beta stays finite
  double e0 = eigs_.minCoeff();
  Eigen::VectorXd w(eigs_.size());
  for (Eigen::Index i = 0; i < eigs_.size(); ++i)
    w[i] = std::exp(-beta * (eigs_[i] - e0));
  w /= w.sum();
  return vecs_ * w.cast<Complex>().asDiagonal() * vecs_.adjoint();
}

}  // namespace sizewind
