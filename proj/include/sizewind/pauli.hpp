#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sizewind/rng.hpp"

namespace sizewind {

// Largest qubit count for which dense 2^n x 2^n matrices are produced.
inline constexpr int kDenseLimit = 12;

// n-qubit Pauli operator in the symplectic representation: a Z bit-vector p,
// an X bit-vector q and a power of i. The canonical representative with
// phase_exp = 0 is the Hermitian string of I/X/Y/Z factors, i.e.
// i^{-p.q} Z^{p_1}X^{q_1} x ... x Z^{p_n}X^{q_n}.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(int n_qubits);  // identity

  static PauliString identity(int n_qubits) { return PauliString(n_qubits); }

  // Reduces an integer symplectic vector (p_1..p_n, q_1..q_n) of arbitrary
  // residues to the canonical {0,1} representative, adjusting the phase.
  static PauliString from_residues(std::span<const int> v);

  // Accepts "XIZY" or "i^k . XIZY" (the separator may be '.' or '*').
  static PauliString from_string(std::string_view text);

  // Single-qubit X/Y/Z placed at `site` (0-based) of an n-qubit register.
  static PauliString single(int n_qubits, int site, char pauli);

  // Uniformly random string; optionally excludes the identity pattern.
  static PauliString random(int n_qubits, CounterRng& rng,
                            bool allow_identity = true);

  int num_qubits() const { return n_; }
  int phase_exp() const { return phase_; }
  std::complex<double> phase() const;

  bool z_bit(int site) const { return bit(z_, site); }
  bool x_bit(int site) const { return bit(x_, site); }
  void set_site(int site, bool zb, bool xb);

  // 0: I, 1: X, 2: Y, 3: Z
  int pauli_at(int site) const;

  bool is_identity_pattern() const;  // bit pattern only, ignores phase

  PauliString operator*(const PauliString& rhs) const;
  PauliString inverse() const;
  PauliString adjoint() const;

  // parity of the symplectic form: 0 = commute, 1 = anticommute
  int commutes_parity(const PauliString& rhs) const;

  int size() const;             // number of non-identity sites
  int transpose_sign() const;   // (-1)^{p.q}
  int y_conjugation_sign() const;  // (-1)^{size}

  // number of X or Y factors among the given carrier sites
  int xy_weight(const std::vector<int>& carriers) const;
  int xy_weight_all() const;

  Eigen::MatrixXcd dense(int dense_limit = kDenseLimit) const;

  std::string str() const;

  bool operator==(const PauliString& rhs) const;
  bool same_pattern(const PauliString& rhs) const;

 private:
  static bool bit(const std::vector<std::uint64_t>& w, int i) {
    return (w[i >> 6] >> (i & 63)) & 1;
  }
  static void set_bit(std::vector<std::uint64_t>& w, int i, bool v) {
    if (v)
      w[i >> 6] |= std::uint64_t{1} << (i & 63);
    else
      w[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }
  static int dot_mod4(const std::vector<std::uint64_t>& a,
                      const std::vector<std::uint64_t>& b);

  int n_ = 0;
  int phase_ = 0;  // i^phase_, values 0..3
  std::vector<std::uint64_t> z_, x_;

  friend struct PauliStringHash;
};

struct PauliStringHash {
  std::size_t operator()(const PauliString& p) const;
};

// symplectic form [v,w] = p_v.q_w - q_v.p_w, reduced mod 4
int symplectic_form_mod4(const PauliString& a, const PauliString& b);

}  // namespace sizewind
