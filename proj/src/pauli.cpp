#include "sizewind/pauli.hpp"

#include <bit>
#include <stdexcept>

namespace sizewind {

namespace {

int words_for(int n) { return (n + 63) / 64; }

const std::complex<double> kImag{0.0, 1.0};

}  // namespace

PauliString::PauliString(int n_qubits) : n_(n_qubits) {
  if (n_qubits < 0) throw std::invalid_argument("negative qubit count");
  z_.assign(words_for(n_qubits), 0);
  x_.assign(words_for(n_qubits), 0);
}

PauliString PauliString::from_residues(std::span<const int> v) {
  if (v.size() % 2 != 0)
    throw std::invalid_argument("symplectic vector length must be even");
  int n = static_cast<int>(v.size()) / 2;
  PauliString out(n);
  // v = v0 + 2w with v0 in {0,1}; P_{v0+2w} = (-1)^{[v0,w]} P_{v0}
  long long form = 0;  // p0.qw - q0.pw
  for (int j = 0; j < n; ++j) {
    int p = ((v[j] % 4) + 4) % 4;
    int q = ((v[n + j] % 4) + 4) % 4;
    int p0 = p & 1, q0 = q & 1;
    int pw = (p >> 1) & 1, qw = (q >> 1) & 1;
    form += p0 * qw - q0 * pw;
    out.set_bit(out.z_, j, p0);
    out.set_bit(out.x_, j, q0);
  }
  out.phase_ = static_cast<int>(((form % 2) + 2) % 2) * 2;
  return out;
}

PauliString PauliString::from_string(std::string_view text) {
  int phase = 0;
  auto sep = text.find_first_of(".*");
  std::string_view body = text;
  if (text.rfind("i^", 0) == 0) {
    if (sep == std::string_view::npos)
      throw std::invalid_argument("missing separator in Pauli literal");
    phase = std::stoi(std::string(text.substr(2, sep - 2)));
    body = text.substr(sep + 1);
  }
  std::string letters;
  for (char c : body) {
    if (c == ' ') continue;
    letters.push_back(c);
  }
  PauliString out(static_cast<int>(letters.size()));
  out.phase_ = ((phase % 4) + 4) % 4;
  for (int j = 0; j < out.n_; ++j) {
    switch (letters[j]) {
      case 'I': break;
      case 'X': out.set_bit(out.x_, j, true); break;
      case 'Y': out.set_bit(out.x_, j, true); out.set_bit(out.z_, j, true); break;
      case 'Z': out.set_bit(out.z_, j, true); break;
      default: throw std::invalid_argument("bad Pauli letter");
    }
  }
  return out;
}

PauliString PauliString::single(int n_qubits, int site, char pauli) {
  if (site < 0 || site >= n_qubits) throw std::invalid_argument("site out of range");
  PauliString out(n_qubits);
  out.set_site(site, pauli == 'Z' || pauli == 'Y', pauli == 'X' || pauli == 'Y');
  if (pauli != 'X' && pauli != 'Y' && pauli != 'Z')
    throw std::invalid_argument("bad Pauli letter");
  return out;
}

PauliString PauliString::random(int n_qubits, CounterRng& rng, bool allow_identity) {
  PauliString out(n_qubits);
  for (;;) {
    for (int j = 0; j < n_qubits; ++j) {
      auto r = rng.uniform_int(4);
      out.set_site(j, r == 2 || r == 3, r == 1 || r == 2);
    }
    if (allow_identity || !out.is_identity_pattern()) return out;
  }
}

std::complex<double> PauliString::phase() const {
  static const std::complex<double> table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return table[phase_];
}

void PauliString::set_site(int site, bool zb, bool xb) {
  set_bit(z_, site, zb);
  set_bit(x_, site, xb);
}

int PauliString::pauli_at(int site) const {
  bool zb = z_bit(site), xb = x_bit(site);
  if (!zb && !xb) return 0;
  if (!zb && xb) return 1;
  if (zb && xb) return 2;
  return 3;
}

bool PauliString::is_identity_pattern() const {
  for (std::size_t w = 0; w < z_.size(); ++w)
    if (z_[w] | x_[w]) return false;
  return true;
}

int PauliString::dot_mod4(const std::vector<std::uint64_t>& a,
                          const std::vector<std::uint64_t>& b) {
  int acc = 0;
  for (std::size_t w = 0; w < a.size(); ++w)
    acc = (acc + std::popcount(a[w] & b[w])) & 3;
  return acc;
}

int symplectic_form_mod4(const PauliString& a, const PauliString& b) {
  // computed through the public bit accessors to keep this a free function
  int acc = 0;
  for (int j = 0; j < a.num_qubits(); ++j) {
    acc += (a.z_bit(j) && b.x_bit(j)) ? 1 : 0;
    acc -= (a.x_bit(j) && b.z_bit(j)) ? 1 : 0;
  }
  return ((acc % 4) + 4) % 4;
}

PauliString PauliString::operator*(const PauliString& rhs) const {
  if (n_ != rhs.n_) throw std::invalid_argument("qubit count mismatch");
  PauliString out(n_);
  // P_v P_w = i^{[v,w]} P_{v+w}; the sum v+w has entries in {0,1,2} and is
  // reduced by P_{u+2c} = (-1)^{[u,c]} P_u with u = v xor w, c = v and w.
  int form = (dot_mod4(z_, rhs.x_) - dot_mod4(x_, rhs.z_) + 8) & 3;
  int carry_sign = 0;
  for (std::size_t w = 0; w < z_.size(); ++w) {
    std::uint64_t uz = z_[w] ^ rhs.z_[w];
    std::uint64_t ux = x_[w] ^ rhs.x_[w];
    std::uint64_t cz = z_[w] & rhs.z_[w];
    std::uint64_t cx = x_[w] & rhs.x_[w];
    carry_sign ^= (std::popcount(uz & cx) ^ std::popcount(ux & cz)) & 1;
    out.z_[w] = uz;
    out.x_[w] = ux;
  }
  out.phase_ = (phase_ + rhs.phase_ + form + 2 * carry_sign) & 3;
  return out;
}

PauliString PauliString::inverse() const {
  PauliString out = *this;
  out.phase_ = (4 - phase_) & 3;
  return out;
}

PauliString PauliString::adjoint() const { return inverse(); }

int PauliString::commutes_parity(const PauliString& rhs) const {
  if (n_ != rhs.n_) throw std::invalid_argument("qubit count mismatch");
  return (dot_mod4(z_, rhs.x_) + dot_mod4(x_, rhs.z_)) & 1;
}

int PauliString::size() const {
  int acc = 0;
  for (std::size_t w = 0; w < z_.size(); ++w)
    acc += std::popcount(z_[w] | x_[w]);
  return acc;
}

int PauliString::transpose_sign() const {
  int ys = 0;
  for (std::size_t w = 0; w < z_.size(); ++w) ys += std::popcount(z_[w] & x_[w]);
  return (ys & 1) ? -1 : 1;
}

int PauliString::y_conjugation_sign() const { return (size() & 1) ? -1 : 1; }

int PauliString::xy_weight(const std::vector<int>& carriers) const {
  int acc = 0;
  for (int j : carriers) acc += x_bit(j) ? 1 : 0;
  return acc;
}

int PauliString::xy_weight_all() const {
  int acc = 0;
  for (std::size_t w = 0; w < x_.size(); ++w) acc += std::popcount(x_[w]);
  return acc;
}

Eigen::MatrixXcd PauliString::dense(int dense_limit) const {
  if (n_ > dense_limit)
    throw std::runtime_error("dense() beyond configured qubit limit");
  static const Eigen::Matrix2cd sig[4] = {
      (Eigen::Matrix2cd() << 1, 0, 0, 1).finished(),
      (Eigen::Matrix2cd() << 0, 1, 1, 0).finished(),
      (Eigen::Matrix2cd() << 0, -kImag, kImag, 0).finished(),
      (Eigen::Matrix2cd() << 1, 0, 0, -1).finished()};
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int j = 0; j < n_; ++j) {
    // qubit 0 is the leftmost (most significant) tensor factor
    const Eigen::Matrix2cd& s = sig[pauli_at(j)];
    Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r)
      for (Eigen::Index c = 0; c < out.cols(); ++c)
        next.block<2, 2>(2 * r, 2 * c) = out(r, c) * s;
    out.swap(next);
  }
  return phase() * out;
}

std::string PauliString::str() const {
  std::string out = "i^" + std::to_string(phase_) + " . ";
  static const char letters[] = "IXYZ";
  for (int j = 0; j < n_; ++j) out.push_back(letters[pauli_at(j)]);
  return out;
}

bool PauliString::operator==(const PauliString& rhs) const {
  return n_ == rhs.n_ && phase_ == rhs.phase_ && z_ == rhs.z_ && x_ == rhs.x_;
}

bool PauliString::same_pattern(const PauliString& rhs) const {
  return n_ == rhs.n_ && z_ == rhs.z_ && x_ == rhs.x_;
}

std::size_t PauliStringHash::operator()(const PauliString& p) const {
  std::size_t h = std::hash<int>()(p.n_ * 4 + p.phase_);
  auto mix = [&h](std::uint64_t v) {
    h ^= std::hash<std::uint64_t>()(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  for (auto w : p.z_) mix(w);
  for (auto w : p.x_) mix(w ^ 0x5555555555555555ULL);
  return h;
}

}  // namespace sizewind
