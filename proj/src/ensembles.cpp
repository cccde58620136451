#include "sizewind/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sizewind::ensembles {

using std::complex;
namespace {
const complex<double> kI{0.0, 1.0};
}

DenseOperator sample_gue_dim(int dim, CounterRng& rng) {
  double scale = 1.0 / (2.0 * std::sqrt(static_cast<double>(dim)));
  DenseOperator h(dim, dim);
  for (int i = 0; i < dim; ++i) {
    h(i, i) = scale * rng.normal();
    for (int j = i + 1; j < dim; ++j) {
      complex<double> v = scale * rng.cnormal();
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  }
  return h;
}

DenseOperator sample_goe_dim(int dim, CounterRng& rng) {
  double scale = 1.0 / (2.0 * std::sqrt(static_cast<double>(dim)));
  DenseOperator h(dim, dim);
  for (int i = 0; i < dim; ++i) {
    h(i, i) = scale * std::sqrt(2.0) * rng.normal();
    for (int j = i + 1; j < dim; ++j) {
      double v = scale * rng.normal();
      h(i, j) = v;
      h(j, i) = v;
    }
  }
  return h;
}

DenseOperator sample(const EnsembleSpec& spec, int index) {
  CounterRng rng(spec.seed, static_cast<std::uint64_t>(index));
  int dim = 1 << spec.n;
  return spec.kind == EnsembleKind::kGue ? sample_gue_dim(dim, rng)
                                         : sample_goe_dim(dim, rng);
}

DenseOperator haar_unitary(int dim, CounterRng& rng) {
  DenseOperator z(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) z(i, j) = rng.cnormal();
  Eigen::HouseholderQR<DenseOperator> qr(z);
  DenseOperator q = qr.householderQ();
  DenseOperator r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    complex<double> d = r(i, i);
    q.col(i) *= d / std::abs(d);
  }
  return q;
}

std::complex<double> f_semicircle(std::complex<double> z) {
  if (std::abs(z.real()) > 700.0)
    throw std::overflow_error("f_semicircle: |Re z| too large, would overflow");
  double az = std::abs(z);
  if (az < 20.0) {
    // f(z) = sum_k (z^2/4)^k / (k! (k+1)!)
    complex<double> w = z * z / 4.0;
    complex<double> term{1.0, 0.0}, acc{1.0, 0.0};
    for (int k = 1; k < 80; ++k) {
      term *= w / static_cast<double>(k * (k + 1));
      acc += term;
      if (std::abs(term) < 1e-18 * std::abs(acc) && k > 4) break;
    }
    return acc;
  }
  // large |z|: both exponential branches of the I_1 asymptotic series
  // a_k(1) = prod_{m=1..k} (4 - (2m-1)^2) / (k! 8^k)
  complex<double> zinv = 1.0 / z;
  complex<double> sp{1.0, 0.0}, sm{1.0, 0.0};
  double ak = 1.0;
  complex<double> zk{1.0, 0.0};
  for (int k = 1; k <= 12; ++k) {
    ak *= (4.0 - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k);
    zk *= zinv;
    sp += ((k % 2) ? -ak : ak) * zk;
    sm += ak * zk;
  }
  complex<double> pref = 1.0 / std::sqrt(2.0 * M_PI * z);
  complex<double> branch = (z.imag() >= 0.0) ? -kI : kI;  // e^{-+ 3 pi i/2}
  complex<double> i1 = pref * (std::exp(z) * sp + branch * std::exp(-z) * sm);
  return 2.0 * i1 / z;
}

namespace {

// shared skeleton of the ensemble-averaged channel parameter; A substitutes the
// printed (1 - e^{ig}) coefficient and B the printed (1 - cos g)
double lambda_skeleton(double beta, double t_l, double t_r, complex<double> A,
                       complex<double> B) {
  auto f = f_semicircle;
  complex<double> hb{-beta / 2.0, 0.0};
  complex<double> dt = kI * (t_r - t_l);
  complex<double> term1 = 0.5 * A * f(hb + dt) * f(dt) * f(hb);
  complex<double> inner = 0.5 * A * f(hb + kI * t_r) +
                          A * f(kI * t_l) * f(kI * t_r) * f(hb - kI * t_l) -
                          A * f(kI * t_l) * f(hb + dt) -
                          B * f(kI * t_r) * f(hb);
  complex<double> total =
      term1 + f(kI * t_l) * f(kI * t_r) * f(hb + kI * t_l) * inner;
  return total.real() / f(complex<double>{-beta, 0.0}).real();
}

}  // namespace

double lambda_master(double beta, double t_l, double t_r, double g) {
  complex<double> A = 1.0 - std::exp(kI * g);
  complex<double> B{1.0 - std::cos(g), 0.0};
  return lambda_skeleton(beta, t_l, t_r, A, B);
}

double finite_n_lambda(double beta, double t_l, double t_r, double g, int n) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  double c = std::pow(std::cos(g / n), n);
  complex<double> A = c * (c - std::exp(kI * g));
  complex<double> B{c * (c - std::cos(g)), 0.0};
  return lambda_skeleton(beta, t_l, t_r, A, B);
}

double lambda_inf_temperature(double t_l, double t_r, double g) {
  auto fr = [](double t) { return f_semicircle(kI * t).real(); };
  double a = fr(t_l), b = fr(t_r), c = fr(t_r - t_l);
  return 0.5 * (1.0 - std::cos(g)) *
         (c * c + 2.0 * std::pow(a, 4) * b * b - a * a * b * b -
          2.0 * std::pow(a, 3) * b * c);
}

double lambda_sametime(double t, double g) {
  double a = f_semicircle(kI * t).real();
  return 0.5 * (1.0 - std::cos(g)) *
         (1.0 + 2.0 * std::pow(a, 6) - 3.0 * std::pow(a, 4));
}

double plateau_onset(double g, double rel_tol, double t_max, double dt) {
  double plateau = 0.5 * (1.0 - std::cos(g));
  if (plateau <= 0.0) throw std::invalid_argument("no plateau at this g");
  double onset = 0.0;
  for (double t = t_max; t >= 0.0; t -= dt) {
    if (std::abs(lambda_sametime(t, g) - plateau) > rel_tol * plateau) {
      onset = t + dt;
      break;
    }
  }
  return onset;
}

double bulk_sigma_value(BulkSigma opt, int n) {
  switch (opt) {
    case BulkSigma::kBinomial: return std::sqrt(3.0 * n) / 4.0;
    case BulkSigma::kAppendix: return std::sqrt(3.0 * n / 4.0);
    case BulkSigma::kMainText: return std::sqrt(2.0 * n) / 3.0;
  }
  throw std::invalid_argument("bad sigma option");
}

WindingDistribution winding_size_gue(int l0, int n, double beta, double t,
                                     BulkSigma sigma_opt) {
  if (l0 < 0 || l0 > n) throw std::invalid_argument("l0 out of range");
  auto f = f_semicircle;
  complex<double> hb{-beta / 2.0, 0.0};
  complex<double> delta_w =
      f(kI * t + hb) * f(kI * t + hb) * f(-kI * t) * f(-kI * t);
  complex<double> bulk_w = f(hb) * f(hb) - delta_w;
  double fb = f(complex<double>{-beta, 0.0}).real();
  delta_w /= fb;
  bulk_w /= fb;

  double mu = 0.75 * n;
  double sigma = bulk_sigma_value(sigma_opt, n);
  std::vector<double> gauss(n + 1);
  double s = 0.0;
  for (int l = 0; l <= n; ++l) {
    gauss[l] = std::exp(-0.5 * (l - mu) * (l - mu) / (sigma * sigma));
    s += gauss[l];
  }
  for (auto& v : gauss) v /= s;

  WindingDistribution dist(n);
  for (int l = 0; l <= n; ++l) dist.q[l] = bulk_w * gauss[l];
  dist.q[l0] += delta_w;
  // conventional companion is only paper-determined at beta = 0 where it
  // coincides with q; store magnitudes so the Cauchy-Schwarz bound is tight
  for (int l = 0; l <= n; ++l) dist.p[l] = std::abs(dist.q[l]);
  return dist;
}

std::vector<double> uniform_nonidentity_size_distribution(int n) {
  std::vector<double> out(n + 1, 0.0);
  double denom = std::pow(4.0, n) - 1.0;
  double binom = 1.0;  // C(n, l)
  double pow3 = 1.0;
  for (int l = 1; l <= n; ++l) {
    binom = binom * (n - l + 1) / l;
    pow3 *= 3.0;
    out[l] = pow3 * binom / denom;
  }
  return out;
}

std::complex<double> twopoint_I_gue(double beta, double t, double g) {
  auto f = f_semicircle;
  complex<double> hb{-beta / 2.0, 0.0};
  complex<double> dw = f(kI * t + hb) * f(kI * t + hb) * f(-kI * t) * f(-kI * t);
  complex<double> rest = f(hb) * f(hb) - dw;
  return (std::exp(kI * g) * dw + rest) / f(complex<double>{-beta, 0.0});
}

std::complex<double> qtilde_formula(double beta, double t, double g) {
  return std::exp(-kI * g) * twopoint_I_gue(beta, t, g);
}

std::complex<double> twopoint_II_goe(double beta, double t_l, double t_r,
                                     double g) {
  auto f = f_semicircle;
  complex<double> hb{-beta / 2.0, 0.0};
  complex<double> fl = f(hb + kI * t_l) * f(-kI * t_l);
  complex<double> fr = f(kI * t_r) * f(-kI * t_r);
  complex<double> frb = f(hb + kI * t_r) * f(-kI * t_r);
  complex<double> fd = f(hb - kI * t_r + kI * t_l);
  complex<double> fdp = f(hb + kI * t_r - kI * t_l);
  complex<double> fdt = f(kI * t_r - kI * t_l);
  complex<double> fb2 = f(hb);
  complex<double> eg = std::exp(kI * g);
  complex<double> emg = std::exp(-kI * g);
  complex<double> acc = 2.0 * fl * fr * fb2 - fd * fb2 * fdt - fl * frb +
                        fd * fdp - eg * fl * fr * fb2 + eg * fl * frb -
                        emg * fl * fr * fb2 + emg * fd * fb2 * fdt;
  return acc / f(complex<double>{-beta, 0.0});
}

PairClass classify_pair(const PauliString& u, const PauliString& v) {
  bool uz = u.is_identity_pattern(), vz = v.is_identity_pattern();
  if (uz && vz) return PairClass::kBothZero;
  if (uz || vz) return PairClass::kOneZero;
  if (u.same_pattern(v)) return PairClass::kEqualNonzero;
  return u.commutes_parity(v) ? PairClass::kDistinctAnticommuting
                              : PairClass::kDistinctCommuting;
}

std::complex<double> s_function(std::complex<double> a, std::complex<double> b,
                                PairClass cls, double d) {
  auto f = f_semicircle;
  complex<double> fa = f(a), fb = f(b), fab = f(a + b);
  double d2 = d * d;
  switch (cls) {
    case PairClass::kBothZero:
      return fab * fab;
    case PairClass::kEqualNonzero:
      return fa * fa * fb * fb;
    case PairClass::kOneZero:
      return (f(2.0 * (a + b)) - fab * fab) / d2;
    case PairClass::kDistinctCommuting:
      return (f(2.0 * a) * fb * fb + f(2.0 * b) * fa * fa + fab * fab -
              3.0 * fa * fa * fb * fb) /
             d2;
    case PairClass::kDistinctAnticommuting:
      return (fa * fa * fb * fb + fab * fab - f(2.0 * a) * fb * fb -
              f(2.0 * b) * fa * fa) /
             d2;
  }
  throw std::invalid_argument("bad pair class");
}

std::complex<double> s_function(std::complex<double> a, std::complex<double> b,
                                const PauliString& u, const PauliString& v,
                                double d) {
  return s_function(a, b, classify_pair(u, v), d);
}

// ---- permutation toolkit ---------------------------------------------------

Permutation Permutation::identity(int r) {
  Permutation p;
  p.images.resize(r);
  std::iota(p.images.begin(), p.images.end(), 0);
  return p;
}

Permutation Permutation::inverse() const {
  Permutation p;
  p.images.resize(degree());
  for (int i = 0; i < degree(); ++i) p.images[images[i]] = i;
  return p;
}

Permutation Permutation::operator*(const Permutation& rhs) const {
  if (degree() != rhs.degree())
    throw std::invalid_argument("permutation degree mismatch");
  Permutation p;
  p.images.resize(degree());
  for (int i = 0; i < degree(); ++i) p.images[i] = images[rhs.images[i]];
  return p;
}

std::vector<std::vector<int>> Permutation::cycles() const {
  std::vector<bool> seen(degree(), false);
  std::vector<std::vector<int>> out;
  for (int i = 0; i < degree(); ++i) {
    if (seen[i]) continue;
    std::vector<int> cyc;
    int j = i;
    while (!seen[j]) {
      seen[j] = true;
      cyc.push_back(j);
      j = images[j];
    }
    out.push_back(std::move(cyc));
  }
  return out;
}

int Permutation::num_cycles() const { return static_cast<int>(cycles().size()); }

int permutation_distance(const Permutation& a, const Permutation& b) {
  return (a * b.inverse()).length();
}

std::vector<Permutation> all_permutations(int r) {
  std::vector<int> idx(r);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<Permutation> out;
  do {
    out.push_back(Permutation{idx});
  } while (std::next_permutation(idx.begin(), idx.end()));
  return out;
}

long long catalan(int k) {
  long long c = 1;
  for (int i = 0; i < k; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

long long mobius(const Permutation& pi) {
  long long m = (pi.length() % 2) ? -1 : 1;
  for (const auto& cyc : pi.cycles())
    m *= catalan(static_cast<int>(cyc.size()) - 1);
  return m;
}

double wg_leading(const Permutation& pi, double d) {
  return static_cast<double>(mobius(pi)) /
         std::pow(d, pi.degree() + pi.length());
}

DenseOperator replica_operator(const Permutation& pi, int d) {
  int r = pi.degree();
  Eigen::Index dim = 1;
  for (int k = 0; k < r; ++k) dim *= d;
  Permutation inv = pi.inverse();
  DenseOperator out = DenseOperator::Zero(dim, dim);
  std::vector<int> digits(r);
  for (Eigen::Index col = 0; col < dim; ++col) {
    Eigen::Index rest = col;
    for (int k = r - 1; k >= 0; --k) {
      digits[k] = static_cast<int>(rest % d);
      rest /= d;
    }
    Eigen::Index row = 0;
    for (int k = 0; k < r; ++k) row = row * d + digits[inv.images[k]];
    out(row, col) = 1.0;
  }
  return out;
}

std::complex<double> product_trace_with_replica(
    const std::vector<DenseOperator>& slots, const Permutation& pi) {
  if (static_cast<int>(slots.size()) != pi.degree())
    throw std::invalid_argument("slot count must match permutation degree");
  complex<double> total{1.0, 0.0};
  for (const auto& cyc : pi.cycles()) {
    // trace of a_{c1} a_{cm} a_{c(m-1)} ... a_{c2} for the cycle c1->c2->...
    DenseOperator prod = slots[cyc.front()];
    for (std::size_t i = cyc.size() - 1; i >= 1; --i) prod *= slots[cyc[i]];
    total *= prod.trace();
  }
  return total;
}

std::complex<double> haar_moment(const std::vector<DenseOperator>& a_slots,
                                 const std::vector<DenseOperator>& b_slots,
                                 double d) {
  if (a_slots.size() != b_slots.size())
    throw std::invalid_argument("slot count mismatch");
  int r = static_cast<int>(a_slots.size());
  if (r < 1 || r > 4)
    throw std::invalid_argument("haar_moment supports 1 <= r <= 4");
  if (r == 1) return a_slots[0].trace() * b_slots[0].trace() / d;
  if (r == 2) {
    complex<double> tra = a_slots[0].trace() * a_slots[1].trace();
    complex<double> trb = b_slots[0].trace() * b_slots[1].trace();
    complex<double> traf = (a_slots[0] * a_slots[1]).trace();
    complex<double> trbf = (b_slots[0] * b_slots[1]).trace();
    double denom = d * (d * d - 1.0);
    return ((d * tra - traf) * trb + (d * traf - tra) * trbf) / denom;
  }
  auto perms = all_permutations(r);
  complex<double> acc{0.0, 0.0};
  for (const auto& sigma : perms) {
    complex<double> trb = product_trace_with_replica(b_slots, sigma);
    for (const auto& tau : perms) {
      complex<double> tra = product_trace_with_replica(a_slots, tau);
      acc += wg_leading(sigma * tau, d) * tra * trb;
    }
  }
  return acc;
}

}  // namespace sizewind::ensembles
