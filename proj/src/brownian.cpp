#include "sizewind/brownian.hpp"

#include <cmath>
#include <stdexcept>

namespace sizewind::brownian {

double SizeTrajectory::mean(std::size_t t_index) const {
  const auto& row = q.at(t_index);
  double m = 0, s = 0;
  for (int l = 0; l <= n; ++l) {
    m += l * row[l];
    s += row[l];
  }
  return m / s;
}

double SizeTrajectory::sigma(std::size_t t_index) const {
  const auto& row = q.at(t_index);
  double mu = mean(t_index), s = 0, acc = 0;
  for (int l = 0; l <= n; ++l) {
    acc += (l - mu) * (l - mu) * row[l];
    s += row[l];
  }
  return std::sqrt(acc / s);
}

std::vector<double> master_rhs(const std::vector<double>& q, int n) {
  if (static_cast<int>(q.size()) != n + 1)
    throw std::invalid_argument("q must have n+1 entries");
  std::vector<double> rhs(n + 1, 0.0);
  double dn = n;
  for (int l = 0; l <= n; ++l) {
    double gain = 0.0;
    if (l >= 1) gain += 3.0 * (l - 1) * (dn - l + 1.0) / dn * q[l - 1];
    if (l + 1 <= n) gain += (l + 1.0) * l / dn * q[l + 1];
    double loss = (3.0 * l * (dn - l) / dn + l * (l - 1.0) / dn) * q[l];
    rhs[l] = gain - loss;
  }
  return rhs;
}

std::vector<double> stationary_distribution(int n) {
  // q_l proportional to 3^l C(n,l) over the non-identity strings
  std::vector<double> q(n + 1, 0.0);
  double binom = 1.0, pow3 = 1.0;
  double denom = std::pow(4.0, n) - 1.0;
  for (int l = 1; l <= n; ++l) {
    binom = binom * (n - l + 1) / l;
    pow3 *= 3.0;
    q[l] = pow3 * binom / denom;
  }
  return q;
}

SizeTrajectory integrate(const std::vector<double>& q0, int n, double t_end,
                         double dt, int snapshots) {
  if (dt <= 0.0) dt = 0.25 / n;
  double total0 = 0;
  for (double v : q0) total0 += v;
  if (std::abs(total0 - 1.0) > 1e-8)
    throw std::invalid_argument("initial distribution must be normalized");

  long steps = static_cast<long>(std::ceil(t_end / dt));
  long stride = std::max(1L, steps / std::max(snapshots, 1));

  SizeTrajectory traj;
  traj.n = n;
  std::vector<double> q = q0;
  traj.times.push_back(0.0);
  traj.q.push_back(q);

  std::vector<double> k1, k2, k3, k4, tmp(n + 1);
  for (long s = 0; s < steps; ++s) {
    double h = std::min(dt, t_end - s * dt);
    k1 = master_rhs(q, n);
    for (int l = 0; l <= n; ++l) tmp[l] = q[l] + 0.5 * h * k1[l];
    k2 = master_rhs(tmp, n);
    for (int l = 0; l <= n; ++l) tmp[l] = q[l] + 0.5 * h * k2[l];
    k3 = master_rhs(tmp, n);
    for (int l = 0; l <= n; ++l) tmp[l] = q[l] + h * k3[l];
    k4 = master_rhs(tmp, n);
    double total = 0;
    for (int l = 0; l <= n; ++l) {
      q[l] += h / 6.0 * (k1[l] + 2.0 * k2[l] + 2.0 * k3[l] + k4[l]);
      total += q[l];
    }
    // stability monitor: RK4 on this stiff-ish generator loses conservation
    // and positivity first when dt is too large
    if (std::abs(total - 1.0) > 1e-6)
      throw std::runtime_error("integration step too large: conservation lost");
    for (int l = 0; l <= n; ++l)
      if (q[l] < -1e-7)
        throw std::runtime_error("integration step too large: negativity");
    if ((s + 1) % stride == 0 || s == steps - 1) {
      traj.times.push_back((s + 1 == steps) ? t_end : (s + 1) * dt);
      traj.q.push_back(q);
    }
  }
  return traj;
}

namespace {

// uniform choice among support (or non-support) sites of the string
int pick_site(const std::vector<int>& site, CounterRng& rng, bool in_support) {
  int count = 0;
  for (int v : site) count += (v != 0) == in_support;
  int target = static_cast<int>(rng.uniform_int(count));
  for (int j = 0; j < static_cast<int>(site.size()); ++j) {
    if ((site[j] != 0) != in_support) continue;
    if (target-- == 0) return j;
  }
  throw std::logic_error("no eligible site");
}

}  // namespace

std::vector<double> stochastic_oracle(int n, int l0, double t_end, int trials,
                                      std::uint64_t seed) {
  if (n > 16) throw std::invalid_argument("string-resolved oracle capped at n=16");
  if (l0 < 0 || l0 > n) throw std::invalid_argument("l0 out of range");
  std::vector<double> hist(n + 1, 0.0);

  for (int trial = 0; trial < trials; ++trial) {
    CounterRng rng(seed, static_cast<std::uint64_t>(trial));
    // explicit string state: per-site Pauli labels 0 (I), 1..3 (X, Y, Z);
    // the initial operator is X on the first l0 sites
    std::vector<int> site(n, 0);
    for (int j = 0; j < l0; ++j) site[j] = 1;
    int l = l0;
    double t = 0.0;
    for (;;) {
      // birth: pairs (support site with differing label, outside site);
      // death: support pairs with exactly one matching label
      double birth = 3.0 * l * (n - l) / n;
      double death = static_cast<double>(l) * (l - 1) / n;
      double rate = birth + death;
      if (rate <= 0.0) break;  // identity or empty: frozen
      t += rng.exponential(rate);
      if (t > t_end) break;
      if (rng.uniform() * rate < birth) {
        // pick a support site (label changes to one of the 2 others) and an
        // outside site (gains one of 3 labels)
        int si = pick_site(site, rng, true);
        int so = pick_site(site, rng, false);
        int delta = 1 + static_cast<int>(rng.uniform_int(2));
        site[si] = 1 + (site[si] - 1 + delta) % 3;
        site[so] = 1 + static_cast<int>(rng.uniform_int(3));
        ++l;
      } else {
        // pick an ordered support pair: first site keeps its label and the
        // generator matches it there (site dies), second site label changes
        int a = pick_site(site, rng, true);
        int b;
        do {
          b = pick_site(site, rng, true);
        } while (b == a);
        site[a] = 0;
        int delta = 1 + static_cast<int>(rng.uniform_int(2));
        site[b] = 1 + (site[b] - 1 + delta) % 3;
        --l;
      }
    }
    hist[l] += 1.0 / trials;
  }
  return hist;
}

std::vector<double> continuum_step(const std::vector<double>& phi, double dx,
                                   int n) {
  if (static_cast<int>(phi.size()) != n + 1)
    throw std::invalid_argument("phi must have n+1 entries");
  std::vector<double> rhs(n + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    double x = k * dx;
    double acc = 0.0;
    if (k >= 1) acc += 3.0 * (x - dx) * (1.0 - x + dx) * phi[k - 1];
    if (k + 1 <= n) acc += x * (x + dx) * phi[k + 1];
    acc -= (3.0 * x * (1.0 - x) + x * (x - dx)) * phi[k];
    rhs[k] = acc / dx;
  }
  return rhs;
}

double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("length mismatch");
  double acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  return 0.5 * acc;
}

}  // namespace sizewind::brownian
