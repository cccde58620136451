#pragma once

#include <vector>

#include "sizewind/rng.hpp"

namespace sizewind::brownian {

// Size-resolved trajectory of the 2-local Brownian circuit master equation.
struct SizeTrajectory {
  int n = 0;
  std::vector<double> times;
  std::vector<std::vector<double>> q;  // q[t_index][l], l = 0..n

  const std::vector<double>& final_q() const { return q.back(); }
  double mean(std::size_t t_index) const;
  double sigma(std::size_t t_index) const;
};

// dq_l/dt for the size master equation; out-of-range terms are zero and the
// identity (l = 0) is decoupled.
std::vector<double> master_rhs(const std::vector<double>& q, int n);

// uniform distribution over the 4^n - 1 non-identity strings, the fixed point
std::vector<double> stationary_distribution(int n);

// Classic RK4 integration with a probability-conservation monitor.
SizeTrajectory integrate(const std::vector<double>& q0, int n, double t_end,
                         double dt = -1.0, int snapshots = 64);

// Continuous-time Markov chain on Pauli strings: every 2-local generator term
// that anticommutes with the current string fires at rate 1/(2n). Returns the
// empirical size histogram at t_end over `trials` runs.
std::vector<double> stochastic_oracle(int n, int l0, double t_end, int trials,
                                      std::uint64_t seed);

// Finite-difference right-hand side of the continuum form Phi(x, t) with
// dx = 1/n; algebraically identical to master_rhs under Phi(x) = q_{nx}.
std::vector<double> continuum_step(const std::vector<double>& phi, double dx,
                                   int n);

double total_variation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace sizewind::brownian
