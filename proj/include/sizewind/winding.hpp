#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "sizewind/dense.hpp"
#include "sizewind/exact_sim.hpp"
#include "sizewind/pauli.hpp"
#include "sizewind/winding_distribution.hpp"

namespace sizewind::winding {

// Expansion rho_beta^{1/2} O(t) = 2^{-n/2} sum_P c_P P over canonical Paulis.
// The flat index packs the Z mask and X mask (bit n-1-j for qubit j).
struct PauliCoefficients {
  int n = 0;
  std::vector<std::complex<double>> c;

  std::size_t index(std::uint64_t zmask, std::uint64_t xmask) const {
    return (static_cast<std::size_t>(zmask) << n) | xmask;
  }
  std::complex<double> at(const PauliString& p) const;
  PauliString pattern_of(std::size_t index) const;
};

// Enumerates all 4^n coefficients; n is capped because of the expansion cost.
PauliCoefficients pauli_coefficients(const SpectralCache& h, double beta,
                                     const PauliString& o, double t,
                                     int max_n = 7);

// Rebuilds the dense operator 2^{-n/2} sum c_P P (test oracle).
DenseOperator resynthesize(const PauliCoefficients& coeffs);

// Bins c_P^2 and |c_P|^2 by size or by carrier XY weight.
WindingDistribution distributions_from_coefficients(
    const PauliCoefficients& coeffs, SizeAxis axis = SizeAxis::kSize,
    const std::vector<int>& carriers = {});

// Uniform coupling grid that renders the xy-weight inversion an exact DFT.
std::vector<double> default_g_grid(int k);

// Recovers the winding distribution on the xy-weight axis from the dressed
// two-point function sampled on a coupling grid.
WindingDistribution fourier_distribution(const SpectralCache& h, double beta,
                                         const PauliString& o, double t,
                                         const std::vector<double>& g_grid,
                                         const exact::CouplingSpec& spec);

struct PerfectWindingReport {
  bool is_perfect = false;
  double alpha_fit = 0.0;   // q(l) = p(l) e^{2 i alpha l / n}
  double residual = 0.0;    // weighted RMS of the phase fit
  double min_ratio = 0.0;   // min |q(l)|/p(l) over retained bins
  double phase_slope = 0.0; // fitted phase advance per unit l
};

PerfectWindingReport check_perfect_winding(const WindingDistribution& dist,
                                           double tol,
                                           double weight_floor_rel = 1e-6);

// Winding rate expressed as windings per standard deviation of p(l).
double windings_per_sigma(const WindingDistribution& dist,
                          double weight_floor_rel = 1e-6);

}  // namespace sizewind::winding
