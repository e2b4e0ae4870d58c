#pragma once

#include <utility>
#include <vector>

#include "fansq/fock.hpp"
#include "fansq/squeezing.hpp"
#include "fansq/states.hpp"

namespace fansq {

/// Which S(phi, xi) evaluation backs a landmark search.
///
/// `reference`   - landmark-defining closed forms (ClosedForm::reference)
///                 where supported, truncated-Fock numerics elsewhere.
///                 This route reproduces the reference landmark digit
///                 strings and is the default.
/// `closed_form` - verified closed forms where supported, numerics elsewhere.
/// `moments`     - truncated-Fock numerics always; agrees with `closed_form`
///                 to better than 1e-9.
enum class SqueezeRoute { reference, closed_form, moments };

struct CriticalReport {
    int K = 0;
    int N = 0;
    double xi_c = 0.0;   // supremum of the squeezing interval
    double xi_m = 0.0;   // argmin of S along the first squeezing direction
    double s_min = 0.0;  // S at xi_m (negative)
    std::vector<double> directions_sq;  // 2K local minima of S over [0, 2pi)
    std::vector<double> directions_st;  // 2K local maxima
    // search metadata
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double xi_tol = 0.0;
    int cutoff_used = 0;  // n_max of the last fan build; 0 on pure closed-form routes
    SqueezeRoute route = SqueezeRoute::reference;
};

/// Root of g(xi) + 1: the 4th-order critical amplitude for K = 2.
double critical_xi_from_g(std::pair<double, double> bracket = {0.01, 2.0});

/// Bisection on xi -> S(pi/(2K), xi) to |bracket| < 1e-7.
/// Throws NoSignChange when the bracket endpoints do not straddle a root.
double find_critical_xi(int K, int N, std::pair<double, double> bracket = {0.01, 2.0},
                        SqueezeRoute route = SqueezeRoute::reference,
                        const CutoffPolicy& cutoff = {});

/// Golden-section minimum of S(pi/(2K), xi) to argument tolerance 1e-7,
/// after a 64-point coarse scan that rejects non-unimodal brackets.
/// Returns (xi_M, S at xi_M).
std::pair<double, double> find_optimal_xi(int K, int N,
                                          std::pair<double, double> bracket = {0.01, 2.0},
                                          SqueezeRoute route = SqueezeRoute::reference,
                                          const CutoffPolicy& cutoff = {});

/// All local minima (squeezing directions) and maxima (stretching) of
/// phi -> S(phi) over [0, 2pi), located by grid scan with parabolic
/// refinement. Returns (minima, maxima), both sorted.
std::pair<std::vector<double>, std::vector<double>> find_directions(
    int K, int N, double xi, int grid, SqueezeRoute route = SqueezeRoute::reference,
    const CutoffPolicy& cutoff = {});

/// Smallest even N <= N_max with min over (xi in grid, phi in grid) of the
/// numeric S below -1e-9. Throws NotFound when no order squeezes.
int min_squeezing_order(int K, const std::vector<double>& xi_grid, int N_max);

/// Polar samples (phi, S) over [0, 2pi) for the fan state (K, xi).
std::vector<std::pair<double, double>> flower_profile(int K, int N, double xi, int grid,
                                                      SqueezeRoute route = SqueezeRoute::reference,
                                                      const CutoffPolicy& cutoff = {});

/// Same profile for an arbitrary prepared state (numeric path).
std::vector<std::pair<double, double>> flower_profile(const FockVector& v, int N, int grid);

/// Full landmark search for one (K, N): critical and optimal amplitudes plus
/// the direction sets at the optimum. Throws NotFound when (K, N) shows no
/// squeezing (e.g. N < 2K).
CriticalReport critical_report(int K, int N, SqueezeRoute route = SqueezeRoute::reference,
                               std::pair<double, double> bracket = {0.01, 2.0});

}  // namespace fansq
