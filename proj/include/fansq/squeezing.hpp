#pragma once

#include <vector>

#include "fansq/fock.hpp"
#include "fansq/nonlinear.hpp"
#include "fansq/states.hpp"

namespace fansq {

/// One point of a squeezing scan.
struct SqueezeSample {
    int K = 0;
    int N = 0;
    double phi = 0.0;
    double xi_abs = 0.0;
    double S = 0.0;
    enum class Source { analytic, numeric } source = Source::numeric;
};

/// (N-1)!! / 2^{N/2}: the coherent-state value of <(dX)^N>. Even N >= 2.
double r_const(int N);

/// S_{phi,N} = <(dX_phi)^N> - r_const(N). Negative certifies Nth-order
/// squeezing of the amplitude component along phi.
double squeeze_numeric(const FockVector& v, double phi, int N);

/// Closed forms exist for (K,N) in {(2,2),(2,4),(2,6),(4,2),(4,4),(4,6),(4,8)},
/// f = 1, real xi >= 0.
///
/// `verified`  - coefficient sets validated against the moment engine to
///               better than 1e-12 over xi <= 1.2.
/// `reference` - identical except the (4,8) form, which keeps a legacy 622
///               where the verified coefficient is 630. The reference
///               landmark digits for (4,8) - critical amplitude 0.823267,
///               optimum 0.754939 - are roots of this variant; the verified
///               form puts them at 0.823026 / 0.754718.
enum class ClosedForm { verified, reference };

bool analytic_supported(int K, int N);

/// Evaluate the closed form; throws UnsupportedPair outside the table.
double squeeze_analytic(int K, int N, double xi, double phi,
                        ClosedForm form = ClosedForm::verified);

/// The 4th-order squeezing condition for K = 2 reads cos(4 phi) < g(|xi|).
/// g(0) = 0 (series limit, returned directly for xi^2 < 1e-6) and
/// g -> -3 as xi -> infinity.
double g_function(double xi);

/// Uniform phi grid over [0, 2 pi) on the fan state (K, xi, f): a numeric
/// sample at every grid point, plus an analytic sample when (K, N) has a
/// closed form and f is the unit nonlinearity, so the two sources can be
/// diffed row by row.
std::vector<SqueezeSample> squeeze_scan(int K, int N, double xi, int phi_grid,
                                        const NonlinearFn& f = unit_nonlinearity());

}  // namespace fansq
