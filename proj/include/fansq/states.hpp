#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "fansq/fock.hpp"
#include "fansq/nonlinear.hpp"

namespace fansq {

/// How a builder picks its truncation.
///
/// Adaptive (fixed unset): the support extends to the smallest lattice point
/// whose remaining tail probability is below tail_bound, then `headroom`
/// further levels are appended and populated with their true amplitudes.
/// The headroom must cover the highest moment order that will be applied to
/// the state (N applications of the quadrature operator spread support by N).
///
/// Explicit (fixed set): the array ends at exactly n_max = fixed; the builder
/// throws CutoffTooSmall if the discarded tail mass exceeds 1e-12.
struct CutoffPolicy {
    std::optional<int> fixed{};
    double tail_bound = 1e-12;
    int headroom = 12;

    static CutoffPolicy automatic(int headroom_levels = 12);
    static CutoffPolicy exact(int n_max);
};

/// Parameters of one KNCS / SEKNCS / fan build.
struct KncsSpec {
    Complex xi{0.0, 0.0};
    int K = 1;
    int j = 0;  // 0 <= j <= K-1; selects the Fock residue class n = j (mod K)
    NonlinearFn f = unit_nonlinearity();
    CutoffPolicy cutoff{};
};

/// Normalized state with amps[mK+j] proportional to
/// xi^{mK+j} / (sqrt((mK+j)!) f(mK+j)!) and zeros elsewhere.
/// xi = 0 yields the limit state |j>.
FockVector build_kncs(const KncsSpec& spec);

/// j = 0 state over an even-K lattice: both symmetric under the K-fold
/// rotation and even under xi -> -xi.
FockVector build_sekncs(Complex xi, int K, const NonlinearFn& f = unit_nonlinearity(),
                        const CutoffPolicy& cutoff = {});

/// Equal-weight superposition of the K rotated j=0 states at phases
/// xi exp(i pi q / K), built directly in Fock space: support only on
/// n = mK with m even, machine-exact zeros elsewhere.
/// Requires K even; odd K is rejected.
FockVector build_fan(Complex xi, int K, const NonlinearFn& f = unit_nonlinearity(),
                     const CutoffPolicy& cutoff = {});

/// Coherent state |alpha> (K = 1, j = 0, f = 1).
FockVector build_coherent(Complex alpha, const CutoffPolicy& cutoff = {});

/// || a^K f(n) v - xi^K v || over the reliable region n <= n_max - K.
double eigen_residual(const FockVector& v, const KncsSpec& spec);

/// The K pairs (weight_l, single-quantum state at chi_l = xi exp(2 pi i l/K))
/// whose weighted sum reconstructs build_kncs(spec);
/// weight_l = (1/K) (C_Kj / C_10) exp(-2 pi i j l / K).
std::vector<std::pair<Complex, FockVector>> decompose_kncs(const KncsSpec& spec);

/// amps[n] <- exp(2 pi i m n / K) amps[n]. The phase is reduced modulo K
/// before evaluation, so lattice states with n = 0 (mod K) are untouched
/// bit for bit.
FockVector rotate(const FockVector& v, int m, int K);

/// sum_{l=0}^{L-1} exp(2 pi i q l / L); equals L when q = 0 (mod L), else 0.
Complex roots_of_unity_sum(int L, int q);

/// sum_{q=0}^{K-1} exp(i pi q m); K for even m, 0 for odd m (K even).
Complex j_sum(int K, int m);

enum class GeometryMode {
    chi,  // the K points xi exp(2 pi i l / K)
    xiq,  // the K points xi exp(i pi q / K): half-turn fan
};

std::vector<Complex> geometry_points(Complex xi, int K, GeometryMode mode);

}  // namespace fansq
