#pragma once

#include "fansq/fock.hpp"

namespace fansq {

struct AreaReport {
    int K = 0;
    int N = 0;
    double xi_abs = 0.0;
    double area_analytic = 0.0;
    double area_numeric = 0.0;
    double circle_area = 0.0;  // pi * r_const(N)^2
};

/// X_N = (N!/2^N) sum_{m=1}^{N/2} 2^m <a^+m a^m> / ((m!)^2 (N/2-m)!).
/// Strictly positive for any state with excitation.
double x_moment(const FockVector& v, int N);

/// Y_N(p) = (2^{pK} N!/2^{N-1}) sum_{m=0}^{N/2-pK}
///              2^m <a^+m a^{m+2pK}> / (m!(m+2pK)!(N/2-m-pK)!).
/// Real for real-xi fan states; throws ImaginaryResidue when the
/// off-diagonal moments carry |Im| > 1e-8 * |value|. An empty m-range
/// (N < 2pK) yields 0.
double y_moment(const FockVector& v, int N, int K, int p);

/// Uncertainty area of a fan state over all directions,
///   (1/2) Int_0^{2pi} dphi <(dX_phi)^N>^2
/// evaluated through its harmonic decomposition:
///   pi { R_N^2 + (2 R_N + X_N) X_N + (1/2) sum_p Y_N(p)^2 }.
/// Assumes fan support (the moments of v supply everything else).
double area_analytic(const FockVector& v, int K, int N);

/// The same integral by composite trapezoid on the periodic integrand.
/// The support lattice of v fixes the integrand period, so `grid` points
/// cover one period and the result is scaled to the full turn; the rule is
/// exact for trigonometric polynomials of degree below `grid`.
double area_numeric(const FockVector& v, int N, int grid);

AreaReport area_report(const FockVector& v, int K, int N, double xi_abs, int grid = 1024);

}  // namespace fansq
