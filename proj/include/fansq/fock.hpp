#pragma once

#include <complex>
#include <map>
#include <utility>
#include <vector>

namespace fansq {

using Complex = std::complex<double>;

/// State vector over the truncated Fock basis |0>..|n_max>.
/// amps[n] is the coefficient of |n>; the array length is exactly n_max + 1.
/// When `normalized` is set, | sum |amps[n]|^2 - 1 | <= 1e-12 holds.
struct FockVector {
    int n_max = 0;
    std::vector<Complex> amps{Complex(1.0, 0.0)};
    bool normalized = true;

    static FockVector zeros(int n_max);
    /// |n> embedded in an array of size n_max + 1 (n_max >= n).
    static FockVector basis(int n, int n_max);

    double norm() const;
};

/// Rescale to unit norm; direction (ray) unchanged. Throws ZeroVector when
/// the norm underflows.
FockVector normalize(const FockVector& v);

/// <u|v> = sum conj(u_n) v_n. Vectors of different length are compared as if
/// the shorter were zero-padded.
Complex inner(const FockVector& u, const FockVector& v);

/// <a^+p a^q> by direct summation over the Fock basis, factorial ratios in
/// log space. Expects a normalized state. Throws CutoffTooSmall when the
/// support of v runs into the top of the array and the extrapolated
/// truncation tail exceeds 1e-10 of the result magnitude.
Complex normally_ordered_moment(const FockVector& v, int p, int q);

/// X_phi v with X_phi = (a e^{-i phi} + a^+ e^{i phi}) / sqrt(2).
/// The output grows by one level, so repeated application never truncates.
FockVector apply_quadrature(const FockVector& v, double phi);

/// <X_phi> as a real number (imaginary residue checked against 1e-8).
double quadrature_mean(const FockVector& v, double phi);

/// <(X_phi - <X_phi>)^N> for even N >= 2, computed by N applications of the
/// shifted quadrature operator followed by an inner product. Throws
/// CutoffTooSmall when the top-N levels of v carry probability mass above
/// 1e-9 (headroom rule), and NonHermitianResult if |Im| > 1e-8.
double central_quadrature_moment(const FockVector& v, double phi, int N);

/// P(n) = |amps[n]|^2.
std::vector<double> number_distribution(const FockVector& v);

/// Cache of <a^+p a^q> for p + q <= max_order. entry(p, q) is computed once
/// for p >= q and mirrored by conjugation, so Hermiticity holds exactly.
class MomentTable {
public:
    static MomentTable compute(const FockVector& v, int max_order);

    int max_order() const { return max_order_; }
    Complex entry(int p, int q) const;

private:
    int max_order_ = 0;
    std::map<std::pair<int, int>, Complex> entries_;
};

}  // namespace fansq
