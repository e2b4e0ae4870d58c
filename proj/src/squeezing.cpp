#include "fansq/squeezing.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fansq/errors.hpp"

namespace fansq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

// cosh/sinh overflow near x = 710; above this the forms switch to an
// exp(-x)-scaled evaluation
constexpr double kScaleThreshold = 700.0;

// The K = 2 forms use three combinations, each already divided by
// D2 = cosh(x) + cos(x).
struct K2Ratios {
    double shm;  // (sinh x - sin x) / D2
    double shp;  // (sinh x + sin x) / D2
    double chm;  // (cosh x - cos x) / D2
};

K2Ratios k2_ratios(double x) {
    if (x <= kScaleThreshold) {
        const double d = std::cosh(x) + std::cos(x);
        return {(std::sinh(x) - std::sin(x)) / d, (std::sinh(x) + std::sin(x)) / d,
                (std::cosh(x) - std::cos(x)) / d};
    }
    // everything times exp(-x)
    const double e2 = std::exp(-2.0 * x);
    const double em = std::exp(-x);
    const double sh = 0.5 * (1.0 - e2);
    const double ch = 0.5 * (1.0 + e2);
    const double sn = std::sin(x) * em;
    const double cs = std::cos(x) * em;
    const double d = ch + cs;
    return {(sh - sn) / d, (sh + sn) / d, (ch - cs) / d};
}

// The K = 4 forms use four groups over D4 = cosh x + cos x + 2 cos u cosh u,
// u = x / sqrt(2).
struct K4Ratios {
    double g1;  // sinh x - sin x + sqrt2 (sinh u cos u - sin u cosh u)
    double g2;  // cosh x - cos x - 2 sinh u sin u
    double g3;  // sinh x + sin x - sqrt2 (sinh u cos u + sin u cosh u)
    double g4;  // cosh x + cos x - 2 cosh u cos u
};

K4Ratios k4_ratios(double x) {
    const double u = x / kSqrt2;
    const double su = std::sin(u);
    const double cu = std::cos(u);
    if (x <= kScaleThreshold) {
        const double sh = std::sinh(x), ch = std::cosh(x);
        const double sn = std::sin(x), cs = std::cos(x);
        const double shu = std::sinh(u), chu = std::cosh(u);
        const double d = ch + cs + 2.0 * cu * chu;
        return {(sh - sn + kSqrt2 * (shu * cu - su * chu)) / d,
                (ch - cs - 2.0 * shu * su) / d,
                (sh + sn - kSqrt2 * (shu * cu + su * chu)) / d,
                (ch + cs - 2.0 * chu * cu) / d};
    }
    const double e2 = std::exp(-2.0 * x);
    const double em = std::exp(-x);
    const double sh = 0.5 * (1.0 - e2), ch = 0.5 * (1.0 + e2);
    const double sn = std::sin(x) * em, cs = std::cos(x) * em;
    const double shu = 0.5 * (std::exp(u - x) - std::exp(-u - x));
    const double chu = 0.5 * (std::exp(u - x) + std::exp(-u - x));
    const double d = ch + cs + 2.0 * cu * chu;
    return {(sh - sn + kSqrt2 * (shu * cu - su * chu)) / d,
            (ch - cs - 2.0 * shu * su) / d,
            (sh + sn - kSqrt2 * (shu * cu + su * chu)) / d,
            (ch + cs - 2.0 * chu * cu) / d};
}

double s48(double x, double phi, double c622) {
    const K4Ratios r = k4_ratios(x);
    return x / 8.0 *
           (x * x * x * std::cos(8.0 * phi) + 35.0 * x * x * x * r.g4 + 280.0 * x * x * r.g3 +
            c622 * x * r.g2 + 420.0 * r.g1);
}

}  // namespace

double r_const(int N) {
    if (N < 2 || N % 2 != 0) throw InvalidSpec("r_const: N must be even, >= 2");
    double dfac = 1.0;
    for (int k = N - 1; k > 1; k -= 2) dfac *= k;
    return dfac / std::pow(2.0, N / 2.0);
}

double squeeze_numeric(const FockVector& v, double phi, int N) {
    return central_quadrature_moment(v, phi, N) - r_const(N);
}

bool analytic_supported(int K, int N) {
    if (K == 2) return N == 2 || N == 4 || N == 6;
    if (K == 4) return N == 2 || N == 4 || N == 6 || N == 8;
    return false;
}

double squeeze_analytic(int K, int N, double xi, double phi, ClosedForm form) {
    if (!analytic_supported(K, N)) {
        throw UnsupportedPair("no closed form for (K, N) = (" + std::to_string(K) + ", " +
                              std::to_string(N) + ")");
    }
    if (xi < 0.0) throw InvalidSpec("squeeze_analytic: xi >= 0");
    const double x = xi * xi;

    if (K == 2) {
        const K2Ratios r = k2_ratios(x);
        switch (N) {
            case 2:
                return x * r.shm;
            case 4:
                return x / 2.0 * (x * std::cos(4.0 * phi) + 3.0 * (x * r.chm + 2.0 * r.shm));
            case 6:
                return x / 2.0 *
                       (x * (7.5 + 3.0 * x * r.shm) * std::cos(4.0 * phi) +
                        0.5 * (10.0 * x * x * r.shp + 45.0 * x * r.chm + 45.0 * r.shm));
            default:
                break;
        }
    }
    const K4Ratios r = k4_ratios(x);
    switch (N) {
        case 2:
            return x * r.g1;
        case 4:
            return 3.0 * x / 2.0 * (x * r.g2 + 2.0 * r.g1);
        case 6:
            return 5.0 * x / 4.0 * (2.0 * x * x * r.g3 + 9.0 * x * r.g2 + 9.0 * r.g1);
        case 8:
            return s48(x, phi, form == ClosedForm::verified ? 630.0 : 622.0);
        default:
            break;
    }
    throw UnsupportedPair("unreachable");
}

double g_function(double xi) {
    const double x = xi * xi;
    if (x < 1e-6) return 0.0;  // series limit: numerator ~ -5 x^3, so g ~ -(5/2) x^2
    if (x <= kScaleThreshold) {
        return 3.0 * (x * (std::cos(x) - std::cosh(x)) + 2.0 * (std::sin(x) - std::sinh(x))) /
               (x * (std::cosh(x) + std::cos(x)));
    }
    const double e2 = std::exp(-2.0 * x);
    const double em = std::exp(-x);
    const double sh = 0.5 * (1.0 - e2), ch = 0.5 * (1.0 + e2);
    const double sn = std::sin(x) * em, cs = std::cos(x) * em;
    return 3.0 * (x * (cs - ch) + 2.0 * (sn - sh)) / (x * (ch + cs));
}

std::vector<SqueezeSample> squeeze_scan(int K, int N, double xi, int phi_grid,
                                        const NonlinearFn& f) {
    if (phi_grid < 8) throw InvalidSpec("squeeze_scan: phi_grid >= 8");
    if (N < 2 || N % 2 != 0) throw InvalidSpec("squeeze_scan: N must be even, >= 2");
    if (xi < 0.0) throw InvalidSpec("squeeze_scan: xi >= 0");

    CutoffPolicy pol;
    pol.headroom = std::max(pol.headroom, N + 4);
    const FockVector fan = build_fan(xi, K, f, pol);
    const bool with_analytic = analytic_supported(K, N) && f.label == "unit";

    std::vector<SqueezeSample> out;
    out.reserve(static_cast<std::size_t>(phi_grid) * (with_analytic ? 2 : 1));
    for (int i = 0; i < phi_grid; ++i) {
        const double phi = 2.0 * kPi * i / phi_grid;
        out.push_back({K, N, phi, xi, squeeze_numeric(fan, phi, N), SqueezeSample::Source::numeric});
        if (with_analytic) {
            out.push_back(
                {K, N, phi, xi, squeeze_analytic(K, N, xi, phi), SqueezeSample::Source::analytic});
        }
    }
    return out;
}

}  // namespace fansq
