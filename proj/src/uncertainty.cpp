#include "fansq/uncertainty.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "fansq/errors.hpp"
#include "fansq/squeezing.hpp"

namespace fansq {

namespace {

constexpr double kPi = std::numbers::pi;

double fact(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

void check_even_order(int N, const char* who) {
    if (N < 2 || N % 2 != 0) throw InvalidSpec(std::string(who) + ": N must be even, >= 2");
}

// gcd of the support index differences; 0 when the support has at most one
// point. Fixes the phi period of every quadrature moment of v.
int support_gcd(const FockVector& v) {
    int first = -1;
    int g = 0;
    for (int n = 0; n <= v.n_max; ++n) {
        if (std::abs(v.amps[n]) == 0.0) continue;
        if (first < 0) {
            first = n;
        } else {
            g = std::gcd(g, n - first);
        }
    }
    return g;
}

}  // namespace

double x_moment(const FockVector& v, int N) {
    check_even_order(N, "x_moment");
    double sum = 0.0;
    for (int m = 1; m <= N / 2; ++m) {
        const double mom = normally_ordered_moment(v, m, m).real();
        sum += std::pow(2.0, m) * mom / (fact(m) * fact(m) * fact(N / 2 - m));
    }
    return fact(N) / std::pow(2.0, N) * sum;
}

double y_moment(const FockVector& v, int N, int K, int p) {
    check_even_order(N, "y_moment");
    if (K < 1 || p < 1) throw InvalidSpec("y_moment: K >= 1, p >= 1");
    Complex sum(0.0, 0.0);
    for (int m = 0; m <= N / 2 - p * K; ++m) {
        const Complex mom = normally_ordered_moment(v, m, m + 2 * p * K);
        sum += std::pow(2.0, m) / (fact(m) * fact(m + 2 * p * K) * fact(N / 2 - m - p * K)) * mom;
    }
    const Complex y = std::pow(2.0, p * K) * fact(N) / std::pow(2.0, N - 1) * sum;
    if (std::abs(y.imag()) > 1e-8 * std::abs(y)) {
        throw ImaginaryResidue("y_moment: |Im| = " + std::to_string(y.imag()) +
                               " exceeds 1e-8 of |value|");
    }
    return y.real();
}

double area_analytic(const FockVector& v, int K, int N) {
    check_even_order(N, "area_analytic");
    if (K < 1) throw InvalidSpec("area_analytic: K >= 1");
    const double r = r_const(N);
    const double x = x_moment(v, N);
    double ysq = 0.0;
    for (int p = 1; p <= N / (2 * K); ++p) {
        const double y = y_moment(v, N, K, p);
        ysq += y * y;
    }
    return kPi * (r * r + (2.0 * r + x) * x + 0.5 * ysq);
}

double area_numeric(const FockVector& v, int N, int grid) {
    check_even_order(N, "area_numeric");
    if (grid < 64) throw InvalidSpec("area_numeric: grid >= 64");
    const int g = support_gcd(v);
    const double period = (g >= 1) ? 2.0 * kPi / g : 2.0 * kPi;
    // trapezoid = rectangle rule on a periodic integrand; exact for trig
    // polynomials of degree < grid
    double acc = 0.0;
    for (int i = 0; i < grid; ++i) {
        const double phi = period * i / grid;
        const double m = central_quadrature_moment(v, phi, N);
        acc += m * m;
    }
    return 0.5 * (acc / grid) * 2.0 * kPi;
}

AreaReport area_report(const FockVector& v, int K, int N, double xi_abs, int grid) {
    AreaReport rep;
    rep.K = K;
    rep.N = N;
    rep.xi_abs = xi_abs;
    rep.area_analytic = area_analytic(v, K, N);
    rep.area_numeric = area_numeric(v, N, grid);
    const double r = r_const(N);
    rep.circle_area = kPi * r * r;
    return rep;
}

}  // namespace fansq
