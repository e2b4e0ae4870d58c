#include "fansq/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "fansq/errors.hpp"

namespace fansq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kXiTol = 1e-7;
constexpr double kSqueezeThreshold = -1e-9;  // distinguishes squeezing from roundoff

CutoffPolicy with_moment_headroom(const CutoffPolicy& pol, int N) {
    CutoffPolicy p = pol;
    if (!p.fixed) p.headroom = std::max(p.headroom, N + 4);
    return p;
}

// S(phi, xi) on the fan state (K, xi), through the closed form the route
// selects or through the truncated-Fock moment engine.
double s_eval(int K, int N, double xi, double phi, SqueezeRoute route, const CutoffPolicy& pol) {
    if (route != SqueezeRoute::moments && analytic_supported(K, N)) {
        const ClosedForm form = (route == SqueezeRoute::reference) ? ClosedForm::reference
                                                                   : ClosedForm::verified;
        return squeeze_analytic(K, N, xi, phi, form);
    }
    const FockVector fan = build_fan(xi, K, unit_nonlinearity(), with_moment_headroom(pol, N));
    return squeeze_numeric(fan, phi, N);
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol,
              const char* who) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0)) {
        throw NoSignChange(std::string(who) + ": no sign change over [" + std::to_string(lo) +
                           ", " + std::to_string(hi) + "]");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double golden_min(const std::function<double(double)>& f, double lo, double hi, double tol) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - gr * (hi - lo);
    double d = lo + gr * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    while (hi - lo > tol) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = f(d);
        }
    }
    return 0.5 * (lo + hi);
}

// Unimodality gate for golden section: a 64-point scan must not show more
// than one interior local minimum.
void check_unimodal(const std::function<double(double)>& f, double lo, double hi, const char* who) {
    constexpr int kScan = 64;
    std::vector<double> v(kScan + 1);
    for (int i = 0; i <= kScan; ++i) v[i] = f(lo + (hi - lo) * i / kScan);
    int minima = 0;
    for (int i = 1; i < kScan; ++i) {
        if (v[i] < v[i - 1] && v[i] < v[i + 1]) ++minima;
    }
    if (minima > 1) {
        throw NotUnimodal(std::string(who) + ": coarse scan found " + std::to_string(minima) +
                          " interior minima");
    }
}

struct Extrema {
    std::vector<double> minima;
    std::vector<double> maxima;
};

// Cyclic grid scan over [0, 2 pi) with parabolic refinement of each strict
// local extremum.
Extrema scan_extrema(const std::function<double(double)>& f, int grid) {
    const double h = 2.0 * kPi / grid;
    std::vector<double> v(grid);
    for (int i = 0; i < grid; ++i) v[i] = f(i * h);
    Extrema out;
    for (int i = 0; i < grid; ++i) {
        const double prev = v[(i + grid - 1) % grid];
        const double next = v[(i + 1) % grid];
        // noise floor keeps roundoff on phi-independent profiles from
        // minting spurious extrema
        const double tol = 1e-10 + 1e-9 * std::abs(v[i]);
        const bool is_min = v[i] < prev - tol && v[i] < next - tol;
        const bool is_max = v[i] > prev + tol && v[i] > next + tol;
        if (!is_min && !is_max) continue;
        const double denom = prev - 2.0 * v[i] + next;
        double delta = 0.0;
        if (std::abs(denom) > 1e-300) {
            delta = 0.5 * (prev - next) / denom;
            delta = std::clamp(delta, -0.5, 0.5);
        }
        double phi = i * h + delta * h;
        phi = std::fmod(phi + 2.0 * kPi, 2.0 * kPi);
        (is_min ? out.minima : out.maxima).push_back(phi);
    }
    std::sort(out.minima.begin(), out.minima.end());
    std::sort(out.maxima.begin(), out.maxima.end());
    return out;
}

void check_kn(int K, int N, const char* who) {
    if (K < 2 || K % 2 != 0) throw InvalidSpec(std::string(who) + ": K must be even, >= 2");
    if (N < 2 || N % 2 != 0) throw InvalidSpec(std::string(who) + ": N must be even, >= 2");
}

}  // namespace

double critical_xi_from_g(std::pair<double, double> bracket) {
    return bisect([](double xi) { return g_function(xi) + 1.0; }, bracket.first, bracket.second,
                  kXiTol, "critical_xi_from_g");
}

double find_critical_xi(int K, int N, std::pair<double, double> bracket, SqueezeRoute route,
                        const CutoffPolicy& cutoff) {
    check_kn(K, N, "find_critical_xi");
    const double phi_sq = kPi / (2 * K);
    return bisect([&](double xi) { return s_eval(K, N, xi, phi_sq, route, cutoff); },
                  bracket.first, bracket.second, kXiTol, "find_critical_xi");
}

std::pair<double, double> find_optimal_xi(int K, int N, std::pair<double, double> bracket,
                                          SqueezeRoute route, const CutoffPolicy& cutoff) {
    check_kn(K, N, "find_optimal_xi");
    const double phi_sq = kPi / (2 * K);
    const auto f = [&](double xi) { return s_eval(K, N, xi, phi_sq, route, cutoff); };
    check_unimodal(f, bracket.first, bracket.second, "find_optimal_xi");
    const double xm = golden_min(f, bracket.first, bracket.second, kXiTol);
    return {xm, f(xm)};
}

std::pair<std::vector<double>, std::vector<double>> find_directions(int K, int N, double xi,
                                                                    int grid, SqueezeRoute route,
                                                                    const CutoffPolicy& cutoff) {
    check_kn(K, N, "find_directions");
    if (grid < 32 * K) throw InvalidSpec("find_directions: grid >= 32 K");
    Extrema ex;
    if (route != SqueezeRoute::moments && analytic_supported(K, N)) {
        const ClosedForm form = (route == SqueezeRoute::reference) ? ClosedForm::reference
                                                                   : ClosedForm::verified;
        ex = scan_extrema([&](double p) { return squeeze_analytic(K, N, xi, p, form); }, grid);
    } else {
        const FockVector fan =
            build_fan(xi, K, unit_nonlinearity(), with_moment_headroom(cutoff, N));
        ex = scan_extrema([&](double p) { return squeeze_numeric(fan, p, N); }, grid);
    }
    return {std::move(ex.minima), std::move(ex.maxima)};
}

int min_squeezing_order(int K, const std::vector<double>& xi_grid, int N_max) {
    if (K < 2 || K % 2 != 0) throw InvalidSpec("min_squeezing_order: K must be even, >= 2");
    if (N_max < 2) throw InvalidSpec("min_squeezing_order: N_max >= 2");
    if (xi_grid.empty()) throw InvalidSpec("min_squeezing_order: empty xi grid");

    std::vector<FockVector> fans;
    fans.reserve(xi_grid.size());
    for (double xi : xi_grid) {
        fans.push_back(build_fan(xi, K, unit_nonlinearity(),
                                 CutoffPolicy::automatic(N_max + 4)));
    }
    // the phi grid spans one pi/K period and lands exactly on pi/(2K)
    constexpr int kPhiPoints = 8;
    for (int N = 2; N <= N_max; N += 2) {
        for (const auto& fan : fans) {
            for (int t = 0; t < kPhiPoints; ++t) {
                const double phi = t * kPi / (kPhiPoints * K);
                if (squeeze_numeric(fan, phi, N) < kSqueezeThreshold) return N;
            }
        }
    }
    throw NotFound("min_squeezing_order: no squeezing up to N_max = " + std::to_string(N_max));
}

std::vector<std::pair<double, double>> flower_profile(int K, int N, double xi, int grid,
                                                      SqueezeRoute route,
                                                      const CutoffPolicy& cutoff) {
    check_kn(K, N, "flower_profile");
    if (grid < 64) throw InvalidSpec("flower_profile: grid >= 64");
    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<std::size_t>(grid));
    if (route != SqueezeRoute::moments && analytic_supported(K, N)) {
        const ClosedForm form = (route == SqueezeRoute::reference) ? ClosedForm::reference
                                                                   : ClosedForm::verified;
        for (int i = 0; i < grid; ++i) {
            const double phi = 2.0 * kPi * i / grid;
            out.emplace_back(phi, squeeze_analytic(K, N, xi, phi, form));
        }
    } else {
        const FockVector fan =
            build_fan(xi, K, unit_nonlinearity(), with_moment_headroom(cutoff, N));
        for (int i = 0; i < grid; ++i) {
            const double phi = 2.0 * kPi * i / grid;
            out.emplace_back(phi, squeeze_numeric(fan, phi, N));
        }
    }
    return out;
}

std::vector<std::pair<double, double>> flower_profile(const FockVector& v, int N, int grid) {
    if (grid < 64) throw InvalidSpec("flower_profile: grid >= 64");
    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<std::size_t>(grid));
    for (int i = 0; i < grid; ++i) {
        const double phi = 2.0 * kPi * i / grid;
        out.emplace_back(phi, squeeze_numeric(v, phi, N));
    }
    return out;
}

CriticalReport critical_report(int K, int N, SqueezeRoute route,
                               std::pair<double, double> bracket) {
    check_kn(K, N, "critical_report");
    if (N < 2 * K) {
        throw NotFound("no squeezing for N < 2K (N_min = " + std::to_string(2 * K) + ")");
    }
    const CutoffPolicy pol{};
    const double phi_sq = kPi / (2 * K);
    const auto f = [&](double xi) { return s_eval(K, N, xi, phi_sq, route, pol); };

    // coarse scan for the squeezing interval
    constexpr int kScan = 200;
    int last_neg = -1;
    int first_pos_after = -1;
    for (int i = 1; i <= kScan; ++i) {
        const double xi = bracket.first + (bracket.second - bracket.first) * i / kScan;
        if (f(xi) < kSqueezeThreshold) {
            last_neg = i;
        } else if (last_neg >= 0) {
            first_pos_after = i;
            break;
        }
    }
    if (last_neg < 0) {
        throw NotFound("no squeezing interval found for (K, N) = (" + std::to_string(K) + ", " +
                       std::to_string(N) + ")");
    }
    const auto grid_xi = [&](int i) {
        return bracket.first + (bracket.second - bracket.first) * i / kScan;
    };
    const double root_lo = grid_xi(last_neg);
    const double root_hi = (first_pos_after > 0) ? grid_xi(first_pos_after) : bracket.second;

    CriticalReport rep;
    rep.K = K;
    rep.N = N;
    rep.route = route;
    rep.bracket_lo = bracket.first;
    rep.bracket_hi = bracket.second;
    rep.xi_tol = kXiTol;
    rep.xi_c = bisect(f, root_lo, root_hi, kXiTol, "critical_report");
    const auto opt = find_optimal_xi(K, N, {bracket.first, rep.xi_c}, route, pol);
    rep.xi_m = opt.first;
    rep.s_min = opt.second;
    const int grid = std::max(32 * K, 1024);
    auto dirs = find_directions(K, N, rep.xi_m, grid, route, pol);
    rep.directions_sq = std::move(dirs.first);
    rep.directions_st = std::move(dirs.second);
    if (route == SqueezeRoute::moments || !analytic_supported(K, N)) {
        rep.cutoff_used =
            build_fan(rep.xi_m, K, unit_nonlinearity(), with_moment_headroom(pol, N)).n_max;
    }
    return rep;
}

}  // namespace fansq
