#include "fansq/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fansq/errors.hpp"

namespace fansq {

namespace {

constexpr double kPi = std::numbers::pi;

double lg(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

void check_factor(double val, int arg) {
    if (!std::isfinite(val)) {
        throw InvalidSpec("nonlinearity returned a non-finite value at n = " + std::to_string(arg));
    }
    if (!(std::abs(val) > 0.0)) {
        throw ZeroFactorValue("nonlinearity vanishes at n = " + std::to_string(arg));
    }
}

// Unnormalized lattice amplitudes as log-magnitude plus sign, in increasing
// Fock index. Generation stops once the term probabilities have fallen 95
// log-units below their running peak and are decreasing.
struct TermSeq {
    std::vector<int> n;
    std::vector<double> logm;
    std::vector<int> sign;
};

constexpr double kDecayLog = 95.0;
constexpr int kMaxLatticeIndex = 2'000'000;

bool converged(const TermSeq& t) {
    const std::size_t k = t.n.size();
    if (k < 6) return false;
    double peak = -std::numeric_limits<double>::infinity();
    for (double v : t.logm) peak = std::max(peak, v);
    return t.logm[k - 1] < peak - kDecayLog && t.logm[k - 1] < t.logm[k - 2];
}

TermSeq kncs_terms(double log_abs_xi, int K, int j, const NonlinearFn& f) {
    TermSeq t;
    double ff_log = 0.0;
    int ff_sign = 1;
    for (int m = 0;; ++m) {
        const int n = m * K + j;
        if (n > kMaxLatticeIndex) {
            throw CutoffTooSmall("state amplitude series did not converge below n = " +
                                 std::to_string(kMaxLatticeIndex));
        }
        if (m >= 1) {
            // one factor per K-quantum step; this is what makes the state an
            // exact a^K f(n) eigenvector
            const double v = f.eval(n);
            check_factor(v, n);
            ff_log += std::log(std::abs(v));
            if (v < 0.0) ff_sign = -ff_sign;
        }
        t.n.push_back(n);
        t.logm.push_back(n * log_abs_xi - 0.5 * lg(n) - ff_log);
        t.sign.push_back(ff_sign);
        if (converged(t)) break;
    }
    return t;
}

TermSeq fan_terms(double log_abs_xi, int K, const NonlinearFn& f) {
    TermSeq t;
    double ff_log = 0.0;
    int ff_sign = 1;
    for (int m = 0;; ++m) {
        const int n = m * K;
        if (n > kMaxLatticeIndex) {
            throw CutoffTooSmall("fan amplitude series did not converge below n = " +
                                 std::to_string(kMaxLatticeIndex));
        }
        if (m >= 1) {
            const double v = f.eval(n);
            check_factor(v, n);
            ff_log += std::log(std::abs(v));
            if (v < 0.0) ff_sign = -ff_sign;
        }
        if (m % 2 == 0) {  // odd-m components cancel in the fan superposition
            t.n.push_back(n);
            t.logm.push_back(n * log_abs_xi - 0.5 * lg(n) - ff_log);
            t.sign.push_back(ff_sign);
        }
        if (converged(t)) break;
    }
    return t;
}

double log_norm_sum(const TermSeq& t) {
    double peak = -std::numeric_limits<double>::infinity();
    for (double v : t.logm) peak = std::max(peak, v);
    double s = 0.0;
    for (double v : t.logm) s += std::exp(2.0 * (v - peak));
    return 2.0 * peak + std::log(s);
}

FockVector assemble(const TermSeq& t, double arg_xi, const CutoffPolicy& pol) {
    if (pol.headroom < 0) throw InvalidSpec("cutoff headroom must be nonnegative");
    double peak = -std::numeric_limits<double>::infinity();
    for (double v : t.logm) peak = std::max(peak, v);
    std::vector<double> w(t.n.size());
    double total = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = std::exp(2.0 * (t.logm[i] - peak));
        total += w[i];
    }

    int n_max;
    if (pol.fixed) {
        n_max = *pol.fixed;
        if (n_max < 0) throw InvalidSpec("explicit cutoff must be nonnegative");
        double tail = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (t.n[i] > n_max) tail += w[i];
        }
        if (tail > 1e-12 * total) {
            throw CutoffTooSmall("explicit cutoff n_max = " + std::to_string(n_max) +
                                 " leaves tail mass " + std::to_string(tail / total));
        }
    } else {
        // smallest lattice point with the remaining tail below tail_bound,
        // plus headroom
        double tail_beyond = 0.0;
        std::size_t cut = w.size() - 1;
        for (std::size_t i = w.size(); i-- > 0;) {
            if (tail_beyond <= pol.tail_bound * total) {
                cut = i;
            } else {
                break;
            }
            tail_beyond += w[i];
        }
        n_max = t.n[cut] + pol.headroom;
    }

    FockVector out = FockVector::zeros(n_max);
    bool any = false;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (t.n[i] > n_max) break;
        out.amps[t.n[i]] =
            static_cast<double>(t.sign[i]) * std::exp(t.logm[i] - peak) *
            std::polar(1.0, arg_xi * t.n[i]);
        any = true;
    }
    if (!any) throw CutoffTooSmall("cutoff lies below the first lattice point");
    return normalize(out);
}

void validate_kncs(const KncsSpec& spec) {
    if (spec.K < 1) throw InvalidSpec("K must be a positive integer");
    if (spec.j < 0 || spec.j >= spec.K) throw InvalidSpec("j must lie in [0, K-1]");
    if (!spec.f.eval) throw InvalidSpec("nonlinearity has no callable");
}

void validate_even_k(int K, const char* who) {
    if (K < 2 || K % 2 != 0) {
        throw InvalidSpec(std::string(who) + ": K must be even and >= 2");
    }
}

}  // namespace

CutoffPolicy CutoffPolicy::automatic(int headroom_levels) {
    CutoffPolicy p;
    p.headroom = headroom_levels;
    return p;
}

CutoffPolicy CutoffPolicy::exact(int n_max) {
    CutoffPolicy p;
    p.fixed = n_max;
    return p;
}

NonlinearFn unit_nonlinearity() {
    return NonlinearFn{[](int) { return 1.0; }, "unit"};
}

NonlinearFn inv_sqrt_nonlinearity() {
    return NonlinearFn{[](int n) { return 1.0 / std::sqrt(static_cast<double>(n) + 1.0); },
                       "inv-sqrt"};
}

std::optional<NonlinearFn> named_nonlinearity(std::string_view name) {
    if (name == "unit") return unit_nonlinearity();
    if (name == "inv-sqrt") return inv_sqrt_nonlinearity();
    return std::nullopt;
}

double LogSigned::value() const {
    if (sign == 0) return 0.0;
    return static_cast<double>(sign) * std::exp(log_mag);
}

LogSigned LogSigned::one() { return LogSigned{0.0, 1}; }

LogSigned f_factorial(const NonlinearFn& f, int n, int K, int j) {
    if (n < 0) throw InvalidSpec("f_factorial: n >= 0");
    LogSigned acc = LogSigned::one();
    for (int q = 1; q <= n; ++q) {
        const double v = f.eval(q * K + j);
        check_factor(v, q * K + j);
        acc.log_mag += std::log(std::abs(v));
        if (v < 0.0) acc.sign = -acc.sign;
    }
    return acc;
}

FockVector build_kncs(const KncsSpec& spec) {
    validate_kncs(spec);
    const double mag = std::abs(spec.xi);
    if (mag == 0.0) {
        // limit state |j>
        const int n_max = spec.cutoff.fixed ? *spec.cutoff.fixed : spec.j + spec.cutoff.headroom;
        if (n_max < spec.j) throw CutoffTooSmall("cutoff lies below the first lattice point");
        return FockVector::basis(spec.j, n_max);
    }
    const TermSeq t = kncs_terms(std::log(mag), spec.K, spec.j, spec.f);
    return assemble(t, std::arg(spec.xi), spec.cutoff);
}

FockVector build_sekncs(Complex xi, int K, const NonlinearFn& f, const CutoffPolicy& cutoff) {
    validate_even_k(K, "build_sekncs");
    KncsSpec spec;
    spec.xi = xi;
    spec.K = K;
    spec.j = 0;
    spec.f = f;
    spec.cutoff = cutoff;
    return build_kncs(spec);
}

FockVector build_fan(Complex xi, int K, const NonlinearFn& f, const CutoffPolicy& cutoff) {
    validate_even_k(K, "build_fan");
    if (!f.eval) throw InvalidSpec("nonlinearity has no callable");
    const double mag = std::abs(xi);
    if (mag == 0.0) {
        const int n_max = cutoff.fixed ? *cutoff.fixed : cutoff.headroom;
        return FockVector::basis(0, n_max);
    }
    const TermSeq t = fan_terms(std::log(mag), K, f);
    return assemble(t, std::arg(xi), cutoff);
}

FockVector build_coherent(Complex alpha, const CutoffPolicy& cutoff) {
    KncsSpec spec;
    spec.xi = alpha;
    spec.K = 1;
    spec.j = 0;
    spec.cutoff = cutoff;
    return build_kncs(spec);
}

double eigen_residual(const FockVector& v, const KncsSpec& spec) {
    validate_kncs(spec);
    const Complex lam = std::pow(spec.xi, spec.K);
    double s = 0.0;
    for (int n = 0; n + spec.K <= v.n_max; ++n) {
        const double ladder = std::exp(0.5 * (lg(n + spec.K) - lg(n)));
        const Complex w =
            ladder * spec.f.eval(n + spec.K) * v.amps[n + spec.K] - lam * v.amps[n];
        s += std::norm(w);
    }
    return std::sqrt(s);
}

std::vector<std::pair<Complex, FockVector>> decompose_kncs(const KncsSpec& spec) {
    validate_kncs(spec);
    const double mag = std::abs(spec.xi);
    if (mag == 0.0) throw InvalidSpec("decompose_kncs: xi = 0 has a degenerate decomposition");

    const double log_s_kj = log_norm_sum(kncs_terms(std::log(mag), spec.K, spec.j, spec.f));
    const double log_s_10 = log_norm_sum(kncs_terms(std::log(mag), 1, 0, spec.f));
    // C_Kj / C_10 = sqrt(S_10 / S_Kj)
    const double ratio = std::exp(0.5 * (log_s_10 - log_s_kj));

    std::vector<std::pair<Complex, FockVector>> out;
    out.reserve(static_cast<std::size_t>(spec.K));
    for (int l = 0; l < spec.K; ++l) {
        const Complex weight =
            ratio / static_cast<double>(spec.K) *
            std::polar(1.0, -2.0 * kPi * spec.j * l / spec.K);
        KncsSpec ncs;
        ncs.xi = spec.xi * std::polar(1.0, 2.0 * kPi * l / spec.K);
        ncs.K = 1;
        ncs.j = 0;
        ncs.f = spec.f;
        ncs.cutoff = spec.cutoff;
        out.emplace_back(weight, build_kncs(ncs));
    }
    return out;
}

FockVector rotate(const FockVector& v, int m, int K) {
    if (K < 1) throw InvalidSpec("rotate: K >= 1");
    FockVector out = v;
    for (int n = 0; n <= v.n_max; ++n) {
        // exact phase reduction: lattice states with m*n = 0 (mod K) stay
        // bit-identical
        const long long r = ((static_cast<long long>(m) * n) % K + K) % K;
        if (r != 0) out.amps[n] *= std::polar(1.0, 2.0 * kPi * static_cast<double>(r) / K);
    }
    return out;
}

Complex roots_of_unity_sum(int L, int q) {
    if (L < 1) throw InvalidSpec("roots_of_unity_sum: L >= 1");
    Complex s(0.0, 0.0);
    for (int l = 0; l < L; ++l) {
        const long long r = ((static_cast<long long>(q) * l) % L + L) % L;
        s += std::polar(1.0, 2.0 * kPi * static_cast<double>(r) / L);
    }
    return s;
}

Complex j_sum(int K, int m) {
    Complex s(0.0, 0.0);
    for (int q = 0; q < K; ++q) {
        const long long r = ((static_cast<long long>(q) * m) % 2 + 2) % 2;
        s += std::polar(1.0, kPi * static_cast<double>(r));
    }
    return s;
}

std::vector<Complex> geometry_points(Complex xi, int K, GeometryMode mode) {
    if (K < 1) throw InvalidSpec("geometry_points: K >= 1");
    std::vector<Complex> pts;
    pts.reserve(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        const double angle = (mode == GeometryMode::chi) ? 2.0 * kPi * k / K : kPi * k / K;
        pts.push_back(xi * std::polar(1.0, angle));
    }
    return pts;
}

}  // namespace fansq
