#include "fansq/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "fansq/errors.hpp"

namespace fansq {

namespace {

// sqrt(n!/(n-q)!) * sqrt((n-q+p)!/(n-q)!) with the ratios in log space.
double ladder_weight(int n, int p, int q) {
    const double lg_nq = std::lgamma(static_cast<double>(n - q) + 1.0);
    return std::exp(0.5 * (std::lgamma(static_cast<double>(n) + 1.0) - lg_nq) +
                    0.5 * (std::lgamma(static_cast<double>(n - q + p) + 1.0) - lg_nq));
}

int last_nonzero_index(const FockVector& v) {
    for (int n = v.n_max; n >= 0; --n) {
        if (std::abs(v.amps[n]) > 0.0) return n;
    }
    return -1;
}

int support_count(const FockVector& v) {
    int c = 0;
    for (const auto& a : v.amps) {
        if (std::abs(a) > 0.0) ++c;
    }
    return c;
}

}  // namespace

FockVector FockVector::zeros(int n_max) {
    FockVector v;
    v.n_max = n_max;
    v.amps.assign(static_cast<std::size_t>(n_max) + 1, Complex(0.0, 0.0));
    v.normalized = false;
    return v;
}

FockVector FockVector::basis(int n, int n_max) {
    if (n < 0 || n > n_max) throw InvalidSpec("basis: need 0 <= n <= n_max");
    FockVector v = zeros(n_max);
    v.amps[n] = Complex(1.0, 0.0);
    v.normalized = true;
    return v;
}

double FockVector::norm() const {
    double s = 0.0;
    for (const auto& a : amps) s += std::norm(a);
    return std::sqrt(s);
}

FockVector normalize(const FockVector& v) {
    const double nrm = v.norm();
    if (!(nrm > 1e-150)) throw ZeroVector("normalize: vector norm underflows");
    FockVector out = v;
    for (auto& a : out.amps) a /= nrm;
    out.normalized = true;
    return out;
}

Complex inner(const FockVector& u, const FockVector& v) {
    const int top = std::min(u.n_max, v.n_max);
    Complex s(0.0, 0.0);
    for (int n = 0; n <= top; ++n) s += std::conj(u.amps[n]) * v.amps[n];
    return s;
}

Complex normally_ordered_moment(const FockVector& v, int p, int q) {
    if (p < 0 || q < 0) throw InvalidSpec("normally_ordered_moment: p, q >= 0");
    Complex total(0.0, 0.0);
    // The two largest nonzero term magnitudes, in index order, feed the
    // geometric tail estimate below.
    double t_prev = 0.0, t_last = 0.0;
    bool have_prev = false, have_last = false;
    for (int n = q; n <= v.n_max; ++n) {
        const int m = n - q + p;
        if (m > v.n_max) continue;
        const Complex term = std::conj(v.amps[m]) * v.amps[n] * ladder_weight(n, p, q);
        total += term;
        const double mag = std::abs(term);
        if (mag > 0.0) {
            t_prev = t_last;
            have_prev = have_last;
            t_last = mag;
            have_last = true;
        }
    }

    // Truncation guard: only relevant when the support reaches close enough
    // to the top of the array that the ladder could see past it. A decaying
    // term sequence is extrapolated geometrically; a sequence still growing
    // at the boundary is treated as unbounded.
    const int n_last = last_nonzero_index(v);
    if (n_last >= 0 && n_last + std::max(p, q) > v.n_max && have_prev) {
        double est;
        if (t_last < t_prev) {
            const double r = t_last / t_prev;
            est = t_last * r / (1.0 - r);
        } else {
            est = t_last * 1e6;
        }
        if (est > 1e-10 * std::abs(total) + 1e-280) {
            throw CutoffTooSmall("normally_ordered_moment: truncation tail of <a^+" +
                                 std::to_string(p) + " a^" + std::to_string(q) +
                                 "> above 1e-10 of the result");
        }
    }
    return total;
}

FockVector apply_quadrature(const FockVector& v, double phi) {
    FockVector out = FockVector::zeros(v.n_max + 1);
    const Complex down = std::polar(1.0 / std::sqrt(2.0), -phi);  // with a
    const Complex up = std::polar(1.0 / std::sqrt(2.0), phi);     // with a^+
    for (int n = 0; n <= out.n_max; ++n) {
        Complex s(0.0, 0.0);
        if (n + 1 <= v.n_max) s += down * std::sqrt(static_cast<double>(n + 1)) * v.amps[n + 1];
        if (n >= 1 && n - 1 <= v.n_max) s += up * std::sqrt(static_cast<double>(n)) * v.amps[n - 1];
        out.amps[n] = s;
    }
    out.normalized = false;
    return out;
}

double quadrature_mean(const FockVector& v, double phi) {
    const Complex m = inner(v, apply_quadrature(v, phi));
    if (std::abs(m.imag()) > 1e-8) {
        throw NonHermitianResult("quadrature_mean: |Im <X>| = " + std::to_string(m.imag()));
    }
    return m.real();
}

double central_quadrature_moment(const FockVector& v, double phi, int N) {
    if (N < 2 || N % 2 != 0) throw InvalidSpec("central_quadrature_moment: N must be even, >= 2");

    // Headroom rule: a truncated state whose support still carries weight in
    // the top N levels cannot absorb N ladder applications. Single basis
    // states are exact at any size and exempt.
    if (support_count(v) >= 2) {
        double top_mass = 0.0;
        for (int n = std::max(0, v.n_max - N + 1); n <= v.n_max; ++n) top_mass += std::norm(v.amps[n]);
        if (top_mass > 1e-9) {
            throw CutoffTooSmall("central_quadrature_moment: top-" + std::to_string(N) +
                                 " levels carry mass " + std::to_string(top_mass));
        }
    }

    const double mu = quadrature_mean(v, phi);
    FockVector w = v;
    for (int k = 0; k < N; ++k) {
        FockVector xw = apply_quadrature(w, phi);
        for (int n = 0; n <= w.n_max; ++n) xw.amps[n] -= mu * w.amps[n];
        w = std::move(xw);
    }
    const Complex m = inner(v, w);
    if (std::abs(m.imag()) > 1e-8) {
        throw NonHermitianResult("central_quadrature_moment: |Im| = " + std::to_string(m.imag()));
    }
    return m.real();
}

std::vector<double> number_distribution(const FockVector& v) {
    std::vector<double> p(v.amps.size());
    for (std::size_t n = 0; n < v.amps.size(); ++n) p[n] = std::norm(v.amps[n]);
    return p;
}

MomentTable MomentTable::compute(const FockVector& v, int max_order) {
    MomentTable t;
    t.max_order_ = max_order;
    for (int p = 0; p <= max_order; ++p) {
        for (int q = 0; q <= p; ++q) {
            if (p + q > max_order) continue;
            const Complex m = normally_ordered_moment(v, p, q);
            t.entries_[{p, q}] = m;
            if (q != p) t.entries_[{q, p}] = std::conj(m);
        }
    }
    return t;
}

Complex MomentTable::entry(int p, int q) const {
    const auto it = entries_.find({p, q});
    if (it == entries_.end()) {
        throw InvalidSpec("MomentTable::entry: (p, q) outside p + q <= " +
                          std::to_string(max_order_));
    }
    return it->second;
}

}  // namespace fansq
