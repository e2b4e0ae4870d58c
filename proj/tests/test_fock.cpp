#include "fansq/fock.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "fansq/errors.hpp"
#include "fansq/states.hpp"
#include "testkit.hpp"

using namespace fansq;

namespace {

constexpr double kPi = std::numbers::pi;

FockVector random_state(std::mt19937& rng, int support_top, int n_max) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    FockVector v = FockVector::zeros(n_max);
    for (int n = 0; n <= support_top; ++n) v.amps[n] = Complex(u(rng), u(rng));
    return normalize(v);
}

// Independent oracle for the raw quadrature moment <X_phi^N>: the bosonic
// normal-ordering expansion evaluated from the direct-summation moments.
//   <X^N> = 2^{-N/2} sum_k C(N,2k)(2k-1)!! sum_j C(N-2k,j)
//           e^{i phi (2j-(N-2k))} <a^+j a^{N-2k-j}>
double raw_quadrature_oracle(const FockVector& v, double phi, int N) {
    const MomentTable t = MomentTable::compute(v, N);
    auto binom = [](int n, int k) {
        double b = 1.0;
        for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
        return b;
    };
    Complex total(0.0, 0.0);
    for (int k = 0; 2 * k <= N; ++k) {
        double dfac = 1.0;
        for (int d = 2 * k - 1; d > 1; d -= 2) dfac *= d;
        const int M = N - 2 * k;
        for (int j = 0; j <= M; ++j) {
            total += binom(N, 2 * k) * dfac * binom(M, j) *
                     std::polar(1.0, phi * (2.0 * j - M)) * t.entry(j, M - j);
        }
    }
    total /= std::pow(2.0, N / 2.0);
    return total.real();
}

void test_normalize() {
    FockVector v = FockVector::zeros(2);
    v.amps[0] = 2.0;
    const FockVector n = normalize(v);
    CHECK_NEAR(n.amps[0].real(), 1.0, 1e-15, "normalize scales a single component");
    CHECK(n.normalized, "normalized flag set");

    std::mt19937 rng(91);
    for (int rep = 0; rep < 5; ++rep) {
        FockVector r = FockVector::zeros(49);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (auto& a : r.amps) a = Complex(u(rng), u(rng));
        const FockVector out = normalize(r);
        CHECK_NEAR(std::abs(inner(out, out)), 1.0, 1e-12, "random 50-component unit norm");
        const FockVector twice = normalize(out);
        double dist = 0.0;
        for (int n2 = 0; n2 <= out.n_max; ++n2) dist += std::norm(twice.amps[n2] - out.amps[n2]);
        CHECK(std::sqrt(dist) < 1e-14, "normalize is idempotent");
    }

    CHECK_THROWS(normalize(FockVector::zeros(5)), ZeroVector, "zero vector rejected");
}

void test_inner() {
    const FockVector zero = FockVector::basis(0, 3);
    const FockVector one = FockVector::basis(1, 3);
    CHECK_NEAR(std::abs(inner(zero, one)), 0.0, 1e-15, "<0|1> = 0");
    CHECK_NEAR(inner(one, one).real(), 1.0, 1e-15, "<1|1> = 1");

    std::mt19937 rng(17);
    const FockVector u = random_state(rng, 9, 12);
    const FockVector w = random_state(rng, 12, 12);
    const Complex a = inner(u, w);
    const Complex b = inner(w, u);
    CHECK(std::abs(a - std::conj(b)) < 1e-14, "conjugate symmetry under swap");

    // shorter vector acts as zero-padded
    FockVector small = FockVector::basis(1, 1);
    CHECK(std::abs(inner(small, w) - w.amps[1]) < 1e-14, "padding semantics");
}

void test_moments() {
    // coherent state is an eigenstate of a: <a^+p a^q> = conj(alpha)^p alpha^q
    const Complex alpha = std::polar(0.8, 0.7);
    const FockVector cs = build_coherent(alpha);
    for (int p = 0; p <= 3; ++p) {
        for (int q = 0; q <= 3; ++q) {
            const Complex want = std::pow(std::conj(alpha), p) * std::pow(alpha, q);
            CHECK(std::abs(normally_ordered_moment(cs, p, q) - want) < 1e-12,
                  "coherent moment (" + std::to_string(p) + "," + std::to_string(q) + ")");
        }
    }

    const FockVector vac = FockVector::basis(0, 0);
    CHECK_NEAR(std::abs(normally_ordered_moment(vac, 1, 1)), 0.0, 1e-15, "vacuum <a^+a> = 0");

    // fan support lattice: off-lattice moments vanish identically
    const FockVector fan = build_fan(0.7, 2);
    for (auto [p, q] : {std::pair{1, 2}, {0, 2}, {2, 4}, {1, 0}, {0, 6}}) {
        if ((q - p) % 4 == 0) continue;
        CHECK(std::abs(normally_ordered_moment(fan, p, q)) < 1e-14,
              "fan off-lattice moment is zero");
    }

    // Hermiticity on random states, p, q <= 8
    std::mt19937 rng(2024);
    for (int rep = 0; rep < 3; ++rep) {
        const FockVector v = random_state(rng, 10, 26);
        for (int p = 0; p <= 8; ++p) {
            for (int q = 0; q <= 8 - p; ++q) {
                const Complex m1 = normally_ordered_moment(v, p, q);
                const Complex m2 = normally_ordered_moment(v, q, p);
                CHECK(std::abs(m1 - std::conj(m2)) < 1e-12, "moment hermiticity");
            }
        }
    }

    // truncation guard: a coherent array cut off mid-decay must be rejected
    FockVector chopped = FockVector::zeros(6);
    for (int n = 0; n <= 6; ++n) chopped.amps[n] = cs.amps[n];
    chopped = normalize(chopped);
    CHECK_THROWS(normally_ordered_moment(chopped, 2, 2), CutoffTooSmall,
                 "chopped coherent state rejected");
}

void test_apply_quadrature() {
    const FockVector vac = FockVector::basis(0, 0);
    const FockVector x0 = apply_quadrature(vac, 0.0);
    CHECK(x0.n_max == 1, "output grows by one level");
    CHECK(std::abs(x0.amps[1] - Complex(1.0 / std::sqrt(2.0), 0.0)) < 1e-15,
          "X_0 |0> = |1>/sqrt(2)");

    const double phi = 0.37;
    const FockVector one = FockVector::basis(1, 1);
    const FockVector x1 = apply_quadrature(one, phi);
    CHECK(std::abs(x1.amps[0] - std::polar(1.0 / std::sqrt(2.0), -phi)) < 1e-15,
          "X|1> lower component");
    CHECK(std::abs(x1.amps[2] - std::polar(std::sqrt(2.0) / std::sqrt(2.0), phi)) < 1e-15,
          "X|1> upper component");

    const FockVector fan = build_fan(0.9, 2);
    for (double ph : {0.0, 0.5, 1.9}) {
        CHECK(std::abs(inner(fan, apply_quadrature(fan, ph))) < 1e-12, "<X> = 0 on fan states");
    }
}

void test_central_moments() {
    // coherent states sit exactly on the (N-1)!!/2^{N/2} baseline
    for (double xi : {0.3, 1.0}) {
        const FockVector cs = build_coherent(xi, CutoffPolicy::automatic(14));
        CHECK_NEAR(central_quadrature_moment(cs, 0.9, 2), 0.5, 1e-12, "coherent N=2 -> 1/2");
        CHECK_NEAR(central_quadrature_moment(cs, 0.2, 4), 0.75, 1e-12, "coherent N=4 -> 3/4");
        CHECK_NEAR(central_quadrature_moment(cs, 1.4, 6), 15.0 / 8.0, 1e-11,
                   "coherent N=6 -> 15/8");
    }

    const FockVector fan = build_fan(0.669272, 2, unit_nonlinearity(), CutoffPolicy::automatic(10));
    CHECK(central_quadrature_moment(fan, kPi / 4.0, 4) < 0.75,
          "fan K=2 squeezed below 3/4 at the optimum");

    // operator path vs normal-ordering expansion (independent summation route)
    std::mt19937 rng(7);
    for (int rep = 0; rep < 3; ++rep) {
        // symmetric lattice support keeps <X> = 0 so central = raw
        FockVector v = FockVector::zeros(30);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int n = 0; n <= 12; n += 3) v.amps[n] = Complex(u(rng), u(rng));
        v = normalize(v);
        for (const int N : {2, 4, 6}) {
            for (const double ph : {0.0, 0.8}) {
                const double got = central_quadrature_moment(v, ph, N);
                const double want = raw_quadrature_oracle(v, ph, N);
                CHECK(std::abs(got - want) < 1e-10, "operator path matches moment expansion");
            }
        }
    }

    // quadrature consistency at N=2 via the explicit second-moment identity
    const FockVector w = build_coherent(Complex(0.4, 0.6));
    for (double ph : {0.1, 1.1}) {
        const Complex a2 = normally_ordered_moment(w, 0, 2);
        const Complex n1 = normally_ordered_moment(w, 1, 1);
        const double raw =
            0.5 * (2.0 * n1.real() + 1.0 +
                   2.0 * (std::polar(1.0, -2.0 * ph) * a2).real());
        const double mean = quadrature_mean(w, ph);
        CHECK(std::abs(raw - mean * mean - central_quadrature_moment(w, ph, 2)) < 1e-10,
              "second moment identity");
    }

    // global phase leaves central moments alone
    const FockVector fan2 = build_fan(0.5, 2);
    FockVector rot = fan2;
    for (auto& c : rot.amps) c *= std::polar(1.0, 1.234);
    CHECK_NEAR(central_quadrature_moment(fan2, 0.7, 4), central_quadrature_moment(rot, 0.7, 4),
               1e-13, "global phase invariance");

    // even powers of a Hermitian operator are nonnegative
    std::mt19937 rng2(99);
    for (int rep = 0; rep < 4; ++rep) {
        const FockVector v = random_state(rng2, 8, 30);
        CHECK(central_quadrature_moment(v, 0.3, 4) > -1e-12, "central moment nonnegative");
    }

    // headroom guard
    FockVector tight = FockVector::zeros(3);
    tight.amps[0] = 0.8;
    tight.amps[3] = 0.6;
    CHECK_THROWS(central_quadrature_moment(tight, 0.0, 4), CutoffTooSmall,
                 "support touching the top is rejected");
}

void test_number_distribution() {
    const FockVector three = FockVector::basis(3, 5);
    const auto p3 = number_distribution(three);
    CHECK(p3[3] == 1.0 && p3[0] == 0.0, "|3> distribution");

    const double alpha = 0.9;
    const FockVector cs = build_coherent(alpha);
    const auto p = number_distribution(cs);
    double sum = 0.0;
    for (double x : p) sum += x;
    CHECK_NEAR(sum, 1.0, 1e-12, "distribution sums to 1");
    for (int n = 0; n <= 6; ++n) {
        const double want =
            std::exp(-alpha * alpha + 2.0 * n * std::log(alpha) - std::lgamma(n + 1.0));
        CHECK_NEAR(p[n], want, 1e-12, "Poisson weight at n=" + std::to_string(n));
    }

    const FockVector fan = build_fan(0.8, 2);
    const auto pf = number_distribution(fan);
    for (int n = 0; n <= fan.n_max; ++n) {
        if (n % 4 != 0) CHECK(pf[n] == 0.0, "fan K=2 distribution supported on 4Z");
    }
}

void test_moment_table() {
    const FockVector fan = build_fan(0.6, 2);
    const MomentTable t = MomentTable::compute(fan, 6);
    CHECK(std::abs(t.entry(0, 0) - Complex(1.0, 0.0)) < 1e-12, "entry(0,0) = 1");
    for (int p = 0; p <= 6; ++p) {
        for (int q = 0; q + p <= 6; ++q) {
            CHECK(std::abs(t.entry(p, q) - std::conj(t.entry(q, p))) == 0.0,
                  "table hermitian by construction");
            CHECK(std::abs(t.entry(p, q) - normally_ordered_moment(fan, p, q)) < 1e-14,
                  "table matches the moment engine");
        }
    }
    CHECK_THROWS(t.entry(4, 3), InvalidSpec, "outside max_order");
}

}  // namespace

int main() {
    test_normalize();
    test_inner();
    test_moments();
    test_apply_quadrature();
    test_central_moments();
    test_number_distribution();
    test_moment_table();
    return testkit::summary("fock");
}
