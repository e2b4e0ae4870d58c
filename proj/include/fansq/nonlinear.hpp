#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace fansq {

/// Pluggable nonlinearity f(n) of the number index. Must be real, finite and
/// nonzero for every n up to the cutoff in use; zero values are rejected when
/// an f-factorial is formed. Negative values are allowed.
struct NonlinearFn {
    std::function<double(int)> eval;
    std::string label;
};

NonlinearFn unit_nonlinearity();      // f(n) = 1
NonlinearFn inv_sqrt_nonlinearity();  // f(n) = 1/sqrt(n+1)

/// Lookup by wire name: "unit" or "inv-sqrt".
std::optional<NonlinearFn> named_nonlinearity(std::string_view name);

/// A real number carried as log-magnitude plus sign so factorial-scale
/// products never overflow and negative f values keep their sign.
struct LogSigned {
    double log_mag = 0.0;  // log(|value|); -inf encodes zero
    int sign = 1;          // -1, 0, +1

    double value() const;
    static LogSigned one();
};

/// f(nK+j)!: the product of f(qK+j) over q = 1..n, with the empty product 1
/// at n = 0. One factor enters per K-quantum step, which is exactly what the
/// a^K f(n) eigen-relation of the lattice states demands.
/// Throws ZeroFactorValue if any factor vanishes.
LogSigned f_factorial(const NonlinearFn& f, int n, int K, int j);

}  // namespace fansq
