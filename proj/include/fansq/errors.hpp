#pragma once

#include <stdexcept>
#include <string>

namespace fansq {

// Base class for every error this library raises on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid construction parameters (bad K/j, odd-K fan request, unknown names).
class InvalidSpec : public Error {
public:
    using Error::Error;
};

// normalize() received a vector with vanishing norm.
class ZeroVector : public Error {
public:
    using Error::Error;
};

// The Fock-space truncation cannot support the requested computation:
// either a builder was given an explicit cutoff with tail mass > 1e-12,
// or a moment was evaluated on a vector whose support runs into the top
// of the array (headroom rule violated).
class CutoffTooSmall : public Error {
public:
    using Error::Error;
};

// A quantity that must be real came back with |Im| above the hard 1e-8 bound.
class NonHermitianResult : public Error {
public:
    using Error::Error;
};

// Off-diagonal moment sum with |Im| > 1e-8 * |value|.
class ImaginaryResidue : public Error {
public:
    using Error::Error;
};

// Some f(qK+j) vanished inside an f-factorial product.
class ZeroFactorValue : public Error {
public:
    using Error::Error;
};

// squeeze_analytic called for a (K, N) pair without a closed form.
class UnsupportedPair : public Error {
public:
    using Error::Error;
};

// Bisection bracket without a sign change.
class NoSignChange : public Error {
public:
    using Error::Error;
};

// Coarse scan found more than one interior minimum before golden section.
class NotUnimodal : public Error {
public:
    using Error::Error;
};

// min_squeezing_order exhausted N_max without detecting squeezing.
class NotFound : public Error {
public:
    using Error::Error;
};

}  // namespace fansq
