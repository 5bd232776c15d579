#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace relint {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

// Arbitrary-precision integers and rationals. mpq_class keeps the canonical
// form we require: gcd(|num|, den) = 1 and den > 0.
using BigInt = mpz_class;
using Rational = mpq_class;

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline std::string to_string(const BigInt& z) { return z.get_str(); }

inline std::string to_string(const Rational& r) {
    if (is_integer(r)) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline double to_double(const Rational& r) { return r.get_d(); }

inline bool fits_int64(const BigInt& z) { return z.fits_slong_p(); }

// Exact integer square root test. Returns the root when n is a perfect
// square of a non-negative integer.
std::optional<BigInt> perfect_square_root(const BigInt& n);

// Fast path for 64-bit operands, exact.
std::optional<std::int64_t> perfect_square_root_i64(std::int64_t n);

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline void require_finite(const Complex& z, const char* what) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::invalid_argument(std::string(what) + ": non-finite value");
}

}  // namespace relint
