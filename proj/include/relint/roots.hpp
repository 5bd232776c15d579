#pragma once

#include <optional>
#include <vector>

#include "relint/numeric.hpp"

namespace relint {

struct RootFindingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// All complex roots (with multiplicity) of c[0] + c[1] z + ... + c[d] z^d.
// Companion-matrix eigenvalues refined by Newton iteration until the residual
// satisfies |p(z)| < tol * scale(z); roots of a multiplicity-m cluster are
// collapsed onto the cluster mean, which cancels the leading eigenvalue
// perturbation. Deterministic order: by real part, then imaginary part.
// Throws RootFindingError on the zero polynomial, degree < 1 input, or when
// polishing fails to reach the residual bound.
std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs,
                                      double tol = 1e-12);

// Continued-fraction rational reconstruction: the convergent p/q of x with
// q <= max_denominator and |x - p/q| <= tolerance, if one exists.
std::optional<Rational> reconstruct_rational(double x, const BigInt& max_denominator,
                                             double tolerance);

// Convenience: reconstruction with the default tolerances used across the
// project (tolerance 1e-8, max denominator 1e6).
std::optional<Rational> reconstruct_rational_default(double x);

// Integer reconstruction of a complex eigenvalue: near-real and within tol of
// an integer, else nullopt.
std::optional<BigInt> reconstruct_integer(const Complex& z, double tol = 1e-8);

}  // namespace relint
