#pragma once

#include <optional>
#include <vector>

#include "relint/polynomial.hpp"
#include "relint/roots.hpp"

namespace relint {

enum class GammaNormalization { GammaOne, GammaRaw };

// Non-zero direction d with V'(d) = gamma d, gamma != 0. For k != 2 the
// point is rescaled so gamma = 1 (gamma scales as alpha^(k-2)); for k = 2
// the Hessian is constant and gamma is kept raw.
struct DarbouxPoint {
    CVector d;
    Complex gamma{1.0, 0.0};
    double residual = 0.0;  // max-norm of V'(d) - gamma d
    GammaNormalization normalization = GammaNormalization::GammaOne;
    int multiplicity = 1;
    bool continuum = false;  // every direction is a Darboux point (radial case)
};

struct SpectrumReport {
    Complex trivial_eigenvalue;  // the eigenvalue closest to k-1
    std::vector<Complex> nontrivial;
    std::vector<std::optional<Rational>> nontrivial_rational;
    bool all_rational = false;
    bool all_integer = false;
};

// All projective classes of Darboux points of a planar potential, found as
// roots of W(t) = d2V(1,t) - t d1V(1,t) plus the separate direction (0,1).
// Directions with gamma = 0 are excluded. W == 0 means a radial-type
// potential: a canonical sample direction is returned with the continuum
// flag set. Deterministic ordering: W-roots sorted as in polynomial_roots,
// then the (0,1) candidate.
std::vector<DarbouxPoint> find_darboux_points(const HomogeneousPotential& V);

// Eigenvalues of the scaled Hessian gamma^-1 V''(d); works for any n with an
// externally supplied point. The eigenvalue closest to k-1 is reported as
// trivial, the remaining n-1 pass through rational reconstruction.
SpectrumReport spectrum(const HomogeneousPotential& V, const DarbouxPoint& pt);

// gamma^-1 tr V''(d) - (k-1); equals the single non-trivial eigenvalue for
// n = 2.
Complex trace_shortcut(const HomogeneousPotential& V, const DarbouxPoint& pt);

// sum 1/(lambda_i - 1) + 1; zero when the universal trace relation holds.
// Throws when some lambda_i = 1 within 1e-12 (pole, relation inapplicable).
Complex universal_relation(const std::vector<Complex>& lambdas);

}  // namespace relint
