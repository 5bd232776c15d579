#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relint/darboux.hpp"
#include "relint/integer_sets.hpp"

namespace relint {

enum class FamilyTable { Thm2, GenericLevel, SpecialLevel };

struct FamilyHit {
    FamilyTable table;
    std::string row_id;
    std::optional<BigInt> parameter_p;  // absent for the |k| = 2 arbitrary row
    long k;
    Rational lambda;
};

// Evaluate a row formula at integer p (throws on unknown row id); hits are
// produced only when this reproduces lambda exactly.
Rational family_row_value(const std::string& row_id, long k, const BigInt& p);

// Classical table of admissible (k, lambda) for non-relativistic
// integrability of homogeneous potentials. Exact rational arithmetic.
std::vector<FamilyHit> check_thm2(long k, const Rational& lambda);

struct GenericLevelResult {
    std::vector<FamilyHit> hits;
    // per-|k| rows exist only for |k| <= 6; beyond that only the three
    // k-generic rows are tested
    bool partial_table = false;
};

// Families solvable at a generic energy level of the straight-line solution.
GenericLevelResult check_generic_level(long k, const Rational& lambda);

// Families solvable at the special energy level (merged singular points).
std::vector<FamilyHit> check_special_level(long k, const Rational& lambda);

// Exponent differences of the three-singular-point reduced equation:
//   rho = sqrt((k-2)^2 + 8 k lambda) / (2k), sigma = 1/2,
//   tau = sqrt((k-1)^2 + 4 k lambda) / k,
// normalised to the representative with non-negative real part.
struct ExponentDifferences {
    Complex rho;
    Complex sigma{0.5, 0.0};
    Complex tau;
};

ExponentDifferences riemann_exponents(long k, double lambda);
ExponentDifferences riemann_exponents(long k, const Rational& lambda);

struct KimuraResult {
    bool solvable = false;
    enum class Kind { ConditionI, SchwarzRow, NotSolvable } kind = Kind::NotSolvable;
    int schwarz_row = 0;            // 1..15 when kind == SchwarzRow
    double odd_integer_sum = 0.0;   // the matched sum for ConditionI
};

// Kimura's solvability criterion for the hypergeometric equation with
// exponent differences (rho, sigma, tau): condition I (one of the four
// signed sums is an odd integer) or condition II (the Schwarz table, all
// sign choices and orderings, with the parity side conditions).
KimuraResult kimura_solvable(const Complex& rho, const Complex& sigma, const Complex& tau);

inline KimuraResult kimura_solvable(const ExponentDifferences& e) {
    return kimura_solvable(e.rho, e.sigma, e.tau);
}

struct EigenvalueVerdict {
    Complex lambda;
    std::optional<Rational> rational_reconstruction;
    std::optional<BigInt> integer_reconstruction;
    std::vector<MembershipWitness> memberships;
    bool passes = false;
    std::string reason;
    // diagnostics, filled when explain is requested
    std::vector<FamilyHit> thm2_hits;
    GenericLevelResult generic;
    std::vector<FamilyHit> special_hits;
    std::optional<ExponentDifferences> exponents;
    std::optional<KimuraResult> kimura;
};

struct IntegrabilityVerdict {
    long k = 0;
    std::vector<EigenvalueVerdict> per_eigenvalue;
    enum class Overall { CannotBeIntegrable, PassesNecessaryConditions } overall =
        Overall::CannotBeIntegrable;
    std::string explanation;
};

// The top-level necessary-condition verdict: every non-trivial eigenvalue
// must reconstruct as an exact integer lying in J+ u J- (|k| > 2) or in
// J_k u J+ u J- (0 < |k| <= 2). Aggregates over all supplied spectra.
IntegrabilityVerdict main_theorem_verdict(long k, const SpectrumReport& spectrum,
                                          bool explain = false);
IntegrabilityVerdict main_theorem_verdict(long k, const std::vector<SpectrumReport>& spectra,
                                          bool explain = false);

}  // namespace relint
