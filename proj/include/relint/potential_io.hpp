#pragma once

#include <string>
#include <vector>

#include "relint/darboux.hpp"
#include "relint/galois.hpp"
#include "relint/polynomial.hpp"

namespace relint {

struct PotentialParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Format: {"n": int, "k": int, "monomials": [{"c": [re, im], "e": [int, ...]}, ...]}
// Every exponent list must sum to k; violations are rejected with a
// line/field diagnostic.
HomogeneousPotential parse_potential_json(const std::string& text);
HomogeneousPotential load_potential_file(const std::string& path);
std::string potential_to_json(const HomogeneousPotential& V);

// [{d: [[re,im],...], gamma: [re,im], residual: f, multiplicity, continuum,
//   eigenvalues: {trivial, nontrivial, rational}}]
std::string darboux_report_json(const std::vector<DarbouxPoint>& points,
                                const std::vector<SpectrumReport>& spectra);

std::string verdict_report_json(const IntegrabilityVerdict& verdict,
                                const std::vector<DarbouxPoint>& points,
                                const std::vector<SpectrumReport>& spectra);

std::string verdict_report_text(const IntegrabilityVerdict& verdict,
                                const std::vector<DarbouxPoint>& points,
                                const std::vector<SpectrumReport>& spectra, bool explain);

}  // namespace relint
