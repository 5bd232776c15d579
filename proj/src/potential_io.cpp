#include "relint/potential_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace relint {

using nlohmann::json;

namespace {

// byte offset -> "line L, column C"
std::string locate(const std::string& text, size_t byte) {
    size_t line = 1, col = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

}  // namespace

HomogeneousPotential parse_potential_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw PotentialParseError("potential file: JSON syntax error at " +
                                  locate(text, e.byte ? e.byte - 1 : 0) + ": " + e.what());
    }
    try {
        if (!j.is_object()) throw PotentialParseError("potential file: top level must be an object");
        if (!j.contains("n") || !j["n"].is_number_integer())
            throw PotentialParseError("potential file: field 'n' missing or not an integer");
        if (!j.contains("k") || !j["k"].is_number_integer())
            throw PotentialParseError("potential file: field 'k' missing or not an integer");
        if (!j.contains("monomials") || !j["monomials"].is_array())
            throw PotentialParseError("potential file: field 'monomials' missing or not an array");
        int n = j["n"].get<int>();
        int k = j["k"].get<int>();
        if (j["monomials"].empty())
            throw PotentialParseError("potential file: 'monomials' must not be empty");

        std::vector<Monomial> ms;
        size_t idx = 0;
        for (const auto& jm : j["monomials"]) {
            std::string where = "monomials[" + std::to_string(idx) + "]";
            if (!jm.is_object() || !jm.contains("c") || !jm.contains("e"))
                throw PotentialParseError("potential file: " + where + " needs fields 'c' and 'e'");
            const auto& jc = jm["c"];
            if (!jc.is_array() || jc.size() != 2 || !jc[0].is_number() || !jc[1].is_number())
                throw PotentialParseError("potential file: " + where + ".c must be [re, im]");
            const auto& je = jm["e"];
            if (!je.is_array())
                throw PotentialParseError("potential file: " + where + ".e must be an array");
            Monomial m;
            m.coeff = Complex(jc[0].get<double>(), jc[1].get<double>());
            int sum = 0;
            for (const auto& v : je) {
                if (!v.is_number_integer() || v.get<long long>() < 0)
                    throw PotentialParseError("potential file: " + where +
                                              ".e entries must be non-negative integers");
                m.exponents.push_back(v.get<int>());
                sum += m.exponents.back();
            }
            if ((int)m.exponents.size() != n)
                throw PotentialParseError("potential file: " + where + ".e has length " +
                                          std::to_string(m.exponents.size()) + ", expected n = " +
                                          std::to_string(n));
            if (sum != k)
                throw PotentialParseError("potential file: " + where + ".e sums to " +
                                          std::to_string(sum) + ", expected k = " +
                                          std::to_string(k));
            ms.push_back(std::move(m));
            ++idx;
        }
        return HomogeneousPotential(n, k, std::move(ms));
    } catch (const std::invalid_argument& e) {
        throw PotentialParseError(std::string("potential file: ") + e.what());
    }
}

HomogeneousPotential load_potential_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PotentialParseError("cannot open potential file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_potential_json(ss.str());
}

std::string potential_to_json(const HomogeneousPotential& V) {
    json j;
    j["n"] = V.n();
    j["k"] = V.k();
    j["monomials"] = json::array();
    for (const auto& m : V.monomials())
        j["monomials"].push_back({{"c", complex_to_json(m.coeff)}, {"e", m.exponents}});
    return j.dump(2);
}

namespace {

json spectrum_to_json(const SpectrumReport& sp) {
    json ev;
    ev["trivial"] = complex_to_json(sp.trivial_eigenvalue);
    ev["nontrivial"] = json::array();
    for (const auto& z : sp.nontrivial) ev["nontrivial"].push_back(complex_to_json(z));
    ev["rational"] = json::array();
    for (const auto& r : sp.nontrivial_rational) {
        if (r)
            ev["rational"].push_back(to_string(*r));
        else
            ev["rational"].push_back(nullptr);
    }
    return ev;
}

json point_to_json(const DarbouxPoint& pt) {
    json jp;
    jp["d"] = json::array();
    for (const auto& z : pt.d) jp["d"].push_back(complex_to_json(z));
    jp["gamma"] = complex_to_json(pt.gamma);
    jp["residual"] = pt.residual;
    jp["multiplicity"] = pt.multiplicity;
    jp["continuum"] = pt.continuum;
    return jp;
}

}  // namespace

std::string darboux_report_json(const std::vector<DarbouxPoint>& points,
                                const std::vector<SpectrumReport>& spectra) {
    json arr = json::array();
    for (size_t i = 0; i < points.size(); ++i) {
        json jp = point_to_json(points[i]);
        if (i < spectra.size()) jp["eigenvalues"] = spectrum_to_json(spectra[i]);
        arr.push_back(jp);
    }
    return arr.dump(2);
}

namespace {

json hit_to_json(const FamilyHit& h) {
    json j;
    j["row"] = h.row_id;
    if (h.parameter_p) j["p"] = to_string(*h.parameter_p);
    j["lambda"] = to_string(h.lambda);
    return j;
}

json eigenvalue_verdict_json(const EigenvalueVerdict& ev) {
    json j;
    j["lambda"] = complex_to_json(ev.lambda);
    j["rational"] =
        ev.rational_reconstruction ? json(to_string(*ev.rational_reconstruction)) : json(nullptr);
    j["integer"] =
        ev.integer_reconstruction ? json(to_string(*ev.integer_reconstruction)) : json(nullptr);
    j["passes"] = ev.passes;
    j["reason"] = ev.reason;
    json mems = json::array();
    for (const auto& m : ev.memberships) {
        json jm;
        jm["set"] = jset_name(m.set_name);
        jm["member"] = m.member;
        if (m.witness_p) jm["p"] = to_string(*m.witness_p);
        mems.push_back(jm);
    }
    j["memberships"] = mems;
    if (ev.exponents) {
        j["tables"]["thm2"] = json::array();
        for (const auto& h : ev.thm2_hits) j["tables"]["thm2"].push_back(hit_to_json(h));
        j["tables"]["generic_level"] = json::array();
        for (const auto& h : ev.generic.hits)
            j["tables"]["generic_level"].push_back(hit_to_json(h));
        j["tables"]["generic_level_partial"] = ev.generic.partial_table;
        j["tables"]["special_level"] = json::array();
        for (const auto& h : ev.special_hits)
            j["tables"]["special_level"].push_back(hit_to_json(h));
        j["exponents"] = {{"rho", complex_to_json(ev.exponents->rho)},
                          {"sigma", complex_to_json(ev.exponents->sigma)},
                          {"tau", complex_to_json(ev.exponents->tau)}};
        if (ev.kimura) {
            j["kimura"]["solvable"] = ev.kimura->solvable;
            switch (ev.kimura->kind) {
                case KimuraResult::Kind::ConditionI:
                    j["kimura"]["case"] = "condition I";
                    j["kimura"]["odd_sum"] = ev.kimura->odd_integer_sum;
                    break;
                case KimuraResult::Kind::SchwarzRow:
                    j["kimura"]["case"] = "schwarz row";
                    j["kimura"]["row"] = ev.kimura->schwarz_row;
                    break;
                case KimuraResult::Kind::NotSolvable:
                    j["kimura"]["case"] = "none";
                    break;
            }
        }
    }
    return j;
}

}  // namespace

std::string verdict_report_json(const IntegrabilityVerdict& verdict,
                                const std::vector<DarbouxPoint>& points,
                                const std::vector<SpectrumReport>& spectra) {
    json j;
    j["k"] = verdict.k;
    j["overall"] = verdict.overall == IntegrabilityVerdict::Overall::PassesNecessaryConditions
                       ? "passes-necessary-conditions"
                       : "cannot-be-integrable";
    j["explanation"] = verdict.explanation;
    j["eigenvalues"] = json::array();
    for (const auto& ev : verdict.per_eigenvalue)
        j["eigenvalues"].push_back(eigenvalue_verdict_json(ev));
    j["darboux_points"] = json::parse(darboux_report_json(points, spectra));
    return j.dump(2);
}

std::string verdict_report_text(const IntegrabilityVerdict& verdict,
                                const std::vector<DarbouxPoint>& points,
                                const std::vector<SpectrumReport>& spectra, bool explain) {
    std::ostringstream os;
    os << "k = " << verdict.k << ", Darboux points: " << points.size() << "\n";
    for (size_t i = 0; i < points.size(); ++i) {
        const auto& pt = points[i];
        os << "  point " << i << ": d = (";
        for (size_t jx = 0; jx < pt.d.size(); ++jx) {
            if (jx) os << ", ";
            os << pt.d[jx].real();
            if (pt.d[jx].imag() != 0) os << (pt.d[jx].imag() > 0 ? "+" : "") << pt.d[jx].imag() << "i";
        }
        os << "), gamma = " << pt.gamma.real();
        if (pt.gamma.imag() != 0) os << (pt.gamma.imag() > 0 ? "+" : "") << pt.gamma.imag() << "i";
        if (pt.continuum) os << " [continuum of directions, sample shown]";
        if (pt.multiplicity > 1) os << " [multiplicity " << pt.multiplicity << "]";
        os << ", residual = " << pt.residual << "\n";
        if (i < spectra.size()) {
            os << "    non-trivial eigenvalues:";
            for (size_t jx = 0; jx < spectra[i].nontrivial.size(); ++jx) {
                const auto& z = spectra[i].nontrivial[jx];
                os << " " << z.real();
                if (std::abs(z.imag()) > 1e-12) os << (z.imag() > 0 ? "+" : "") << z.imag() << "i";
                if (spectra[i].nontrivial_rational[jx])
                    os << " (= " << to_string(*spectra[i].nontrivial_rational[jx]) << ")";
            }
            os << "\n";
        }
    }
    os << "verdict: "
       << (verdict.overall == IntegrabilityVerdict::Overall::PassesNecessaryConditions
               ? "PASSES NECESSARY CONDITIONS"
               : "CANNOT BE INTEGRABLE")
       << "\n";
    os << "  " << verdict.explanation << "\n";
    for (const auto& ev : verdict.per_eigenvalue) {
        os << "  eigenvalue " << ev.lambda.real();
        if (std::abs(ev.lambda.imag()) > 1e-12)
            os << (ev.lambda.imag() > 0 ? "+" : "") << ev.lambda.imag() << "i";
        if (ev.rational_reconstruction) os << " (= " << to_string(*ev.rational_reconstruction) << ")";
        os << ": " << (ev.passes ? "admissible" : "obstruction") << " -- " << ev.reason << "\n";
        if (explain && ev.exponents) {
            auto dump_hits = [&os](const char* name, const std::vector<FamilyHit>& hits) {
                os << "    " << name << ": ";
                if (hits.empty()) {
                    os << "no row matches\n";
                    return;
                }
                for (size_t i = 0; i < hits.size(); ++i) {
                    if (i) os << "; ";
                    os << hits[i].row_id;
                    if (hits[i].parameter_p) os << " at p = " << to_string(*hits[i].parameter_p);
                }
                os << "\n";
            };
            dump_hits("classical table", ev.thm2_hits);
            dump_hits("generic-level table", ev.generic.hits);
            if (ev.generic.partial_table)
                os << "      (per-k rows unavailable for |k| > 6: partial table)\n";
            dump_hits("special-level table", ev.special_hits);
            os << "    exponent differences: rho = " << ev.exponents->rho.real();
            if (std::abs(ev.exponents->rho.imag()) > 1e-12) os << "+" << ev.exponents->rho.imag() << "i";
            os << ", sigma = 1/2, tau = " << ev.exponents->tau.real();
            if (std::abs(ev.exponents->tau.imag()) > 1e-12) os << "+" << ev.exponents->tau.imag() << "i";
            os << "\n    hypergeometric solvability: ";
            if (!ev.kimura->solvable)
                os << "not solvable";
            else if (ev.kimura->kind == KimuraResult::Kind::ConditionI)
                os << "solvable (odd-integer sum " << ev.kimura->odd_integer_sum << ")";
            else
                os << "solvable (table row " << ev.kimura->schwarz_row << ")";
            os << "\n";
        }
    }
    return os.str();
}

}  // namespace relint
