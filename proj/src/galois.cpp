#include "relint/galois.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>

namespace relint {

namespace {

// One table row: lambda(p) = (alpha p^2 + beta p + gamma) / delta.
struct Row {
    const char* id;
    long alpha, beta, gamma, delta;
};

// rows valid for every k (coefficients depend on k)
Row thm2_generic_row2(long k) { return {"thm2:p+kp(p-1)/2", k, 2 - k, 0, 2}; }
Row thm2_generic_row3(long k) { return {"thm2:(kp+1)(kp+k-1)/(2k)", k * k, k * k, k - 1, 2 * k}; }

const std::map<long, std::vector<Row>>& thm2_special_rows() {
    static const std::map<long, std::vector<Row>> rows = {
        {3,
         {{"thm2:k3:(2p+1)(6p+1)/8", 12, 8, 1, 8},
          {"thm2:k3:(12p+1)(12p+5)/96", 144, 72, 5, 96},
          {"thm2:k3:(30p+1)(30p+11)/600", 900, 360, 11, 600},
          {"thm2:k3:(30p+7)(30p+17)/600", 900, 720, 119, 600}}},
        {4, {{"thm2:k4:(12p+1)(12p+7)/72", 144, 96, 7, 72}}},
        {5,
         {{"thm2:k5:(30p+1)(30p+19)/360", 900, 600, 19, 360},
          {"thm2:k5:(10p+1)(10p+7)/40", 100, 80, 7, 40}}},
        {-3,
         {{"thm2:k-3:-(2p-1)(6p+7)/8", -12, -8, 7, 8},
          {"thm2:k-3:-(12p-7)(12p+13)/96", -144, -72, 91, 96},
          {"thm2:k-3:-(30p-19)(30p+31)/600", -900, -360, 589, 600},
          {"thm2:k-3:-(30p-13)(30p+37)/600", -900, -720, 481, 600}}},
        {-4, {{"thm2:k-4:-(12p-5)(12p+13)/72", -144, -96, 65, 72}}},
        {-5,
         {{"thm2:k-5:-(30p-11)(30p+31)/360", -900, -600, 341, 360},
          {"thm2:k-5:-(10p-3)(10p+11)/40", -100, -80, 33, 40}}},
    };
    return rows;
}

Row generic_row1(long k) { return {"gen:(1+p)(1+kp)", k, k + 1, 1, 1}; }
Row generic_row2(long k) { return {"gen:(3+2p)(2+k+2kp)/4", 4 * k, 8 * k + 4, 3 * k + 6, 4}; }
Row generic_row3(long k) {
    return {"gen:(2k-1)/(4k)+k(p^2-4)/16", k * k, 0, 8 * k - 4 - 4 * k * k, 16 * k};
}

const std::map<long, std::vector<Row>>& generic_special_rows() {
    static const std::map<long, std::vector<Row>> rows = {
        {1,
         {{"gen:k1:p^2/16", 1, 0, 0, 16},
          {"gen:k1:p^2/144", 1, 0, 0, 144},
          {"gen:k1:p^2/100", 1, 0, 0, 100},
          {"gen:k1:p^2/64", 1, 0, 0, 64}}},
        {2,
         {{"gen:k2:(p^2-1)/8", 1, 0, -1, 8},
          {"gen:k2:p^2/72-1/8", 1, 0, -9, 72},
          {"gen:k2:p^2/50-1/8", 4, 0, -25, 200},
          {"gen:k2:p^2/32-1/8", 1, 0, -4, 32}}},
        {3,
         {{"gen:k3:3p^2/64-1/3", 9, 0, -64, 192},
          {"gen:k3:p^2/48-1/3", 1, 0, -16, 48},
          {"gen:k3:3p^2/100-1/3", 9, 0, -100, 300}}},
        {4,
         {{"gen:k4:(p^2-9)/16", 1, 0, -9, 16},
          {"gen:k4:p^2/36-9/16", 4, 0, -81, 144},
          {"gen:k4:p^2/25-9/16", 16, 0, -225, 400}}},
        {5,
         {{"gen:k5:5p^2/144-4/5", 25, 0, -576, 720},
          {"gen:k5:p^2/20-4/5", 1, 0, -16, 20},
          {"gen:k5:5p^2/64-4/5", 25, 0, -256, 320}}},
        {6,
         {{"gen:k6:p^2/24-25/24", 1, 0, -25, 24},
          {"gen:k6:3p^2/32-25/24", 9, 0, -100, 96},
          {"gen:k6:3p^2/50-25/24", 36, 0, -625, 600}}},
        {-1,
         {{"gen:k-1:(16-p^2)/16", -1, 0, 16, 16},
          {"gen:k-1:1-p^2/144", -1, 0, 144, 144},
          {"gen:k-1:1-p^2/100", -1, 0, 100, 100},
          {"gen:k-1:1-p^2/64", -1, 0, 64, 64}}},
        {-2,
         {{"gen:k-2:(9-p^2)/8", -1, 0, 9, 8},
          {"gen:k-2:9/8-p^2/72", -1, 0, 81, 72},
          {"gen:k-2:9/8-p^2/50", -4, 0, 225, 200},
          {"gen:k-2:9/8-p^2/32", -1, 0, 36, 32}}},
        {-3,
         {{"gen:k-3:4/3-3p^2/64", -9, 0, 256, 192},
          {"gen:k-3:4/3-p^2/48", -1, 0, 64, 48},
          {"gen:k-3:4/3-3p^2/100", -9, 0, 400, 300}}},
        {-4,
         {{"gen:k-4:(25-p^2)/16", -1, 0, 25, 16},
          {"gen:k-4:25/16-p^2/36", -4, 0, 225, 144},
          {"gen:k-4:25/16-p^2/25", -16, 0, 625, 400}}},
        {-5,
         {{"gen:k-5:9/5-5p^2/144", -25, 0, 1296, 720},
          {"gen:k-5:9/5-p^2/20", -1, 0, 36, 20},
          {"gen:k-5:9/5-5p^2/64", -25, 0, 576, 320}}},
        {-6,
         {{"gen:k-6:49/24-p^2/24", -1, 0, 49, 24},
          {"gen:k-6:49/24-3p^2/32", -9, 0, 196, 96},
          {"gen:k-6:49/24-3p^2/50", -36, 0, 1225, 600}}},
    };
    return rows;
}

Row special_row2(long k) { return {"special:[(k-1)/k+kp(p+1)]/2", k * k, k * k, k - 1, 2 * k}; }
Row special_row3(long k) {
    return {"special:(2k-1)/(4k)+k(4p(p+1)-3)/16", 4 * k * k, 4 * k * k, 8 * k - 4 - 3 * k * k,
            16 * k};
}

Rational row_value(const Row& r, const BigInt& p) {
    Rational v(BigInt(r.alpha) * p * p + BigInt(r.beta) * p + r.gamma, BigInt(r.delta));
    v.canonicalize();
    return v;
}

// integer solutions of alpha p^2 + beta p + (gamma - delta lambda) = 0
std::vector<BigInt> integer_p_solutions(const Row& r, const Rational& lambda) {
    // clear the denominator of lambda: alpha den p^2 + beta den p + gamma den - delta num = 0
    BigInt den = lambda.get_den(), num = lambda.get_num();
    BigInt A = r.alpha * den, B = r.beta * den, C = r.gamma * den - r.delta * num;
    std::vector<BigInt> out;
    if (A == 0) {
        if (B != 0 && C % B == 0) out.push_back(-C / B);
        return out;
    }
    BigInt disc = B * B - 4 * A * C;
    auto s = perfect_square_root(disc);
    if (!s) return out;
    for (int sign = 0; sign < 2; ++sign) {
        BigInt top = -B + (sign ? -*s : *s);
        if (top % (2 * A) == 0) out.push_back(top / (2 * A));
        if (*s == 0) break;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void try_row(FamilyTable table, const Row& r, long k, const Rational& lambda,
             std::vector<FamilyHit>& hits) {
    for (const auto& p : integer_p_solutions(r, lambda))
        hits.push_back({table, r.id, p, k, lambda});
}

void require_k(long k) {
    if (k == 0) throw std::invalid_argument("k must be non-zero");
}

}  // namespace

Rational family_row_value(const std::string& row_id, long k, const BigInt& p) {
    std::vector<Row> candidates = {thm2_generic_row2(k), thm2_generic_row3(k), generic_row1(k),
                                   generic_row2(k),      generic_row3(k),      special_row2(k),
                                   special_row3(k)};
    auto add_from = [&](const std::map<long, std::vector<Row>>& m) {
        auto it = m.find(k);
        if (it != m.end())
            for (const auto& r : it->second) candidates.push_back(r);
    };
    add_from(thm2_special_rows());
    add_from(generic_special_rows());
    for (const auto& r : candidates)
        if (row_id == r.id) return row_value(r, p);
    if (row_id == "special:f+" || row_id == "special:f-") {
        FValue f = f_pm(k, p, row_id == "special:f+" ? Sign::Plus : Sign::Minus);
        if (!f.is_integer)
            throw std::invalid_argument("family_row_value: f_pm not integral at this p");
        return Rational(f.value);
    }
    throw std::invalid_argument("family_row_value: unknown row id " + row_id);
}

std::vector<FamilyHit> check_thm2(long k, const Rational& lambda) {
    require_k(k);
    std::vector<FamilyHit> hits;
    if (k == 2 || k == -2)
        hits.push_back({FamilyTable::Thm2, "thm2:|k|=2:lambda arbitrary", std::nullopt, k, lambda});
    try_row(FamilyTable::Thm2, thm2_generic_row2(k), k, lambda, hits);
    try_row(FamilyTable::Thm2, thm2_generic_row3(k), k, lambda, hits);
    auto it = thm2_special_rows().find(k);
    if (it != thm2_special_rows().end())
        for (const auto& r : it->second) try_row(FamilyTable::Thm2, r, k, lambda, hits);
    return hits;
}

GenericLevelResult check_generic_level(long k, const Rational& lambda) {
    require_k(k);
    GenericLevelResult out;
    try_row(FamilyTable::GenericLevel, generic_row1(k), k, lambda, out.hits);
    try_row(FamilyTable::GenericLevel, generic_row2(k), k, lambda, out.hits);
    try_row(FamilyTable::GenericLevel, generic_row3(k), k, lambda, out.hits);
    auto it = generic_special_rows().find(k);
    if (it != generic_special_rows().end()) {
        for (const auto& r : it->second)
            try_row(FamilyTable::GenericLevel, r, k, lambda, out.hits);
    } else {
        out.partial_table = true;
    }
    return out;
}

std::vector<FamilyHit> check_special_level(long k, const Rational& lambda) {
    require_k(k);
    std::vector<FamilyHit> hits;
    // item 1: lambda = f_pm(k,p). A rational non-integer can never match:
    // when the square root is irrational so is f, and otherwise f is an
    // integer.
    if (is_integer(lambda)) {
        MembershipWitness w = in_J_pm(k, lambda.get_num());
        if (w.member)
            hits.push_back({FamilyTable::SpecialLevel,
                            w.set_name == JSet::JPlus ? "special:f+" : "special:f-", w.witness_p, k,
                            lambda});
    }
    try_row(FamilyTable::SpecialLevel, special_row2(k), k, lambda, hits);
    try_row(FamilyTable::SpecialLevel, special_row3(k), k, lambda, hits);
    return hits;
}

namespace {

Complex principal(const Complex& z) {
    if (z.real() < 0 || (z.real() == 0 && z.imag() < 0)) return -z;
    return z;
}

}  // namespace

ExponentDifferences riemann_exponents(long k, double lambda) {
    require_k(k);
    ExponentDifferences out;
    double dk = double(k);
    Complex d1((dk - 2) * (dk - 2) + 8 * dk * lambda, 0.0);
    Complex d2((dk - 1) * (dk - 1) + 4 * dk * lambda, 0.0);
    out.rho = principal(std::sqrt(d1) / (2.0 * dk));
    out.tau = principal(std::sqrt(d2) / dk);
    return out;
}

ExponentDifferences riemann_exponents(long k, const Rational& lambda) {
    return riemann_exponents(k, to_double(lambda));
}

namespace {

constexpr double kKimuraTol = 1e-9;

bool near_int(double x, long& n) {
    double r = std::round(x);
    if (std::abs(x - r) <= kKimuraTol && std::abs(r) < 9e15) {
        n = (long)r;
        return true;
    }
    return false;
}

bool near_odd_int(const Complex& z, double& val) {
    if (std::abs(z.imag()) > kKimuraTol) return false;
    long n;
    if (!near_int(z.real(), n)) return false;
    val = z.real();
    return n % 2 != 0;
}

struct SchwarzRow {
    int index;
    double c1, c2, c3;  // c3 < 0 encodes "arbitrary"
    bool parity;        // r + q + p must be even
};

const std::array<SchwarzRow, 15>& schwarz_table() {
    static const std::array<SchwarzRow, 15> t = {{
        {1, 1. / 2, 1. / 2, -1, false},
        {2, 1. / 2, 1. / 3, 1. / 3, false},
        {3, 2. / 3, 1. / 3, 1. / 3, true},
        {4, 1. / 2, 1. / 3, 1. / 4, false},
        {5, 2. / 3, 1. / 4, 1. / 4, true},
        {6, 1. / 2, 1. / 3, 1. / 5, false},
        {7, 2. / 5, 1. / 3, 1. / 3, true},
        {8, 2. / 3, 1. / 5, 1. / 5, true},
        {9, 1. / 2, 2. / 5, 1. / 5, false},
        {10, 3. / 5, 1. / 3, 1. / 5, true},
        {11, 2. / 5, 2. / 5, 2. / 5, true},
        {12, 2. / 3, 1. / 3, 1. / 5, true},
        {13, 4. / 5, 1. / 5, 1. / 5, true},
        {14, 1. / 2, 2. / 5, 1. / 3, false},
        {15, 3. / 5, 2. / 5, 1. / 3, true},
    }};
    return t;
}

}  // namespace

KimuraResult kimura_solvable(const Complex& rho, const Complex& sigma, const Complex& tau) {
    KimuraResult out;

    // condition I: one of rho+tau+sigma, -rho+tau+sigma, rho-tau+sigma,
    // rho+tau-sigma is an odd integer
    const Complex sums[4] = {rho + tau + sigma, -rho + tau + sigma, rho - tau + sigma,
                             rho + tau - sigma};
    for (const auto& s : sums) {
        double v;
        if (near_odd_int(s, v)) {
            out.solvable = true;
            out.kind = KimuraResult::Kind::ConditionI;
            out.odd_integer_sum = v;
            return out;
        }
    }

    // condition II: constrained slots need real values in c + Z; an
    // "arbitrary" slot accepts anything, complex included
    const Complex vals[3] = {rho, sigma, tau};

    int perm[3] = {0, 1, 2};
    std::sort(perm, perm + 3);
    do {
        for (int smask = 0; smask < 8; ++smask) {
            for (const auto& row : schwarz_table()) {
                const double cs[3] = {row.c1, row.c2, row.c3};
                long shifts[3] = {0, 0, 0};
                bool ok = true;
                for (int slot = 0; slot < 3 && ok; ++slot) {
                    if (cs[slot] < 0) continue;  // arbitrary
                    Complex v = vals[perm[slot]];
                    if (smask >> slot & 1) v = -v;
                    long n;
                    if (std::abs(v.imag()) <= kKimuraTol && near_int(v.real() - cs[slot], n))
                        shifts[slot] = n;
                    else
                        ok = false;
                }
                if (!ok) continue;
                if (row.parity && (shifts[0] + shifts[1] + shifts[2]) % 2 != 0) continue;
                out.solvable = true;
                out.kind = KimuraResult::Kind::SchwarzRow;
                out.schwarz_row = row.index;
                return out;
            }
        }
    } while (std::next_permutation(perm, perm + 3));

    return out;
}

namespace {

EigenvalueVerdict judge_eigenvalue(long k, const Complex& lambda, bool explain) {
    EigenvalueVerdict v;
    v.lambda = lambda;
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
        throw std::invalid_argument("verdict: non-finite eigenvalue");

    if (std::abs(lambda.imag()) <= 1e-8)
        v.rational_reconstruction = reconstruct_rational_default(lambda.real());
    v.integer_reconstruction = reconstruct_integer(lambda);

    if (std::abs(lambda.imag()) > 1e-8) {
        v.passes = false;
        v.reason = "eigenvalue is not real; integrability requires integer eigenvalues";
    } else if (!v.integer_reconstruction) {
        v.passes = false;
        v.reason = v.rational_reconstruction
                       ? "eigenvalue " + to_string(*v.rational_reconstruction) +
                             " is not an integer; integrability requires integer eigenvalues"
                       : "eigenvalue does not reconstruct as a rational within tolerance";
    } else {
        const BigInt& n = *v.integer_reconstruction;
        MembershipWitness w = in_J_pm(k, n);
        v.memberships.push_back(w);
        bool member = w.member;
        if (std::abs(k) <= 2) {
            MembershipWitness wk = in_J_k_small((int)k, n);
            v.memberships.push_back(wk);
            member = member || wk.member;
        }
        v.passes = member;
        if (member) {
            std::ostringstream os;
            for (const auto& m : v.memberships)
                if (m.member) {
                    os << to_string(n) << " in " << jset_name(m.set_name);
                    if (m.witness_p) os << " (p = " << to_string(*m.witness_p) << ")";
                    break;
                }
            v.reason = os.str();
        } else {
            v.reason = to_string(n) + " lies in none of the admissible integer sets for k = " +
                       std::to_string(k);
        }
    }

    if (explain && v.rational_reconstruction) {
        const Rational& r = *v.rational_reconstruction;
        v.thm2_hits = check_thm2(k, r);
        v.generic = check_generic_level(k, r);
        v.special_hits = check_special_level(k, r);
        v.exponents = riemann_exponents(k, r);
        v.kimura = kimura_solvable(*v.exponents);
    }
    return v;
}

}  // namespace

IntegrabilityVerdict main_theorem_verdict(long k, const std::vector<SpectrumReport>& spectra,
                                          bool explain) {
    require_k(k);
    IntegrabilityVerdict out;
    out.k = k;
    bool all_pass = true;
    for (const auto& sp : spectra) {
        for (const auto& ev : sp.nontrivial) {
            out.per_eigenvalue.push_back(judge_eigenvalue(k, ev, explain));
            all_pass = all_pass && out.per_eigenvalue.back().passes;
        }
    }
    out.overall = all_pass ? IntegrabilityVerdict::Overall::PassesNecessaryConditions
                           : IntegrabilityVerdict::Overall::CannotBeIntegrable;
    std::ostringstream os;
    if (out.per_eigenvalue.empty()) {
        os << "no non-trivial eigenvalues supplied; the necessary conditions are vacuously met";
    } else if (all_pass) {
        os << "all " << out.per_eigenvalue.size()
           << " non-trivial eigenvalue(s) are integers in the admissible sets";
    } else {
        for (const auto& ev : out.per_eigenvalue)
            if (!ev.passes) {
                os << "fails: " << ev.reason;
                break;
            }
    }
    out.explanation = os.str();
    return out;
}

IntegrabilityVerdict main_theorem_verdict(long k, const SpectrumReport& spectrum, bool explain) {
    return main_theorem_verdict(k, std::vector<SpectrumReport>{spectrum}, explain);
}

}  // namespace relint
