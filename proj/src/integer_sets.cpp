#include "relint/integer_sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace relint {

const char* jset_name(JSet s) {
    switch (s) {
        case JSet::JPlus: return "J+";
        case JSet::JMinus: return "J-";
        case JSet::J1: return "J1";
        case JSet::J2: return "J2";
        case JSet::Jm1: return "J-1";
        case JSet::Jm2: return "J-2";
    }
    return "?";
}

namespace {

void require_k(long k) {
    if (k == 0) throw std::invalid_argument("k must be non-zero");
}

// 4 k^2 p (2p+1) + 1
BigInt discriminant(long k, const BigInt& p) {
    BigInt T = p * (2 * p + 1);
    return 4 * BigInt(k) * BigInt(k) * T + 1;
}

std::optional<BigInt> hit_root(long k, const BigInt& p) {
    return perfect_square_root(discriminant(k, p));
}

double min_abs_f_approx(long k, const BigInt& p) {
    double T = BigInt(p * (2 * p + 1)).get_d();
    double w = BigInt(4 * p + 1).get_d();
    double m = std::sqrt(4.0 * double(k) * double(k) * T + 1.0);
    double base = 3.0 * double(k) * T;
    double fp = base + 0.5 * (1.0 + w * m);
    double fm = base + 0.5 * (1.0 - w * m);
    return std::min(std::abs(fp), std::abs(fm));
}

unsigned long mod4(const BigInt& w) { return mpz_fdiv_ui(w.get_mpz_t(), 4); }

struct ScanOut {
    std::set<BigInt> values;
    std::vector<std::pair<BigInt, BigInt>> hits;  // (p, m), m >= 0
    long long max_abs_p = 0;
};

// Collect J+ u J- elements for k > 0 until the `count` smallest are
// guaranteed: both branches grow quadratically in |p|, so once min |f| has
// exceeded the current count-th smallest candidate (with a factor-2 margin)
// for 3 consecutive p on each side, no smaller element can appear.
ScanOut scan_collect(long k, int count) {
    ScanOut out;
    auto consider = [&](const BigInt& p) {
        if (auto m = hit_root(k, p)) {
            out.hits.emplace_back(p, *m);
            BigInt w = 4 * p + 1;
            out.values.insert(lambda_of_state(k, {w,*m}));
            out.values.insert(lambda_of_state(k, {w, -*m}));
        }
        return min_abs_f_approx(k, p);
    };
    consider(0);

    double thr = std::numeric_limits<double>::infinity();
    size_t thr_at_size = 0;
    auto refresh_thr = [&]() {
        if (out.values.size() < (size_t)count) {
            thr = std::numeric_limits<double>::infinity();
            return;
        }
        if (out.values.size() == thr_at_size) return;
        auto it = out.values.begin();
        std::advance(it, count - 1);
        thr = it->get_d();
        thr_at_size = out.values.size();
    };

    int cpos = 0, cneg = 0;
    for (long a = 1;; ++a) {
        refresh_thr();
        double mp = consider(BigInt(a));
        cpos = (std::isfinite(thr) && mp > 2 * thr + 10) ? cpos + 1 : 0;
        refresh_thr();
        double mn = consider(BigInt(-a));
        cneg = (std::isfinite(thr) && mn > 2 * thr + 10) ? cneg + 1 : 0;
        out.max_abs_p = a;
        if (cpos >= 3 && cneg >= 3 && out.values.size() >= (size_t)count) break;
        if (a > 200000000L) throw std::runtime_error("J-set scan failed to terminate");
    }
    return out;
}

std::vector<BigInt> mirror_negative_k(const std::vector<BigInt>& v) {
    std::vector<BigInt> out;
    out.reserve(v.size());
    for (auto it = v.rbegin(); it != v.rend(); ++it) out.push_back(1 - *it);
    return out;
}

}  // namespace

BigInt lambda_of_state(long k, const HitState& s) {
    // 3k (w^2-1)/8 + (1 + w ms)/2, both divisions exact (w, ms odd)
    BigInt t1 = 3 * BigInt(k) * ((s.w * s.w - 1) / 8);
    BigInt t2 = (1 + s.w * s.ms) / 2;
    return t1 + t2;
}

FValue f_pm(long k, const BigInt& p, Sign sign) {
    require_k(k);
    FValue out;
    BigInt w = 4 * p + 1;
    auto m = hit_root(k, p);
    if (m) {
        out.is_integer = true;
        out.value = lambda_of_state(k, {w, sign == Sign::Plus ? *m : -*m});
        out.approx = out.value.get_d();
        return out;
    }
    double T = BigInt(p * (2 * p + 1)).get_d();
    double md = std::sqrt(discriminant(k, p).get_d());
    double sgn = sign == Sign::Plus ? 1.0 : -1.0;
    out.approx = 3.0 * double(k) * T + 0.5 * (1.0 + sgn * w.get_d() * md);
    return out;
}

MembershipWitness in_J_pm(long k, const BigInt& lambda) {
    require_k(k);
    if (k < 0) {
        // f_pm(-k, p) = 1 - f_mp(k, p)
        MembershipWitness w = in_J_pm(-k, 1 - lambda);
        w.value = lambda;
        if (w.member) w.set_name = (w.set_name == JSet::JPlus) ? JSet::JMinus : JSet::JPlus;
        return w;
    }
    MembershipWitness out;
    out.value = lambda;
    double target = std::abs(lambda.get_d());

    auto check = [&](const BigInt& p) -> bool {
        if (auto m = hit_root(k, p)) {
            BigInt w = 4 * p + 1;
            if (lambda_of_state(k, {w, -*m}) == lambda) {
                out.member = true;
                out.set_name = JSet::JMinus;
                out.witness_p = p;
                return true;
            }
            if (lambda_of_state(k, {w, *m}) == lambda) {
                out.member = true;
                out.set_name = JSet::JPlus;
                out.witness_p = p;
                return true;
            }
        }
        return false;
    };

    if (check(0)) return out;
    int cpos = 0, cneg = 0;
    for (long a = 1;; ++a) {
        if (check(BigInt(a))) return out;
        cpos = (min_abs_f_approx(k, BigInt(a)) > 2 * target + 10) ? cpos + 1 : 0;
        if (check(BigInt(-a))) return out;
        cneg = (min_abs_f_approx(k, BigInt(-a)) > 2 * target + 10) ? cneg + 1 : 0;
        if (cpos >= 3 && cneg >= 3) return out;
        if (a > 200000000L) throw std::runtime_error("membership scan failed to terminate");
    }
}

std::vector<BigInt> enumerate_J_pm(long k, int count) {
    require_k(k);
    if (count < 1 || count > 10000) throw std::invalid_argument("count must be in [1, 10^4]");
    if (k < 0) return mirror_negative_k(enumerate_J_pm(-k, count));
    ScanOut s = scan_collect(k, count);
    std::vector<BigInt> out(s.values.begin(), s.values.end());
    out.resize(count);
    return out;
}

DensityScan integer_density_scan(long k, long long p_bound) {
    require_k(k);
    if (p_bound < 0 || p_bound > 10000000LL)
        throw std::invalid_argument("p_bound must be in [0, 10^7]");
    DensityScan out;
    const long long kk4 = 4 * k * k;
    const bool small = std::abs(k) <= 1000000L;  // 4k^2 p(2p+1)+1 fits __int128 easily
    auto test = [&](long long p) {
        bool hit;
        if (small) {
            __int128 T = (__int128)p * (2 * p + 1);
            __int128 M = (__int128)kk4 * T + 1;
            if (M <= (__int128)std::numeric_limits<std::int64_t>::max()) {
                hit = perfect_square_root_i64((std::int64_t)M).has_value();
            } else {
                hit = hit_root(k, BigInt((long)p)).has_value();
            }
        } else {
            hit = hit_root(k, BigInt((long)p)).has_value();
        }
        if (hit) {
            ++out.hit_count;
            out.hit_ps.push_back(p);
        }
    };
    test(0);
    for (long long a = 1; a <= p_bound; ++a) {
        test(a);
        test(-a);
    }
    return out;
}

bool is_perfect_square(const BigInt& t) { return perfect_square_root(t).has_value(); }

bool is_triangular(const BigInt& t) {
    if (t < 0) return false;
    return is_perfect_square(8 * t + 1);
}

bool is_square_triangular(const BigInt& t) {
    return is_perfect_square(t) && is_triangular(t);
}

namespace {

// p >= 0 with p(p+1)/2 = t, assuming t triangular
BigInt triangular_index(const BigInt& t) {
    BigInt r = *perfect_square_root(8 * t + 1);
    return (r - 1) / 2;
}

}  // namespace

MembershipWitness in_J_k_small(int k, const BigInt& lambda) {
    MembershipWitness out;
    out.value = lambda;
    switch (k) {
        case 1:
            out.member = is_square_triangular(lambda);
            out.set_name = JSet::J1;
            if (out.member) out.witness_p = triangular_index(lambda);
            break;
        case 2:
            out.member = is_triangular(lambda);
            out.set_name = JSet::J2;
            if (out.member) out.witness_p = triangular_index(lambda);
            break;
        case -1:
            out.member = is_square_triangular(1 - lambda);
            out.set_name = JSet::Jm1;
            if (out.member) out.witness_p = triangular_index(1 - lambda);
            break;
        case -2:
            out.member = is_triangular(1 - lambda);
            out.set_name = JSet::Jm2;
            if (out.member) out.witness_p = triangular_index(1 - lambda);
            break;
        default:
            throw std::invalid_argument("in_J_k_small: k must be in {-2,-1,1,2}");
    }
    return out;
}

PellSolution pell_fundamental(const BigInt& D) {
    if (D <= 0) throw std::invalid_argument("pell: D must be positive");
    if (is_perfect_square(D)) throw std::invalid_argument("pell: D must not be a perfect square");
    BigInt a0;
    mpz_sqrt(a0.get_mpz_t(), D.get_mpz_t());

    // continued fraction of sqrt(D); the first convergent h/k with
    // h^2 - D k^2 = 1 is the fundamental solution
    BigInt m = 0, d = 1, a = a0;
    BigInt h_prev = 1, h = a0, k_prev = 0, kq = 1;
    for (int it = 0; it < 100000; ++it) {
        if (h * h - D * kq * kq == 1) return {h, kq, D};
        m = d * a - m;
        d = (D - m * m) / d;
        a = (a0 + m) / d;
        BigInt h_next = a * h + h_prev;
        BigInt k_next = a * kq + k_prev;
        h_prev = h;
        k_prev = kq;
        h = h_next;
        kq = k_next;
    }
    throw std::runtime_error("pell: continued fraction did not close");
}

HitState unit_step(long k, const PellSolution& fund, const HitState& s, bool inverse) {
    // zeta = k w + ms sqrt2 multiplied by the unit U + 4 k V sqrt2 (norm 1;
    // conjugate = inverse):  w' = U w + 8 V ms,  ms' = U ms + 4 k^2 V w.
    BigInt V = inverse ? BigInt(-fund.V) : fund.V;
    HitState out{fund.U * s.w + 8 * V * s.ms,
                 fund.U * s.ms + 4 * BigInt(k) * BigInt(k) * V * s.w};
    if (mod4(out.w) != 1) {
        out.w = -out.w;
        out.ms = -out.ms;
    }
    return out;
}

BigInt closed_form_lambda(long k, const PellSolution& fund, const HitState& seed, long n) {
    Zr2 eta{3, 2};
    Zr2 zeta{BigInt(k) * seed.w, seed.ms};
    Zr2 u{fund.U, 4 * BigInt(k) * fund.V};
    if (n < 0) {
        u.b = -u.b;  // norm 1, so the conjugate is the inverse
        n = -n;
    }
    Zr2 acc{1, 0};
    for (long i = 0; i < 2 * n; ++i) acc = acc * u;
    Zr2 term = eta * (zeta * zeta) * acc;
    BigInt num = 2 * term.a - 2 * BigInt(3 * k * k - 8 * k + 6);
    BigInt den = 32 * BigInt(k);
    BigInt q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (r != 0) throw std::logic_error("closed_form_lambda: non-integer value");
    return q;
}

std::vector<BigInt> enumerate_J_pm_via_pell(long k, int count) {
    require_k(k);
    if (count < 1 || count > 10000) throw std::invalid_argument("count must be in [1, 10^4]");
    if (k < 0) return mirror_negative_k(enumerate_J_pm_via_pell(-k, count));

    PellSolution fund = pell_fundamental(32 * BigInt(k) * BigInt(k));
    BigInt a = 4 * fund.U * fund.U - 1;

    ScanOut s = scan_collect(k, count);
    auto it = s.values.begin();
    std::advance(it, count - 1);
    BigInt top = *it;

    std::set<BigInt> values;
    for (const auto& [p, m] : s.hits) {
        BigInt w = 4 * p + 1;
        for (int sign = 0; sign < 2; ++sign) {
            HitState s0{w, sign ? -m : m};
            // walk the orbit both ways; lambda eventually grows ~ a^n
            std::vector<BigInt> lams;
            {
                std::vector<BigInt> back;
                HitState st = s0;
                int above = 0;
                for (int j = 0; j < 400 && above < 3; ++j) {
                    st = unit_step(k, fund, st, /*inverse=*/true);
                    BigInt lam = lambda_of_state(k, st);
                    above = lam > top ? above + 1 : 0;
                    back.push_back(lam);
                }
                lams.assign(back.rbegin(), back.rend());
            }
            lams.push_back(lambda_of_state(k, s0));
            {
                HitState st = s0;
                int above = 0;
                for (int j = 0; j < 400 && above < 3; ++j) {
                    st = unit_step(k, fund, st, /*inverse=*/false);
                    BigInt lam = lambda_of_state(k, st);
                    above = lam > top ? above + 1 : 0;
                    lams.push_back(lam);
                }
            }
            // the three-term recurrence must hold exactly along the orbit
            for (size_t j = 0; j + 3 < lams.size(); ++j) {
                if (lams[j + 3] != a * (lams[j + 2] - lams[j + 1]) + lams[j])
                    throw std::logic_error("via_pell: recurrence violated along orbit");
            }
            for (const auto& lam : lams)
                if (lam <= top) values.insert(lam);
        }
    }

    std::vector<BigInt> out(values.begin(), values.end());
    if (out.size() < (size_t)count) throw std::logic_error("via_pell: too few elements generated");
    out.resize(count);
    if (out != enumerate_J_pm(k, count))
        throw std::logic_error("via_pell: mismatch against direct enumeration");
    return out;
}

}  // namespace relint
