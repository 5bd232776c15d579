#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "relint/numeric.hpp"

namespace relint {

enum class JSet { JPlus, JMinus, J1, J2, Jm1, Jm2 };
enum class Sign { Plus, Minus };

const char* jset_name(JSet s);

struct MembershipWitness {
    bool member = false;
    JSet set_name = JSet::JPlus;        // meaningful when member
    std::optional<BigInt> witness_p;    // parameter reproducing value
    BigInt value;                       // the integer tested
};

struct FValue {
    bool is_integer = false;
    BigInt value;       // exact, set when is_integer
    double approx = 0;  // always filled
};

// f_pm(k,p) = 3kp(2p+1) + [1 +- (4p+1) sqrt(4k^2 p(2p+1)+1)] / 2.
// Integer exactly when 4k^2 p(2p+1)+1 is a perfect square (then both signs
// are integers at once).
FValue f_pm(long k, const BigInt& p, Sign sign);

// lambda in J+ u J- for the given k, decided in exact integer arithmetic.
// Scans p outward from 0 and stops once min(|f+|,|f-|) has exceeded the
// target for 3 consecutive p on each side (both branches grow ~ |k| p^2).
MembershipWitness in_J_pm(long k, const BigInt& lambda);

// The `count` smallest elements of J+ u J- in increasing order (k > 0).
// For k < 0 the union is unbounded below (f_pm(-k,p) = 1 - f_mp(k,p)), so
// the `count` largest elements are returned, still sorted increasingly.
std::vector<BigInt> enumerate_J_pm(long k, int count);

// Same output as enumerate_J_pm, produced through the Pell-equation
// structure: the fundamental solution of U^2 - 32 k^2 V^2 = 1 acts on hit
// states of the norm form (kw)^2 - 2m^2 = k^2 - 2 (w = 4p+1), and along
// every orbit the values satisfy
//   lambda_{n+3} = a (lambda_{n+2} - lambda_{n+1}) + lambda_n,  a = 4 U1^2 - 1,
// which is verified exactly for each orbit walked. Throws std::logic_error
// if any cross-check against the direct enumeration fails.
std::vector<BigInt> enumerate_J_pm_via_pell(long k, int count);

// Count of p in [-p_bound, p_bound] for which f_pm(k,p) takes integer
// values (each such p makes both branches integers at once).
struct DensityScan {
    long long hit_count = 0;
    std::vector<long long> hit_ps;  // in scan order 0, 1, -1, 2, -2, ...
};
DensityScan integer_density_scan(long k, long long p_bound);

bool is_perfect_square(const BigInt& t);
bool is_triangular(const BigInt& t);          // 8t+1 a perfect square
bool is_square_triangular(const BigInt& t);   // square and triangular

// J_1 = square triangular numbers, J_2 = {p(p+1)/2},
// J_-1 = {1-s : s in J_1}, J_-2 = {1-s : s in J_2}. k in {-2,-1,1,2}.
MembershipWitness in_J_k_small(int k, const BigInt& lambda);

struct PellSolution {
    BigInt U, V, D;
};

// Minimal positive solution of U^2 - D V^2 = 1 by the continued-fraction
// expansion of sqrt(D). Throws std::invalid_argument when D is a perfect
// square (or not positive).
PellSolution pell_fundamental(const BigInt& D);

// --- exact orbit machinery, exposed for the verification tests ---

// a + b sqrt(2)
struct Zr2 {
    BigInt a, b;
    Zr2 operator*(const Zr2& o) const {
        return {a * o.a + 2 * b * o.b, a * o.b + b * o.a};
    }
};

// State (w, ms): w = 4p+1 and ms = +-sqrt(4k^2 p(2p+1)+1), i.e. the element
// zeta = k w + ms sqrt(2) of norm k^2 - 2. The two signs of ms carry the two
// branches f+ / f- of the same p.
struct HitState {
    BigInt w, ms;
};

BigInt lambda_of_state(long k, const HitState& s);

// Multiplication of zeta by the fundamental unit U1 + 4 k V1 sqrt(2) (or its
// conjugate), with the sign normalised so that w stays = 1 (mod 4).
HitState unit_step(long k, const PellSolution& fund, const HitState& s, bool inverse);

// Closed form for the subfamily through `seed`:
//   lambda_n = [2 Re_sqrt2( (3+2 sqrt2) zeta^2 u^(2n) ) - 2(3k^2-8k+6)] / (32k),
// zeta = k w0 + ms0 sqrt(2), u the fundamental unit. Equals
// lambda_of_state(seed * u^n) for every integer n; used as the optional
// verification path for the orbit walks.
BigInt closed_form_lambda(long k, const PellSolution& fund, const HitState& seed, long n);

}  // namespace relint
