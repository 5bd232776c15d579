#include "relint/numeric.hpp"

#include <cmath>

namespace relint {

std::optional<BigInt> perfect_square_root(const BigInt& n) {
    if (n < 0) return std::nullopt;
    if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return std::nullopt;
    BigInt r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

std::optional<std::int64_t> perfect_square_root_i64(std::int64_t n) {
    if (n < 0) return std::nullopt;
    auto r = (std::int64_t)std::llround(std::sqrt((double)n));
    // sqrt is inexact near 2^53; walk to the exact floor root
    auto sq = [](std::int64_t v) { return (__int128)v * v; };
    while (r > 0 && sq(r) > n) --r;
    while (sq(r + 1) <= n) ++r;
    if (sq(r) == n) return r;
    return std::nullopt;
}

}  // namespace relint
