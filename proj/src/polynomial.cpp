#include "relint/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace relint {

HomogeneousPotential::HomogeneousPotential(int n, int k, std::vector<Monomial> monomials)
    : n_(n), k_(k), monomials_(std::move(monomials)) {
    if (n_ < 1) throw std::invalid_argument("potential: n must be >= 1");
    if (n_ > 8) throw std::invalid_argument("potential: more than 8 variables unsupported");
    if (k_ == 0) throw std::invalid_argument("potential: degree k must be non-zero");
    std::map<std::vector<int>, int> seen;
    for (const auto& m : monomials_) {
        if ((int)m.exponents.size() != n_)
            throw std::invalid_argument("potential: exponent vector length != n");
        if (m.coeff == Complex(0.0, 0.0))
            throw std::invalid_argument("potential: zero coefficient monomial");
        int deg = 0;
        for (int e : m.exponents) {
            if (e < 0) throw std::invalid_argument("potential: negative exponent");
            deg += e;
        }
        if (deg != k_)
            throw std::invalid_argument("potential: monomial degree " + std::to_string(deg) +
                                        " != k = " + std::to_string(k_));
        if (!seen.emplace(m.exponents, 1).second)
            throw std::invalid_argument("potential: duplicate exponent vector");
    }
}

HomogeneousPotential HomogeneousPotential::scaled(const Complex& c) const {
    std::vector<Monomial> ms = monomials_;
    for (auto& m : ms) m.coeff *= c;
    return HomogeneousPotential(n_, k_, std::move(ms));
}

namespace {

inline Complex ipow(const Complex& z, int e) {
    Complex r(1.0, 0.0);
    Complex b = z;
    int n = e;
    while (n) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

void check_dim(const HomogeneousPotential& V, const CVector& q) {
    if ((int)q.size() != V.n())
        throw DimensionMismatch("point dimension " + std::to_string(q.size()) +
                                " != potential n = " + std::to_string(V.n()));
}

}  // namespace

Complex eval(const HomogeneousPotential& V, const CVector& q) {
    check_dim(V, q);
    Complex s(0.0, 0.0);
    for (const auto& m : V.monomials()) {
        Complex t = m.coeff;
        for (int j = 0; j < V.n(); ++j) t *= ipow(q[j], m.exponents[j]);
        s += t;
    }
    return s;
}

CVector gradient(const HomogeneousPotential& V, const CVector& q) {
    check_dim(V, q);
    CVector g(V.n(), Complex(0.0, 0.0));
    for (const auto& m : V.monomials()) {
        for (int i = 0; i < V.n(); ++i) {
            int ei = m.exponents[i];
            if (ei == 0) continue;
            Complex t = m.coeff * double(ei);
            for (int j = 0; j < V.n(); ++j) {
                int e = m.exponents[j] - (j == i ? 1 : 0);
                t *= ipow(q[j], e);
            }
            g[i] += t;
        }
    }
    return g;
}

Eigen::MatrixXcd hessian(const HomogeneousPotential& V, const CVector& q) {
    check_dim(V, q);
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(V.n(), V.n());
    for (const auto& m : V.monomials()) {
        for (int i = 0; i < V.n(); ++i) {
            int ei = m.exponents[i];
            if (ei == 0) continue;
            // d^2/dqi^2
            if (ei >= 2) {
                Complex t = m.coeff * double(ei) * double(ei - 1);
                for (int j = 0; j < V.n(); ++j)
                    t *= ipow(q[j], m.exponents[j] - (j == i ? 2 : 0));
                H(i, i) += t;
            }
            for (int l = i + 1; l < V.n(); ++l) {
                int el = m.exponents[l];
                if (el == 0) continue;
                Complex t = m.coeff * double(ei) * double(el);
                for (int j = 0; j < V.n(); ++j) {
                    int e = m.exponents[j];
                    if (j == i) e -= 1;
                    if (j == l) e -= 1;
                    t *= ipow(q[j], e);
                }
                H(i, l) += t;
                H(l, i) += t;  // symmetric by construction
            }
        }
    }
    return H;
}

}  // namespace relint
