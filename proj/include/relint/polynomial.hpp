#pragma once

#include <vector>

#include <Eigen/Core>

#include "relint/numeric.hpp"

namespace relint {

struct Monomial {
    Complex coeff;
    std::vector<int> exponents;  // one entry per variable, all >= 0
};

// V(q) = sum_i c_i * prod_j q_j^{e_ij}, homogeneous of degree k:
// every exponent vector sums to k, so V(t q) = t^k V(q).
class HomogeneousPotential {
public:
    HomogeneousPotential(int n, int k, std::vector<Monomial> monomials);

    int n() const { return n_; }
    int k() const { return k_; }
    const std::vector<Monomial>& monomials() const { return monomials_; }

    bool is_zero() const { return monomials_.empty(); }

    // c * V
    HomogeneousPotential scaled(const Complex& c) const;

private:
    int n_;
    int k_;
    std::vector<Monomial> monomials_;
};

Complex eval(const HomogeneousPotential& V, const CVector& q);
CVector gradient(const HomogeneousPotential& V, const CVector& q);
Eigen::MatrixXcd hessian(const HomogeneousPotential& V, const CVector& q);

}  // namespace relint
