#include "relint/roots.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace relint {

namespace {

// p(z) and p'(z) by Horner.
std::pair<Complex, Complex> eval_poly(const std::vector<Complex>& c, const Complex& z) {
    Complex p(0.0, 0.0), dp(0.0, 0.0);
    for (int i = (int)c.size() - 1; i >= 0; --i) {
        dp = dp * z + p;
        p = p * z + c[i];
    }
    return {p, dp};
}

// Backward-error scale sum |c_i| |z|^i; residuals are measured against it.
double residual_scale(const std::vector<Complex>& c, const Complex& z) {
    double az = std::abs(z);
    double s = 0.0, zp = 1.0;
    for (const auto& ci : c) {
        s += std::abs(ci) * zp;
        zp *= az;
    }
    return std::max(s, 1e-300);
}

}  // namespace

std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs, double tol) {
    std::vector<Complex> c = coeffs;
    while (!c.empty() && std::abs(c.back()) == 0.0) c.pop_back();
    if (c.empty()) throw RootFindingError("zero polynomial has no well-defined roots");
    int deg = (int)c.size() - 1;
    if (deg < 1) throw RootFindingError("polynomial degree must be >= 1");

    // Strip roots at the origin exactly.
    int zero_roots = 0;
    while (zero_roots < deg && std::abs(c[zero_roots]) == 0.0) ++zero_roots;
    std::vector<Complex> cc(c.begin() + zero_roots, c.end());
    int d = (int)cc.size() - 1;

    std::vector<Complex> roots(zero_roots, Complex(0.0, 0.0));
    if (d >= 1) {
        Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(d, d);
        for (int i = 1; i < d; ++i) A(i, i - 1) = 1.0;
        for (int i = 0; i < d; ++i) A(i, d - 1) = -cc[i] / cc[d];
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, /*computeEigenvectors=*/false);
        if (es.info() != Eigen::Success)
            throw RootFindingError("companion eigenvalue iteration failed to converge");

        for (int i = 0; i < d; ++i) {
            Complex z = es.eigenvalues()(i);
            // Newton polish; near multiple roots this stalls at the cluster,
            // which the residual criterion accepts.
            for (int it = 0; it < 64; ++it) {
                auto [p, dp] = eval_poly(cc, z);
                if (std::abs(p) <= tol * residual_scale(cc, z)) break;
                if (std::abs(dp) == 0.0) break;
                Complex step = p / dp;
                z -= step;
                if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(z))) break;
            }
            auto [p, dp] = eval_poly(cc, z);
            (void)dp;
            if (std::abs(p) > 1e3 * tol * residual_scale(cc, z))
                throw RootFindingError("root polishing did not reach the residual bound");
            roots.push_back(z);
        }
    }

    // Collapse multiple-root clusters to their mean.
    double scale = 0.0;
    for (const auto& r : roots) scale = std::max(scale, std::abs(r));
    // companion eigenvalues of an m-fold root scatter like eps_mach^(1/m)
    double cluster_eps = 1e-3 * std::max(1.0, scale);
    std::vector<int> label(roots.size(), -1);
    int nlab = 0;
    for (size_t i = 0; i < roots.size(); ++i) {
        if (label[i] >= 0) continue;
        label[i] = nlab;
        for (size_t j = i + 1; j < roots.size(); ++j)
            if (label[j] < 0 && std::abs(roots[i] - roots[j]) < cluster_eps) label[j] = nlab;
        ++nlab;
    }
    std::vector<Complex> mean(nlab, Complex(0, 0));
    std::vector<int> cnt(nlab, 0);
    for (size_t i = 0; i < roots.size(); ++i) {
        mean[label[i]] += roots[i];
        cnt[label[i]]++;
    }
    // an m-fold root is a simple root of the (m-1)-th derivative; polish the
    // cluster centre there, where Newton is quadratic again
    std::vector<Complex> centre(nlab);
    for (int l = 0; l < nlab; ++l) {
        centre[l] = mean[l] / double(cnt[l]);
        if (cnt[l] < 2) continue;
        std::vector<Complex> dc = c;
        for (int m = 1; m < cnt[l]; ++m) {
            std::vector<Complex> next(dc.size() - 1);
            for (size_t i = 0; i + 1 < dc.size(); ++i) next[i] = double(i + 1) * dc[i + 1];
            dc = next;
        }
        Complex z = centre[l];
        for (int it = 0; it < 40; ++it) {
            auto [p, dp] = eval_poly(dc, z);
            if (std::abs(dp) == 0.0) break;
            Complex step = p / dp;
            if (std::abs(step) > cluster_eps) break;  // cluster is not a true multiple root
            z -= step;
            if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(z))) break;
        }
        if (std::abs(z - centre[l]) <= cluster_eps) centre[l] = z;
    }
    for (size_t i = 0; i < roots.size(); ++i)
        if (cnt[label[i]] > 1) roots[i] = centre[label[i]];

    std::sort(roots.begin(), roots.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

std::optional<Rational> reconstruct_rational(double x, const BigInt& max_denominator,
                                             double tolerance) {
    if (max_denominator < 1) throw std::invalid_argument("max_denominator must be >= 1");
    if (tolerance <= 0) throw std::invalid_argument("tolerance must be > 0");
    if (!std::isfinite(x)) return std::nullopt;

    // Integers first.
    double nearest = std::round(x);
    if (std::abs(x - nearest) <= tolerance && std::abs(nearest) < 9e15) {
        Rational r(BigInt((long)nearest), 1);
        return r;
    }

    // Continued-fraction convergents h_i/k_i of x
    // (h_{-1}, h_{-2}) = (1, 0), (k_{-1}, k_{-2}) = (0, 1)
    BigInt h_prev = 0, h = 1, k_prev = 1, k = 0;
    double xi = x;
    for (int it = 0; it < 64; ++it) {
        double fa = std::floor(xi);
        if (!(std::abs(fa) < 9e15)) break;
        BigInt a((long)fa);
        BigInt h_next = a * h + h_prev;
        BigInt k_next = a * k + k_prev;
        if (k_next > max_denominator) break;
        h_prev = h;
        k_prev = k;
        h = h_next;
        k = k_next;
        Rational r(h, k);
        r.canonicalize();
        if (std::abs(x - r.get_d()) <= tolerance) return r;
        double frac = xi - fa;
        if (frac < 1e-18) break;
        xi = 1.0 / frac;
    }
    return std::nullopt;
}

std::optional<Rational> reconstruct_rational_default(double x) {
    return reconstruct_rational(x, BigInt(1000000), 1e-8);
}

std::optional<BigInt> reconstruct_integer(const Complex& z, double tol) {
    if (std::abs(z.imag()) > tol) return std::nullopt;
    double nearest = std::round(z.real());
    if (std::abs(z.real() - nearest) > tol) return std::nullopt;
    if (std::abs(nearest) >= 9e15) return std::nullopt;
    return BigInt((long)nearest);
}

}  // namespace relint
