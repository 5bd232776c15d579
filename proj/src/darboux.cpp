#include "relint/darboux.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace relint {

namespace {

double coeff_scale(const std::vector<Complex>& c) {
    double s = 0.0;
    for (const auto& z : c) s = std::max(s, std::abs(z));
    return s;
}

// d1V(1,t) and d2V(1,t) as polynomials in t (ascending coefficients)
void gradient_polys(const HomogeneousPotential& V, std::vector<Complex>& g1,
                    std::vector<Complex>& g2) {
    int k = V.k();
    g1.assign(std::max(k, 1), Complex(0, 0));
    g2.assign(std::max(k, 1), Complex(0, 0));
    for (const auto& m : V.monomials()) {
        int e1 = m.exponents[0], e2 = m.exponents[1];
        if (e1 > 0) g1[e2] += m.coeff * double(e1);
        if (e2 > 0) g2[e2 - 1] += m.coeff * double(e2);
    }
}

Complex poly_eval(const std::vector<Complex>& c, const Complex& t) {
    Complex r(0, 0);
    for (int i = (int)c.size() - 1; i >= 0; --i) r = r * t + c[i];
    return r;
}

double residual_of(const HomogeneousPotential& V, const CVector& d, const Complex& gamma) {
    CVector g = gradient(V, d);
    double r = 0.0;
    for (int i = 0; i < V.n(); ++i) r = std::max(r, std::abs(g[i] - gamma * d[i]));
    return r;
}

// principal root gamma^(-1/(k-2))
Complex normalizing_factor(const Complex& gamma, int k) {
    return std::pow(gamma, -1.0 / double(k - 2));
}

DarbouxPoint make_point(const HomogeneousPotential& V, const CVector& dir, const Complex& gamma,
                        int multiplicity, bool continuum) {
    DarbouxPoint pt;
    pt.multiplicity = multiplicity;
    pt.continuum = continuum;
    if (V.k() == 2) {
        pt.d = dir;
        pt.gamma = gamma;
        pt.normalization = GammaNormalization::GammaRaw;
    } else {
        Complex alpha = normalizing_factor(gamma, V.k());
        pt.d.resize(dir.size());
        for (size_t i = 0; i < dir.size(); ++i) pt.d[i] = alpha * dir[i];
        pt.gamma = Complex(1.0, 0.0);
        pt.normalization = GammaNormalization::GammaOne;
    }
    pt.residual = residual_of(V, pt.d, pt.gamma);
    return pt;
}

}  // namespace

std::vector<DarbouxPoint> find_darboux_points(const HomogeneousPotential& V) {
    if (V.n() != 2)
        throw std::invalid_argument("find_darboux_points: only n = 2 is supported");
    if (V.is_zero()) throw std::invalid_argument("find_darboux_points: potential is zero");

    std::vector<Complex> g1, g2;
    gradient_polys(V, g1, g2);

    // W(t) = g2(t) - t g1(t), degree <= k
    std::vector<Complex> W(V.k() + 1, Complex(0, 0));
    for (size_t i = 0; i < g2.size(); ++i) W[i] += g2[i];
    for (size_t i = 0; i < g1.size(); ++i) W[i + 1] -= g1[i];

    double wscale = coeff_scale(W);
    double gscale = std::max(coeff_scale(g1), coeff_scale(g2));
    double gamma_tol = 1e-8 * std::max(1.0, gscale);

    std::vector<DarbouxPoint> points;

    if (wscale <= 1e-14 * std::max(1.0, gscale)) {
        // W == 0: V'(d) is parallel to d in every direction (radial family).
        const CVector samples[] = {{Complex(1, 0), Complex(0, 0)},
                                   {Complex(0, 0), Complex(1, 0)},
                                   {Complex(1, 0), Complex(1, 0)}};
        for (const auto& dir : samples) {
            CVector g = gradient(V, dir);
            Complex gamma = std::abs(dir[0]) > 0.5 ? g[0] / dir[0] : g[1] / dir[1];
            if (std::abs(gamma) > gamma_tol) {
                points.push_back(make_point(V, dir, gamma, 1, /*continuum=*/true));
                return points;
            }
        }
        return points;  // all sampled directions have gamma = 0
    }

    // trim trailing (near-)zero coefficients before root finding
    std::vector<Complex> Wt = W;
    while (!Wt.empty() && std::abs(Wt.back()) <= 1e-14 * wscale) Wt.pop_back();

    if (Wt.size() >= 2) {
        std::vector<Complex> roots = polynomial_roots(Wt);
        for (size_t i = 0; i < roots.size();) {
            size_t j = i;
            while (j < roots.size() && roots[j] == roots[i]) ++j;  // clusters collapse equal
            Complex t = roots[i];
            Complex gamma = poly_eval(g1, t);
            if (std::abs(gamma) > gamma_tol * std::pow(1.0 + std::abs(t), V.k() - 1))
                points.push_back(make_point(V, {Complex(1, 0), t}, gamma, int(j - i), false));
            i = j;
        }
    }

    // the direction at infinity, d = (0,1): needs d1V(0,1) = 0
    {
        CVector dir{Complex(0, 0), Complex(1, 0)};
        CVector g = gradient(V, dir);
        if (std::abs(g[0]) <= 1e-10 * std::max(1.0, gscale) && std::abs(g[1]) > gamma_tol)
            points.push_back(make_point(V, dir, g[1], 1, false));
    }

    return points;
}

SpectrumReport spectrum(const HomogeneousPotential& V, const DarbouxPoint& pt) {
    if ((int)pt.d.size() != V.n())
        throw std::invalid_argument("spectrum: point dimension mismatch");
    if (std::abs(pt.gamma) == 0.0) throw std::invalid_argument("spectrum: gamma = 0");
    double dnorm = 0.0;
    for (const auto& z : pt.d) dnorm = std::max(dnorm, std::abs(z));
    if (pt.residual > 1e-10 * std::max(1.0, std::abs(pt.gamma) * dnorm))
        throw std::invalid_argument("spectrum: point residual exceeds the Darboux bound");

    Eigen::MatrixXcd M = hessian(V, pt.d) / pt.gamma;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw std::runtime_error("spectrum: eigensolver failed");

    std::vector<Complex> evs(es.eigenvalues().data(), es.eigenvalues().data() + V.n());
    // the eigenvalue closest to k-1 is the trivial one
    double km1 = double(V.k() - 1);
    size_t triv = 0;
    for (size_t i = 1; i < evs.size(); ++i)
        if (std::abs(evs[i] - km1) < std::abs(evs[triv] - km1)) triv = i;
    if (std::abs(evs[triv] - km1) > 1e-8)
        throw std::runtime_error(
            "spectrum: no eigenvalue near k-1; the supplied point is not a Darboux point");

    SpectrumReport rep;
    rep.trivial_eigenvalue = evs[triv];
    for (size_t i = 0; i < evs.size(); ++i)
        if (i != triv) rep.nontrivial.push_back(evs[i]);
    std::sort(rep.nontrivial.begin(), rep.nontrivial.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });

    rep.all_rational = true;
    rep.all_integer = true;
    for (const auto& ev : rep.nontrivial) {
        std::optional<Rational> r;
        if (std::abs(ev.imag()) <= 1e-8) r = reconstruct_rational_default(ev.real());
        rep.nontrivial_rational.push_back(r);
        if (!r) {
            rep.all_rational = false;
            rep.all_integer = false;
        } else if (!is_integer(*r)) {
            rep.all_integer = false;
        }
    }
    return rep;
}

Complex trace_shortcut(const HomogeneousPotential& V, const DarbouxPoint& pt) {
    if (V.n() != 2) throw std::invalid_argument("trace_shortcut: n must be 2");
    Eigen::MatrixXcd H = hessian(V, pt.d);
    return (H(0, 0) + H(1, 1)) / pt.gamma - Complex(double(V.k() - 1), 0.0);
}

Complex universal_relation(const std::vector<Complex>& lambdas) {
    Complex s(0, 0);
    for (const auto& l : lambdas) {
        if (std::abs(l - Complex(1, 0)) <= 1e-12)
            throw std::invalid_argument("universal_relation: pole at lambda = 1");
        s += Complex(1, 0) / (l - Complex(1, 0));
    }
    return s + Complex(1, 0);
}

}  // namespace relint
