#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "relint/polynomial.hpp"

namespace relint {

// Extended phase-space state. u = sqrt(1 + |p|^2) is carried as a dynamical
// variable of the Poisson form of the relativistic system; u^2 - |p|^2 is a
// Casimir and its drift is an integrator-quality diagnostic.
struct PhaseState {
    double t = 0.0;
    std::vector<double> q, p;
    double u = 1.0;
};

struct PhaseDerivative {
    std::vector<double> qdot, pdot;
    double udot = 0.0;
};

enum class Kinetic { Relativistic, Classical };

// Potential for the dynamics engine: real polynomial terms (not necessarily
// homogeneous) plus radial c * r^k terms with integer k, possibly negative.
class PotentialModel {
public:
    struct PolyTerm {
        double c;
        std::vector<int> e;
    };
    struct RadialTerm {
        double c;
        int k;
    };

    PotentialModel(int n, std::vector<PolyTerm> poly, std::vector<RadialTerm> radial = {});

    // requires (near-)real coefficients
    static PotentialModel from_homogeneous(const HomogeneousPotential& V);

    int n() const { return n_; }
    const std::vector<PolyTerm>& poly() const { return poly_; }
    const std::vector<RadialTerm>& radial() const { return radial_; }

    double eval(const std::vector<double>& q) const;
    void add_gradient(const std::vector<double>& q, std::vector<double>& g) const;

private:
    int n_;
    std::vector<PolyTerm> poly_;
    std::vector<RadialTerm> radial_;
};

// qdot = p/u, pdot = -V'(q), udot = -(p . V'(q))/u
PhaseDerivative relativistic_rhs(const PhaseState& state, const PotentialModel& V);
// qdot = p, pdot = -V'(q), udot = 0
PhaseDerivative classical_rhs(const PhaseState& state, const PotentialModel& V);

double energy(Kinetic kin, const PotentialModel& V, const PhaseState& s);
double casimir(const PhaseState& s);            // u^2 - |p|^2
double angular_momentum(const PhaseState& s);   // q1 p2 - q2 p1, n = 2

struct IntegratorSettings {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    long long max_steps = 500000000LL;
    double initial_step = 0.0;  // 0: automatic
};

struct IntegrationError : std::runtime_error {
    enum class Code { StepSizeUnderflow, MaxStepsExceeded, Divergence, BadInput };
    Code code;
    IntegrationError(Code c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

struct Trajectory {
    std::vector<PhaseState> samples;  // start, uniform interior samples, end
    double energy_drift = 0.0;        // max |H - H(0)| over accepted steps
    double casimir_drift = 0.0;       // max |(u^2-|p|^2) - initial|
    double l_drift = 0.0;             // max |L - L(0)|, n = 2 only
    long long steps = 0;
};

// Adaptive embedded Dormand-Prince 5(4) with PI step control. t_end may be
// smaller than the start time (backward integration). sample_count > 0 adds
// that many uniformly spaced interior states via dense interpolation.
Trajectory integrate(Kinetic kin, const PotentialModel& V, const PhaseState& start, double t_end,
                     const IntegratorSettings& settings = {}, int sample_count = 0);

struct SectionSpec {
    int plane_index = 0;              // section plane q[plane_index] = 0
    int positive_momentum_index = 0;  // only crossings with p[index] > 0
};

struct SectionPoint {
    double t;
    double q2, p2;  // the coordinates transverse to the section plane
    double energy;
    int crossing_index;
    double plane_residual;  // |q[plane]| at the refined crossing
};

struct OrbitSection {
    PhaseState initial;
    std::vector<SectionPoint> points;
    double energy_drift = 0.0;
    double casimir_drift = 0.0;
};

// Crossings of q[plane] = 0 with positive momentum, refined on-trajectory to
// |q[plane]| <= 1e-12 (sign-change bracketing, then Newton with qdot after
// re-integration from the last accepted step). Each seed must lie on the
// requested energy level to 1e-9; per-orbit energy drift above 1e-7 aborts.
std::vector<OrbitSection> poincare_section(const PotentialModel& V, Kinetic kin,
                                           const std::vector<PhaseState>& seeds,
                                           double energy_level, double t_end,
                                           const SectionSpec& spec = {},
                                           const IntegratorSettings& settings = {});

// Straight-line solution q(t) = phi(t) d along a Darboux direction:
// phidd = -gamma (1 - phidot^2 d^2)^(3/2) phi^(k-1), with energy integral
// h = 1/(d^2 sqrt(1 - phidot^2 d^2)) + (gamma/k) phi^k.
struct LineSolutionParams {
    std::vector<double> d;
    double gamma = 1.0;
    int k = 2;
    double energy_e = 0.0;
    double d2 = 1.0;  // |d|^2
    double s = 0.0;   // d2 * energy_e
};

double line_solution_rhs(double phi, double phidot, const LineSolutionParams& params);
double line_energy(double phi, double phidot, const LineSolutionParams& params);

// Coefficients of the variational equation along the line solution after
// the independent-variable change z ~ phi^k, and of its reduced form
// w'' = r(z) w. Poles sit at z = 0, z = s -/+ 1.
Complex variational_coefficient_p(int k, double s, const Complex& z);
Complex variational_coefficient_q(int k, const Complex& lambda, double s, const Complex& z);
Complex variational_coefficient_r(int k, const Complex& lambda, double s, const Complex& z);

}  // namespace relint
