#include "relint/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace relint {

namespace {

double ipow_d(double x, int e) {
    if (e < 0) return 1.0 / ipow_d(x, -e);
    double r = 1.0, b = x;
    int n = e;
    while (n) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

Complex ipow_c(const Complex& x, int e) {
    if (e < 0) return Complex(1.0, 0.0) / ipow_c(x, -e);
    Complex r(1.0, 0.0), b = x;
    int n = e;
    while (n) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

void check_state(const PhaseState& s, const PotentialModel& V) {
    if ((int)s.q.size() != V.n() || (int)s.p.size() != V.n())
        throw IntegrationError(IntegrationError::Code::BadInput, "state dimension mismatch");
    for (double v : s.q)
        if (!std::isfinite(v)) throw IntegrationError(IntegrationError::Code::BadInput, "non-finite q");
    for (double v : s.p)
        if (!std::isfinite(v)) throw IntegrationError(IntegrationError::Code::BadInput, "non-finite p");
    if (!std::isfinite(s.u))
        throw IntegrationError(IntegrationError::Code::BadInput, "non-finite u");
}

}  // namespace

PotentialModel::PotentialModel(int n, std::vector<PolyTerm> poly, std::vector<RadialTerm> radial)
    : n_(n), poly_(std::move(poly)), radial_(std::move(radial)) {
    if (n_ < 1) throw std::invalid_argument("PotentialModel: n must be >= 1");
    for (const auto& t : poly_) {
        if ((int)t.e.size() != n_)
            throw std::invalid_argument("PotentialModel: exponent vector length != n");
        for (int e : t.e)
            if (e < 0) throw std::invalid_argument("PotentialModel: negative exponent");
    }
    for (const auto& t : radial_)
        if (t.k == 0) throw std::invalid_argument("PotentialModel: radial degree must be non-zero");
}

PotentialModel PotentialModel::from_homogeneous(const HomogeneousPotential& V) {
    std::vector<PolyTerm> terms;
    for (const auto& m : V.monomials()) {
        if (std::abs(m.coeff.imag()) > 1e-12 * std::max(1.0, std::abs(m.coeff.real())))
            throw std::invalid_argument("dynamics requires a real-coefficient potential");
        terms.push_back({m.coeff.real(), m.exponents});
    }
    return PotentialModel(V.n(), std::move(terms));
}

double PotentialModel::eval(const std::vector<double>& q) const {
    double s = 0.0;
    for (const auto& t : poly_) {
        double v = t.c;
        for (int j = 0; j < n_; ++j) v *= ipow_d(q[j], t.e[j]);
        s += v;
    }
    if (!radial_.empty()) {
        double r2 = 0.0;
        for (double x : q) r2 += x * x;
        double r = std::sqrt(r2);
        for (const auto& t : radial_) s += t.c * std::pow(r, double(t.k));
    }
    return s;
}

void PotentialModel::add_gradient(const std::vector<double>& q, std::vector<double>& g) const {
    g.assign(n_, 0.0);
    for (const auto& t : poly_) {
        for (int i = 0; i < n_; ++i) {
            int ei = t.e[i];
            if (ei == 0) continue;
            double v = t.c * ei;
            for (int j = 0; j < n_; ++j) v *= ipow_d(q[j], t.e[j] - (j == i ? 1 : 0));
            g[i] += v;
        }
    }
    if (!radial_.empty()) {
        double r2 = 0.0;
        for (double x : q) r2 += x * x;
        double r = std::sqrt(r2);
        for (const auto& t : radial_) {
            // d/dq (c r^k) = c k r^(k-2) q
            double f = t.c * t.k * std::pow(r, double(t.k - 2));
            for (int i = 0; i < n_; ++i) g[i] += f * q[i];
        }
    }
}

PhaseDerivative relativistic_rhs(const PhaseState& state, const PotentialModel& V) {
    check_state(state, V);
    PhaseDerivative d;
    std::vector<double> g;
    V.add_gradient(state.q, g);
    d.qdot.resize(V.n());
    d.pdot.resize(V.n());
    double pg = 0.0;
    for (int i = 0; i < V.n(); ++i) {
        d.qdot[i] = state.p[i] / state.u;
        d.pdot[i] = -g[i];
        pg += state.p[i] * g[i];
    }
    d.udot = -pg / state.u;
    return d;
}

PhaseDerivative classical_rhs(const PhaseState& state, const PotentialModel& V) {
    check_state(state, V);
    PhaseDerivative d;
    std::vector<double> g;
    V.add_gradient(state.q, g);
    d.qdot = state.p;
    d.pdot.resize(V.n());
    for (int i = 0; i < V.n(); ++i) d.pdot[i] = -g[i];
    d.udot = 0.0;
    return d;
}

double energy(Kinetic kin, const PotentialModel& V, const PhaseState& s) {
    if (kin == Kinetic::Relativistic) return s.u + V.eval(s.q);
    double p2 = 0.0;
    for (double v : s.p) p2 += v * v;
    return 0.5 * p2 + V.eval(s.q);
}

double casimir(const PhaseState& s) {
    double p2 = 0.0;
    for (double v : s.p) p2 += v * v;
    return s.u * s.u - p2;
}

double angular_momentum(const PhaseState& s) {
    if (s.q.size() != 2) throw std::invalid_argument("angular_momentum: n must be 2");
    return s.q[0] * s.p[1] - s.q[1] * s.p[0];
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4)

namespace {

constexpr int kStages = 7;

const double A[kStages][kStages - 1] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
const double C[kStages] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
// b5 - b4
const double E[kStages] = {71.0 / 57600,      0.0,          -71.0 / 16695, 71.0 / 1920,
                           -17253.0 / 339200, 22.0 / 525,   -1.0 / 40};

using FlatRhs = std::function<void(double, const std::vector<double>&, std::vector<double>&)>;

struct StepRecord {
    double t0 = 0, h = 0;
    std::vector<double> y0, y1, f0, f1;
};

// cubic Hermite on the last accepted step
void dense_eval(const StepRecord& st, double t, std::vector<double>& out) {
    double th = (t - st.t0) / st.h;
    double h00 = (1 + 2 * th) * (1 - th) * (1 - th);
    double h10 = th * (1 - th) * (1 - th);
    double h01 = th * th * (3 - 2 * th);
    double h11 = th * th * (th - 1);
    size_t n = st.y0.size();
    out.resize(n);
    for (size_t i = 0; i < n; ++i)
        out[i] = h00 * st.y0[i] + h10 * st.h * st.f0[i] + h01 * st.y1[i] + h11 * st.h * st.f1[i];
}

class Dopri5 {
public:
    Dopri5(FlatRhs rhs, IntegratorSettings settings) : rhs_(std::move(rhs)), set_(settings) {}

    void start(double t0, const std::vector<double>& y0, double direction) {
        t_ = t0;
        y_ = y0;
        dir_ = direction;
        f_.resize(y0.size());
        rhs_(t_, y_, f_);
        h_ = set_.initial_step != 0.0 ? std::abs(set_.initial_step) * dir_ : 1e-6 * dir_;
        err_old_ = 1e-4;
        steps_ = 0;
    }

    // one accepted step, not crossing t_limit
    const StepRecord& step(double t_limit) {
        std::vector<double> k[kStages];
        std::vector<double> ytmp(y_.size()), yerr(y_.size()), ynew(y_.size());
        k[0] = f_;
        for (;;) {
            if (++steps_ > set_.max_steps)
                throw IntegrationError(IntegrationError::Code::MaxStepsExceeded,
                                       "maximum step count exceeded");
            if (std::abs(h_) < 16 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t_)))
                throw IntegrationError(IntegrationError::Code::StepSizeUnderflow,
                                       "step size underflow at t = " + std::to_string(t_));
            double h = h_;
            if ((t_ + h - t_limit) * dir_ > 0) h = t_limit - t_;

            for (int s = 1; s < kStages; ++s) {
                for (size_t i = 0; i < y_.size(); ++i) {
                    double acc = 0.0;
                    for (int j = 0; j < s; ++j) acc += A[s][j] * k[j][i];
                    ytmp[i] = y_[i] + h * acc;
                }
                k[s].resize(y_.size());
                rhs_(t_ + C[s] * h, ytmp, k[s]);
            }
            // 5th-order solution is stage 7's argument (FSAL): ytmp now holds it
            ynew = ytmp;
            double err = 0.0;
            for (size_t i = 0; i < y_.size(); ++i) {
                double e = 0.0;
                for (int s = 0; s < kStages; ++s) e += E[s] * k[s][i];
                e *= h;
                double sc = set_.abs_tol +
                            set_.rel_tol * std::max(std::abs(y_[i]), std::abs(ynew[i]));
                err += (e / sc) * (e / sc);
            }
            err = std::sqrt(err / double(y_.size()));

            for (double v : ynew)
                if (!std::isfinite(v) || std::abs(v) > 1e12)
                    throw IntegrationError(IntegrationError::Code::Divergence,
                                           "solution diverged at t = " + std::to_string(t_));

            if (err <= 1.0) {
                rec_.t0 = t_;
                rec_.h = h;
                rec_.y0 = y_;
                rec_.f0 = k[0];
                rec_.y1 = ynew;
                rec_.f1 = k[kStages - 1];
                t_ += h;
                y_ = ynew;
                f_ = k[kStages - 1];
                // PI controller (Hairer's beta = 0.04)
                double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2) *
                             std::pow(err_old_, 0.04);
                fac = std::clamp(fac, 0.2, 5.0);
                err_old_ = std::max(err, 1e-10);
                h_ = h * fac;
                return rec_;
            }
            h_ = h * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
        }
    }

    double t() const { return t_; }
    const std::vector<double>& y() const { return y_; }
    long long steps() const { return steps_; }

private:
    FlatRhs rhs_;
    IntegratorSettings set_;
    std::vector<double> y_, f_;
    double t_ = 0, h_ = 0, dir_ = 1, err_old_ = 1e-4;
    long long steps_ = 0;
    StepRecord rec_;
};

struct FlatSystem {
    Kinetic kin;
    const PotentialModel* V;
    int n;

    // y = [q(0..n-1), p(0..n-1), u]
    void operator()(double, const std::vector<double>& y, std::vector<double>& dy) const {
        std::vector<double> q(y.begin(), y.begin() + n), g;
        V->add_gradient(q, g);
        dy.resize(2 * n + 1);
        if (kin == Kinetic::Relativistic) {
            double u = y[2 * n];
            double pg = 0.0;
            for (int i = 0; i < n; ++i) {
                dy[i] = y[n + i] / u;
                dy[n + i] = -g[i];
                pg += y[n + i] * g[i];
            }
            dy[2 * n] = -pg / u;
        } else {
            for (int i = 0; i < n; ++i) {
                dy[i] = y[n + i];
                dy[n + i] = -g[i];
            }
            dy[2 * n] = 0.0;
        }
    }
};

std::vector<double> flatten(const PhaseState& s) {
    std::vector<double> y(2 * s.q.size() + 1);
    std::copy(s.q.begin(), s.q.end(), y.begin());
    std::copy(s.p.begin(), s.p.end(), y.begin() + s.q.size());
    y.back() = s.u;
    return y;
}

PhaseState unflatten(double t, const std::vector<double>& y, int n) {
    PhaseState s;
    s.t = t;
    s.q.assign(y.begin(), y.begin() + n);
    s.p.assign(y.begin() + n, y.begin() + 2 * n);
    s.u = y[2 * n];
    return s;
}

double flat_energy(Kinetic kin, const PotentialModel& V, const std::vector<double>& y, int n) {
    std::vector<double> q(y.begin(), y.begin() + n);
    if (kin == Kinetic::Relativistic) return y[2 * n] + V.eval(q);
    double p2 = 0.0;
    for (int i = 0; i < n; ++i) p2 += y[n + i] * y[n + i];
    return 0.5 * p2 + V.eval(q);
}

double flat_casimir(const std::vector<double>& y, int n) {
    double p2 = 0.0;
    for (int i = 0; i < n; ++i) p2 += y[n + i] * y[n + i];
    return y[2 * n] * y[2 * n] - p2;
}

double flat_angmom(const std::vector<double>& y) { return y[0] * y[3] - y[1] * y[2]; }

}  // namespace

Trajectory integrate(Kinetic kin, const PotentialModel& V, const PhaseState& start, double t_end,
                     const IntegratorSettings& settings, int sample_count) {
    check_state(start, V);
    int n = V.n();
    FlatSystem sys{kin, &V, n};
    Dopri5 solver(sys, settings);

    Trajectory out;
    out.samples.push_back(start);
    if (t_end == start.t) return out;
    double dir = t_end > start.t ? 1.0 : -1.0;
    solver.start(start.t, flatten(start), dir);

    const double H0 = flat_energy(kin, V, flatten(start), n);
    const double C0 = flat_casimir(flatten(start), n);
    const double L0 = n == 2 ? flat_angmom(flatten(start)) : 0.0;

    std::vector<double> sample_ts;
    for (int i = 1; i <= sample_count; ++i)
        sample_ts.push_back(start.t + (t_end - start.t) * double(i) / double(sample_count + 1));
    size_t next_sample = 0;

    std::vector<double> tmp;
    while ((solver.t() - t_end) * dir < 0) {
        const StepRecord& st = solver.step(t_end);
        while (next_sample < sample_ts.size() &&
               (sample_ts[next_sample] - (st.t0 + st.h)) * dir <= 0) {
            dense_eval(st, sample_ts[next_sample], tmp);
            out.samples.push_back(unflatten(sample_ts[next_sample], tmp, n));
            ++next_sample;
        }
        out.energy_drift = std::max(out.energy_drift, std::abs(flat_energy(kin, V, st.y1, n) - H0));
        if (kin == Kinetic::Relativistic)
            out.casimir_drift = std::max(out.casimir_drift, std::abs(flat_casimir(st.y1, n) - C0));
        if (n == 2) out.l_drift = std::max(out.l_drift, std::abs(flat_angmom(st.y1) - L0));
    }
    out.samples.push_back(unflatten(solver.t(), solver.y(), n));
    out.steps = solver.steps();
    return out;
}

namespace {

// Integrate (exactly, with fresh adaptive steps) from a known state to t.
std::vector<double> flow_to(const FlatSystem& sys, const IntegratorSettings& settings, double t0,
                            const std::vector<double>& y0, double t1) {
    if (t1 == t0) return y0;
    Dopri5 solver(sys, settings);
    solver.start(t0, y0, t1 > t0 ? 1.0 : -1.0);
    while ((solver.t() - t1) * (t1 > t0 ? 1.0 : -1.0) < 0) solver.step(t1);
    return solver.y();
}

}  // namespace

std::vector<OrbitSection> poincare_section(const PotentialModel& V, Kinetic kin,
                                           const std::vector<PhaseState>& seeds,
                                           double energy_level, double t_end,
                                           const SectionSpec& spec,
                                           const IntegratorSettings& settings) {
    if (V.n() != 2) throw std::invalid_argument("poincare_section: n must be 2");
    const int n = 2;
    const int ip = spec.plane_index;
    const int io = 1 - ip;

    std::vector<OrbitSection> out;
    for (const auto& seed : seeds) {
        check_state(seed, V);
        double H = energy(kin, V, seed);
        if (std::abs(H - energy_level) > 1e-9)
            throw std::invalid_argument("seed off the requested energy level by " +
                                        std::to_string(H - energy_level));

        OrbitSection orb;
        orb.initial = seed;
        FlatSystem sys{kin, &V, n};
        Dopri5 solver(sys, settings);
        solver.start(seed.t, flatten(seed), 1.0);
        const double H0 = H;
        const double C0 = casimir(seed);
        int crossing = 0;

        std::vector<double> tmp;
        while ((solver.t() - t_end) < 0) {
            const StepRecord& st = solver.step(t_end);
            orb.energy_drift =
                std::max(orb.energy_drift, std::abs(flat_energy(kin, V, st.y1, n) - H0));
            if (kin == Kinetic::Relativistic)
                orb.casimir_drift =
                    std::max(orb.casimir_drift, std::abs(flat_casimir(st.y1, n) - C0));
            if (orb.energy_drift > 1e-7)
                throw IntegrationError(IntegrationError::Code::Divergence,
                                       "per-orbit energy drift exceeded 1e-7; tighten the "
                                       "integrator tolerances for this configuration");

            double g0 = st.y0[ip], g1 = st.y1[ip];
            if (!(g0 < 0.0 && g1 >= 0.0)) continue;

            // bracket the crossing on the dense output, bisection first
            double ta = st.t0, tb = st.t0 + st.h;
            for (int it = 0; it < 60 && tb - ta > 1e-14 * std::max(1.0, std::abs(tb)); ++it) {
                double tm = 0.5 * (ta + tb);
                dense_eval(st, tm, tmp);
                (tmp[ip] < 0 ? ta : tb) = tm;
            }
            // refine on-trajectory: Newton on q[ip] with qdot, re-integrating
            // from the step start
            double tc = 0.5 * (ta + tb);
            std::vector<double> yc = flow_to(sys, settings, st.t0, st.y0, tc);
            bool ok = false;
            for (int it = 0; it < 40; ++it) {
                double g = yc[ip];
                if (std::abs(g) <= 1e-12) {
                    ok = true;
                    break;
                }
                double gd = kin == Kinetic::Relativistic ? yc[n + ip] / yc[2 * n] : yc[n + ip];
                if (gd == 0.0) break;
                double tn = std::clamp(tc - g / gd, st.t0, st.t0 + st.h);
                if (tn == tc) break;
                yc = flow_to(sys, settings, tc, yc, tn);
                tc = tn;
            }
            if (ok && yc[n + spec.positive_momentum_index] > 0.0) {
                SectionPoint pt;
                pt.t = tc;
                pt.q2 = yc[io];
                pt.p2 = yc[n + io];
                pt.energy = flat_energy(kin, V, yc, n);
                pt.crossing_index = crossing++;
                pt.plane_residual = std::abs(yc[ip]);
                orb.points.push_back(pt);
            }
        }
        out.push_back(std::move(orb));
    }
    return out;
}

double line_solution_rhs(double phi, double phidot, const LineSolutionParams& params) {
    double W = 1.0 - phidot * phidot * params.d2;
    if (W <= 0.0)
        throw std::invalid_argument("line solution: |phidot| d >= 1 (superluminal)");
    return -params.gamma * std::pow(W, 1.5) * ipow_d(phi, params.k - 1);
}

double line_energy(double phi, double phidot, const LineSolutionParams& params) {
    double W = 1.0 - phidot * phidot * params.d2;
    if (W <= 0.0)
        throw std::invalid_argument("line solution: |phidot| d >= 1 (superluminal)");
    return 1.0 / (params.d2 * std::sqrt(W)) +
           params.gamma / double(params.k) * ipow_d(phi, params.k);
}

namespace {

void check_pole(int k, double s, const Complex& z) {
    double tol = 1e-12 * (1.0 + std::abs(s));
    if (std::abs(z) < tol || std::abs(z - Complex(s + 1, 0)) < tol ||
        std::abs(z - Complex(s - 1, 0)) < tol)
        throw std::invalid_argument("variational coefficient evaluated at a pole");
    if (k == 0) throw std::invalid_argument("k must be non-zero");
}

}  // namespace

Complex variational_coefficient_p(int k, double s, const Complex& z) {
    check_pole(k, s, z);
    Complex u = z - s;
    return double(k - 1) / (double(k) * z) + u / (u * u - 1.0);
}

Complex variational_coefficient_q(int k, const Complex& lambda, double s, const Complex& z) {
    check_pole(k, s, z);
    Complex u = z - s;
    return lambda * (s - z) / (double(k) * z * (u * u - 1.0));
}

Complex variational_coefficient_r(int k, const Complex& lambda, double s, const Complex& z) {
    check_pole(k, s, z);
    double dk = double(k);
    Complex u = z - s;
    Complex t1 = -Complex(dk * dk - 1.0, 0.0) / (4.0 * dk * dk * z * z);
    Complex t2 = -3.0 / (16.0 * (u - 1.0) * (u - 1.0));
    Complex t3 = -3.0 / (16.0 * (u + 1.0) * (u + 1.0));
    Complex num = z * (5.0 * dk - 4.0 + 8.0 * lambda) - 4.0 * s * (dk - 1.0 + 2.0 * lambda);
    Complex t4 = num / (8.0 * dk * z * (u * u - 1.0));
    return t1 + t2 + t3 + t4;
}

}  // namespace relint
