#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "relint/dynamics.hpp"
#include "relint/galois.hpp"
#include "relint/integer_sets.hpp"
#include "relint/potential_io.hpp"

using namespace relint;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------------------
// run configuration; serialised into the manifest written next to results

struct RunConfig {
    std::string command;
    std::string potential_path;
    std::string system;  // kepler | oscillator | henon | cartesian
    std::string kinetic = "rel";
    std::string format;
    std::string out;
    bool explain = false;
    long k = 3;
    int count = 7;
    long long pbound = 1000;
    double mu = -0.25, alpha = 1.0, beta = 0.5;
    int cdeg = 10;
    std::optional<double> energy;
    std::optional<double> denergy;
    double tend = 1000.0;
    int orbits = 8;
    std::optional<double> q2min, q2max;
    double p2 = 0.0;
    std::vector<double> q0, p0;
    int samples = 1000;
    double abs_tol = 1e-10, rel_tol = 1e-10;
};

json config_to_json(const RunConfig& c) {
    json j;
    j["version"] = kVersion;
    j["command"] = c.command;
    if (!c.potential_path.empty()) j["potential"] = c.potential_path;
    if (!c.system.empty()) j["system"] = c.system;
    j["kinetic"] = c.kinetic;
    if (!c.format.empty()) j["format"] = c.format;
    if (!c.out.empty()) j["out"] = c.out;
    j["explain"] = c.explain;
    j["k"] = c.k;
    j["count"] = c.count;
    j["pbound"] = c.pbound;
    j["mu"] = c.mu;
    j["alpha"] = c.alpha;
    j["beta"] = c.beta;
    j["cdeg"] = c.cdeg;
    if (c.energy) j["energy"] = *c.energy;
    if (c.denergy) j["denergy"] = *c.denergy;
    j["tend"] = c.tend;
    j["orbits"] = c.orbits;
    if (c.q2min) j["q2min"] = *c.q2min;
    if (c.q2max) j["q2max"] = *c.q2max;
    j["p2"] = c.p2;
    j["q0"] = c.q0;
    j["p0"] = c.p0;
    j["samples"] = c.samples;
    j["abs_tol"] = c.abs_tol;
    j["rel_tol"] = c.rel_tol;
    return j;
}

RunConfig config_from_json(const json& j) {
    RunConfig c;
    c.command = j.at("command").get<std::string>();
    if (j.contains("potential")) c.potential_path = j["potential"].get<std::string>();
    if (j.contains("system")) c.system = j["system"].get<std::string>();
    c.kinetic = j.value("kinetic", std::string("rel"));
    c.format = j.value("format", std::string());
    c.out = j.value("out", std::string());
    c.explain = j.value("explain", false);
    c.k = j.value("k", 3L);
    c.count = j.value("count", 7);
    c.pbound = j.value("pbound", 1000LL);
    c.mu = j.value("mu", -0.25);
    c.alpha = j.value("alpha", 1.0);
    c.beta = j.value("beta", 0.5);
    c.cdeg = j.value("cdeg", 10);
    if (j.contains("energy")) c.energy = j["energy"].get<double>();
    if (j.contains("denergy")) c.denergy = j["denergy"].get<double>();
    c.tend = j.value("tend", 1000.0);
    c.orbits = j.value("orbits", 8);
    if (j.contains("q2min")) c.q2min = j["q2min"].get<double>();
    if (j.contains("q2max")) c.q2max = j["q2max"].get<double>();
    c.p2 = j.value("p2", 0.0);
    if (j.contains("q0")) c.q0 = j["q0"].get<std::vector<double>>();
    if (j.contains("p0")) c.p0 = j["p0"].get<std::vector<double>>();
    c.samples = j.value("samples", 1000);
    c.abs_tol = j.value("abs_tol", 1e-10);
    c.rel_tol = j.value("rel_tol", 1e-10);
    return c;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output file: " + path);
    out << content;
}

// results go to --out when given, else stdout; the manifest is written next
// to file results so a run can be replayed byte-identically
void emit(const RunConfig& c, const std::string& content) {
    if (c.out.empty()) {
        std::cout << content;
        return;
    }
    write_file(c.out, content);
    write_file(c.out + ".manifest.json", config_to_json(c).dump(2) + "\n");
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// dynamics system assembly

struct DynSystem {
    PotentialModel V;
    bool has_floor;      // V has a well at the origin (denergy usable)
    std::string label;
};

DynSystem build_system(const RunConfig& c) {
    if (!c.potential_path.empty()) {
        auto Vh = load_potential_file(c.potential_path);
        if (Vh.n() != 2) throw std::invalid_argument("dynamics commands require n = 2");
        return {PotentialModel::from_homogeneous(Vh), Vh.k() > 0, "file:" + c.potential_path};
    }
    if (c.system == "kepler")
        return {PotentialModel(2, {}, {{c.mu, -1}}), false, "kepler"};
    if (c.system == "oscillator")
        return {PotentialModel(2, {{0.5, {2, 0}}, {0.5 * c.alpha, {0, 2}}}), true, "oscillator"};
    if (c.system == "henon")
        return {PotentialModel(2, {{0.5, {2, 0}},
                                   {0.5, {0, 2}},
                                   {c.alpha, {2, 1}},
                                   {c.beta / 3.0, {0, 3}}}),
                true, "henon"};
    if (c.system == "cartesian") {
        if (c.cdeg < 2) throw std::invalid_argument("cartesian: degree must be >= 2");
        std::vector<int> e1(2, 0), e2(2, 0);
        e1[0] = c.cdeg;
        e2[1] = c.cdeg;
        return {PotentialModel(2, {{1.0, e1}, {c.alpha, e2}}), true, "cartesian"};
    }
    throw std::invalid_argument("no potential source: give --potential or --system "
                                "(kepler | oscillator | henon | cartesian)");
}

Kinetic parse_kinetic(const std::string& s) {
    if (s == "rel" || s == "relativistic") return Kinetic::Relativistic;
    if (s == "classical") return Kinetic::Classical;
    throw std::invalid_argument("kinetic must be rel or classical");
}

double resolve_energy(const RunConfig& c, const DynSystem& sys, Kinetic kin) {
    double floor = kin == Kinetic::Relativistic ? 1.0 : 0.0;
    if (c.energy) return *c.energy;
    if (c.denergy) {
        if (!sys.has_floor)
            throw std::invalid_argument("--denergy needs a potential with a well at the origin; "
                                        "use --energy");
        return floor + sys.V.eval({0.0, 0.0}) + *c.denergy;
    }
    throw std::invalid_argument("give --energy or --denergy");
}

// Seeds on the section plane q1 = 0 at transverse momentum p2: q2 is placed
// on an even grid over the inner 80% of the feasible segment (p1^2 > 0),
// found by sampling. Cut the grid off away from r = 0 for singular radial
// potentials.
std::vector<PhaseState> build_seeds(const RunConfig& c, const DynSystem& sys, Kinetic kin,
                                    double E) {
    double floor_kin = kin == Kinetic::Relativistic ? 1.0 : 0.0;
    auto p1sq_at = [&](double q2) {
        double v = sys.V.eval({0.0, q2});
        if (kin == Kinetic::Relativistic) {
            double u = E - v;
            return u < floor_kin ? -1.0 : u * u - 1.0 - c.p2 * c.p2;
        }
        return 2.0 * (E - v) - c.p2 * c.p2;
    };

    bool singular_origin = false;
    for (const auto& t : sys.V.radial())
        if (t.k < 0) singular_origin = true;

    double lo, hi;
    if (c.q2min && c.q2max) {
        lo = *c.q2min;
        hi = *c.q2max;
    } else {
        // the seed segment is the connected feasible component around the
        // origin (seeds beyond a saddle would escape); for potentials
        // singular at r = 0 stay on the positive side away from collision
        const double R = 50.0;
        const double step = R / 20000.0;
        auto pot = [&](double q2) { return sys.V.eval({0.0, q2}); };
        // marching also stops where V(0, q2) starts to decrease: past a
        // saddle the energetically allowed region is an escape channel
        if (singular_origin) {
            double q = 5e-3;
            while (q <= R && p1sq_at(q) <= 1e-12) q += step;
            if (q > R) throw std::invalid_argument("no feasible section seeds at this energy");
            double qa = q, qb = q;
            while (qb + step <= R && p1sq_at(qb + step) > 1e-12 &&
                   pot(qb + step) >= pot(qb) - 1e-12)
                qb += step;
            lo = std::max(0.35 * qb, qa);
            hi = 0.9 * qb;
        } else {
            if (p1sq_at(0.0) <= 1e-12)
                throw std::invalid_argument(
                    "the origin is not on this energy level; give --q2min/--q2max");
            double qp = 0.0, qm = 0.0;
            while (qp + step <= R && p1sq_at(qp + step) > 1e-12 &&
                   pot(qp + step) >= pot(qp) - 1e-12)
                qp += step;
            while (qm - step >= -R && p1sq_at(qm - step) > 1e-12 &&
                   pot(qm - step) >= pot(qm) - 1e-12)
                qm -= step;
            double span = qp - qm;
            lo = qm + 0.1 * span;
            hi = qp - 0.1 * span;
        }
    }

    std::vector<PhaseState> seeds;
    for (int i = 0; i < c.orbits; ++i) {
        double q2 = c.orbits == 1 ? 0.5 * (lo + hi)
                                  : lo + (hi - lo) * double(i) / double(c.orbits - 1);
        double s = p1sq_at(q2);
        if (s <= 1e-12) continue;
        PhaseState st;
        st.q = {0.0, q2};
        st.p = {std::sqrt(s), c.p2};
        st.u = kin == Kinetic::Relativistic ? (E - sys.V.eval(st.q)) : 1.0;
        seeds.push_back(st);
    }
    if (seeds.empty()) throw std::invalid_argument("no feasible section seeds at this energy");
    return seeds;
}

int thread_count() {
    const char* env = std::getenv("RELINT_THREADS");
    if (!env) return 1;
    int n = std::atoi(env);
    return n > 0 ? n : 1;
}

// ---------------------------------------------------------------------------
// commands

int cmd_check(const RunConfig& c) {
    auto V = load_potential_file(c.potential_path);
    std::vector<DarbouxPoint> points;
    std::vector<SpectrumReport> spectra;
    if (V.n() == 2) {
        points = find_darboux_points(V);
        for (const auto& pt : points) spectra.push_back(spectrum(V, pt));
    } else {
        throw std::invalid_argument("check: built-in Darboux solving requires n = 2");
    }
    auto verdict = main_theorem_verdict(V.k(), spectra, c.explain);

    std::string text;
    if (c.format == "json")
        text = verdict_report_json(verdict, points, spectra) + "\n";
    else
        text = verdict_report_text(verdict, points, spectra, c.explain);
    emit(c, text);
    return verdict.overall == IntegrabilityVerdict::Overall::PassesNecessaryConditions ? 0 : 1;
}

int cmd_jset(const RunConfig& c) {
    auto elems = enumerate_J_pm(c.k, c.count);
    std::ostringstream os;
    if (c.format == "json") {
        json j;
        j["k"] = c.k;
        j["count"] = c.count;
        j["elements"] = json::array();
        for (const auto& v : elems) {
            auto w = in_J_pm(c.k, v);
            json e;
            e["value"] = to_string(v);
            e["set"] = jset_name(w.set_name);
            e["p"] = w.witness_p ? json(to_string(*w.witness_p)) : json(nullptr);
            j["elements"].push_back(e);
        }
        os << j.dump(2) << "\n";
    } else {
        for (const auto& v : elems) os << to_string(v) << "\n";
    }
    emit(c, os.str());
    return 0;
}

int cmd_jscan(const RunConfig& c) {
    auto scan = integer_density_scan(c.k, c.pbound);
    std::ostringstream os;
    if (c.format == "json") {
        json j;
        j["k"] = c.k;
        j["pbound"] = c.pbound;
        j["count"] = scan.hit_count;
        j["hits"] = json::array();
        for (long long p : scan.hit_ps) {
            json h;
            h["p"] = p;
            auto fm = f_pm(c.k, BigInt((long)p), Sign::Minus);
            auto fp = f_pm(c.k, BigInt((long)p), Sign::Plus);
            h["f-"] = to_string(fm.value);
            h["f+"] = to_string(fp.value);
            j["hits"].push_back(h);
        }
        os << j.dump(2) << "\n";
    } else {
        os << scan.hit_count << "\n";
    }
    emit(c, os.str());
    return 0;
}

std::string section_csv(const std::vector<OrbitSection>& orbits) {
    std::ostringstream os;
    os << "orbit_id,crossing_index,t,q2,p2,energy,casimir_drift\n";
    for (size_t i = 0; i < orbits.size(); ++i)
        for (const auto& pt : orbits[i].points)
            os << i << "," << pt.crossing_index << "," << fmt17(pt.t) << "," << fmt17(pt.q2)
               << "," << fmt17(pt.p2) << "," << fmt17(pt.energy) << ","
               << fmt17(orbits[i].casimir_drift) << "\n";
    return os.str();
}

std::string section_svg(const std::vector<OrbitSection>& orbits) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& o : orbits)
        for (const auto& pt : o.points) {
            xmin = std::min(xmin, pt.q2);
            xmax = std::max(xmax, pt.q2);
            ymin = std::min(ymin, pt.p2);
            ymax = std::max(ymax, pt.p2);
        }
    if (xmin > xmax) xmin = ymin = -1, xmax = ymax = 1;
    double padx = 0.05 * (xmax - xmin + 1e-12), pady = 0.05 * (ymax - ymin + 1e-12);
    xmin -= padx;
    xmax += padx;
    ymin -= pady;
    ymax += pady;
    const int W = 800, H = 800;
    auto X = [&](double x) { return (x - xmin) / (xmax - xmin) * W; };
    auto Y = [&](double y) { return H - (y - ymin) / (ymax - ymin) * H; };
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    char buf[160];
    if (xmin < 0 && xmax > 0) {
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.6f\" y1=\"0\" x2=\"%.6f\" y2=\"%d\" stroke=\"black\"/>\n",
                      X(0), X(0), H);
        os << buf;
    }
    if (ymin < 0 && ymax > 0) {
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"0\" y1=\"%.6f\" x2=\"%d\" y2=\"%.6f\" stroke=\"black\"/>\n",
                      Y(0), W, Y(0));
        os << buf;
    }
    for (size_t i = 0; i < orbits.size(); ++i)
        for (const auto& pt : orbits[i].points) {
            std::snprintf(buf, sizeof buf,
                          "<circle cx=\"%.6f\" cy=\"%.6f\" r=\"1.2\" fill=\"black\"/>\n",
                          X(pt.q2), Y(pt.p2));
            os << buf;
        }
    os << "</svg>\n";
    return os.str();
}

int cmd_poincare(const RunConfig& c) {
    auto sys = build_system(c);
    Kinetic kin = parse_kinetic(c.kinetic);
    double E = resolve_energy(c, sys, kin);
    auto seeds = build_seeds(c, sys, kin, E);

    IntegratorSettings settings;
    settings.abs_tol = c.abs_tol;
    settings.rel_tol = c.rel_tol;

    int threads = thread_count();
    std::vector<OrbitSection> orbits(seeds.size());
    if (threads <= 1) {
        auto all = poincare_section(sys.V, kin, seeds, E, c.tend, {}, settings);
        orbits = std::move(all);
    } else {
        std::vector<std::future<OrbitSection>> futs;
        for (const auto& seed : seeds)
            futs.push_back(std::async(std::launch::async, [&, seed]() {
                return poincare_section(sys.V, kin, {seed}, E, c.tend, {}, settings)[0];
            }));
        for (size_t i = 0; i < futs.size(); ++i) orbits[i] = futs[i].get();
    }

    std::string text;
    if (c.format == "svg")
        text = section_svg(orbits);
    else if (c.format == "json") {
        json j = json::array();
        for (size_t i = 0; i < orbits.size(); ++i) {
            json o;
            o["orbit"] = i;
            o["energy_drift"] = orbits[i].energy_drift;
            o["casimir_drift"] = orbits[i].casimir_drift;
            o["points"] = json::array();
            for (const auto& pt : orbits[i].points)
                o["points"].push_back({{"t", pt.t}, {"q2", pt.q2}, {"p2", pt.p2}});
            j.push_back(o);
        }
        text = j.dump(2) + "\n";
    } else {
        text = section_csv(orbits);
    }
    emit(c, text);
    return 0;
}

int cmd_simulate(const RunConfig& c) {
    auto sys = build_system(c);
    Kinetic kin = parse_kinetic(c.kinetic);
    if (c.q0.size() != 2 || c.p0.size() != 2)
        throw std::invalid_argument("simulate needs --q0 a,b and --p0 a,b");
    PhaseState s0;
    s0.q = c.q0;
    s0.p = c.p0;
    s0.u = std::sqrt(1.0 + c.p0[0] * c.p0[0] + c.p0[1] * c.p0[1]);

    IntegratorSettings settings;
    settings.abs_tol = c.abs_tol;
    settings.rel_tol = c.rel_tol;
    auto traj = integrate(kin, sys.V, s0, c.tend, settings, c.samples);

    std::ostringstream os;
    os << "t,q1,q2,p1,p2,u,energy,casimir\n";
    for (const auto& s : traj.samples)
        os << fmt17(s.t) << "," << fmt17(s.q[0]) << "," << fmt17(s.q[1]) << "," << fmt17(s.p[0])
           << "," << fmt17(s.p[1]) << "," << fmt17(s.u) << ","
           << fmt17(energy(kin, sys.V, s)) << "," << fmt17(casimir(s)) << "\n";
    emit(c, os.str());
    return 0;
}

int dispatch(const RunConfig& c) {
    if (c.command == "check") return cmd_check(c);
    if (c.command == "jset") return cmd_jset(c);
    if (c.command == "jscan") return cmd_jscan(c);
    if (c.command == "poincare") return cmd_poincare(c);
    if (c.command == "simulate") return cmd_simulate(c);
    throw std::invalid_argument("unknown command: " + c.command);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"relint: integrability conditions and dynamics for relativistic "
                 "Hamiltonian systems with homogeneous potentials"};
    app.require_subcommand(0, 1);

    std::string manifest_path;
    app.add_option("--manifest", manifest_path,
                   "replay a run from a manifest file (ignores other options)");

    RunConfig c;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", c.format, "output format");
        sub->add_option("--out", c.out, "output path (default stdout); also writes "
                                        "<out>.manifest.json");
    };
    auto add_dynamics = [&](CLI::App* sub) {
        sub->add_option("--potential", c.potential_path, "potential JSON file");
        sub->add_option("--system", c.system, "built-in system: kepler|oscillator|henon|cartesian");
        sub->add_option("--kinetic", c.kinetic, "rel | classical")->capture_default_str();
        sub->add_option("--mu", c.mu, "kepler strength")->capture_default_str();
        sub->add_option("--alpha", c.alpha, "system parameter alpha")->capture_default_str();
        sub->add_option("--beta", c.beta, "system parameter beta")->capture_default_str();
        sub->add_option("--cdeg", c.cdeg, "cartesian degree")->capture_default_str();
        sub->add_option("--energy", c.energy, "absolute energy level");
        sub->add_option("--denergy", c.denergy, "energy above the minimum");
        sub->add_option("--tend", c.tend, "integration time")->capture_default_str();
        sub->add_option("--abs-tol", c.abs_tol, "integrator absolute tolerance")
            ->capture_default_str();
        sub->add_option("--rel-tol", c.rel_tol, "integrator relative tolerance")
            ->capture_default_str();
    };

    auto* check = app.add_subcommand("check", "Darboux spectra and the integrability verdict");
    check->add_option("--potential", c.potential_path, "potential JSON file")->required();
    check->add_flag("--explain", c.explain, "include per-table diagnostics");
    add_common(check);

    auto* jset = app.add_subcommand("jset", "enumerate the admissible integer set for k");
    jset->add_option("--k", c.k, "degree")->required();
    jset->add_option("--count", c.count, "number of elements")->capture_default_str();
    add_common(jset);

    auto* jscan = app.add_subcommand("jscan", "count integer values of f(k,p) for |p| <= pbound");
    jscan->add_option("--k", c.k, "degree")->required();
    jscan->add_option("--pbound", c.pbound, "parameter bound")->capture_default_str();
    add_common(jscan);

    auto* poin = app.add_subcommand("poincare", "Poincare section on the plane q1 = 0, p1 > 0");
    add_dynamics(poin);
    poin->add_option("--orbits", c.orbits, "number of seed orbits")->capture_default_str();
    poin->add_option("--q2min", c.q2min, "seed grid lower bound");
    poin->add_option("--q2max", c.q2max, "seed grid upper bound");
    poin->add_option("--p2", c.p2, "transverse momentum of seeds")->capture_default_str();
    add_common(poin);

    auto* sim = app.add_subcommand("simulate", "integrate one trajectory and emit CSV");
    add_dynamics(sim);
    sim->add_option("--q0", c.q0, "initial position (two values)")->expected(2);
    sim->add_option("--p0", c.p0, "initial momentum (two values)")->expected(2);
    sim->add_option("--samples", c.samples, "number of interior samples")->capture_default_str();
    add_common(sim);

    CLI11_PARSE(app, argc, argv);

    try {
        if (!manifest_path.empty()) {
            std::ifstream in(manifest_path);
            if (!in) throw std::runtime_error("cannot open manifest: " + manifest_path);
            json j = json::parse(in);
            return dispatch(config_from_json(j));
        }
        if (app.get_subcommands().empty()) {
            std::cerr << app.help();
            return 2;
        }
        c.command = app.get_subcommands()[0]->get_name();
        return dispatch(c);
    } catch (const PotentialParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IntegrationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
