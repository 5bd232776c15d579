#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "relint/darboux.hpp"
#include "relint/dynamics.hpp"
#include "relint/galois.hpp"
#include "relint/integer_sets.hpp"
#include "relint/potential_io.hpp"

namespace py = pybind11;
using namespace relint;

namespace {

py::object pyint(const BigInt& v) {
    return py::reinterpret_steal<py::object>(PyLong_FromString(to_string(v).c_str(), nullptr, 10));
}

BigInt bigint_from(const py::object& o) {
    return BigInt(py::str(o).cast<std::string>());
}

py::object pyrational(const Rational& r) {
    py::object fractions = py::module_::import("fractions");
    return fractions.attr("Fraction")(pyint(r.get_num()), pyint(r.get_den()));
}

Rational rational_from(const py::object& o) {
    if (py::isinstance<py::int_>(o)) return Rational(bigint_from(o));
    py::object num = o.attr("numerator"), den = o.attr("denominator");
    return Rational(bigint_from(num), bigint_from(den));
}

HomogeneousPotential potential_from(const py::object& src) {
    if (py::isinstance<py::str>(src)) return load_potential_file(src.cast<std::string>());
    // dict: {"n":, "k":, "monomials": [(complex, [e...]), ...]}
    py::dict d = src.cast<py::dict>();
    std::vector<Monomial> ms;
    for (auto item : d["monomials"].cast<py::list>()) {
        py::tuple t = item.cast<py::tuple>();
        ms.push_back({t[0].cast<Complex>(), t[1].cast<std::vector<int>>()});
    }
    return HomogeneousPotential(d["n"].cast<int>(), d["k"].cast<int>(), std::move(ms));
}

py::dict witness_dict(const MembershipWitness& w) {
    py::dict d;
    d["member"] = w.member;
    d["set"] = jset_name(w.set_name);
    d["p"] = w.witness_p ? pyint(*w.witness_p) : py::object(py::none());
    d["value"] = pyint(w.value);
    return d;
}

py::dict point_dict(const DarbouxPoint& pt) {
    py::dict d;
    d["d"] = pt.d;
    d["gamma"] = pt.gamma;
    d["residual"] = pt.residual;
    d["multiplicity"] = pt.multiplicity;
    d["continuum"] = pt.continuum;
    return d;
}

py::dict spectrum_dict(const SpectrumReport& rep) {
    py::dict d;
    d["trivial"] = rep.trivial_eigenvalue;
    d["nontrivial"] = rep.nontrivial;
    py::list rats;
    for (const auto& r : rep.nontrivial_rational)
        rats.append(r ? pyrational(*r) : py::object(py::none()));
    d["rational"] = rats;
    d["all_rational"] = rep.all_rational;
    d["all_integer"] = rep.all_integer;
    return d;
}

py::dict hit_dict(const FamilyHit& h) {
    py::dict d;
    d["row"] = h.row_id;
    d["p"] = h.parameter_p ? pyint(*h.parameter_p) : py::object(py::none());
    d["k"] = (long long)h.k;
    d["lambda"] = pyrational(h.lambda);
    return d;
}

py::dict verdict_dict(const IntegrabilityVerdict& v) {
    py::dict d;
    d["k"] = (long long)v.k;
    d["passes"] = v.overall == IntegrabilityVerdict::Overall::PassesNecessaryConditions;
    d["explanation"] = v.explanation;
    py::list evs;
    for (const auto& ev : v.per_eigenvalue) {
        py::dict e;
        e["lambda"] = ev.lambda;
        e["integer"] =
            ev.integer_reconstruction ? pyint(*ev.integer_reconstruction) : py::object(py::none());
        e["rational"] = ev.rational_reconstruction ? pyrational(*ev.rational_reconstruction)
                                                   : py::object(py::none());
        e["passes"] = ev.passes;
        e["reason"] = ev.reason;
        py::list mems;
        for (const auto& m : ev.memberships) mems.append(witness_dict(m));
        e["memberships"] = mems;
        evs.append(e);
    }
    d["eigenvalues"] = evs;
    return d;
}

PotentialModel model_from(const py::object& src, const py::object& radial) {
    std::vector<PotentialModel::PolyTerm> poly;
    int n = 2;
    if (py::isinstance<py::dict>(src) || py::isinstance<py::str>(src)) {
        auto m = PotentialModel::from_homogeneous(potential_from(src));
        n = m.n();
        poly = m.poly();
    } else if (!src.is_none()) {
        for (auto item : src.cast<py::list>()) {
            py::tuple t = item.cast<py::tuple>();
            poly.push_back({t[0].cast<double>(), t[1].cast<std::vector<int>>()});
        }
    }
    std::vector<PotentialModel::RadialTerm> rad;
    if (!radial.is_none())
        for (auto item : radial.cast<py::list>()) {
            py::tuple t = item.cast<py::tuple>();
            rad.push_back({t[0].cast<double>(), t[1].cast<int>()});
        }
    return PotentialModel(n, std::move(poly), std::move(rad));
}

Kinetic kinetic_from(const std::string& s) {
    if (s == "rel" || s == "relativistic") return Kinetic::Relativistic;
    if (s == "classical") return Kinetic::Classical;
    throw std::invalid_argument("kinetic must be 'rel' or 'classical'");
}

}  // namespace

PYBIND11_MODULE(_relint, m) {
    m.doc() = "integrability conditions and dynamics for relativistic Hamiltonian systems "
              "with homogeneous potentials";

    // --- algebra / darboux ---
    m.def("eval_potential",
          [](const py::object& V, const CVector& q) { return eval(potential_from(V), q); },
          py::arg("potential"), py::arg("q"));
    m.def("gradient",
          [](const py::object& V, const CVector& q) { return gradient(potential_from(V), q); },
          py::arg("potential"), py::arg("q"));
    m.def("hessian",
          [](const py::object& V, const CVector& q) {
              auto H = hessian(potential_from(V), q);
              std::vector<std::vector<Complex>> out(H.rows(), std::vector<Complex>(H.cols()));
              for (int i = 0; i < H.rows(); ++i)
                  for (int j = 0; j < H.cols(); ++j) out[i][j] = H(i, j);
              return out;
          },
          py::arg("potential"), py::arg("q"));

    m.def("darboux_points",
          [](const py::object& Vsrc) {
              auto V = potential_from(Vsrc);
              py::list out;
              for (const auto& pt : find_darboux_points(V)) {
                  py::dict d = point_dict(pt);
                  d["spectrum"] = spectrum_dict(spectrum(V, pt));
                  out.append(d);
              }
              return out;
          },
          py::arg("potential"));

    m.def("universal_relation", &universal_relation, py::arg("lambdas"));

    m.def("check_potential",
          [](const py::object& Vsrc, bool explain) {
              auto V = potential_from(Vsrc);
              std::vector<SpectrumReport> spectra;
              py::list pts;
              for (const auto& pt : find_darboux_points(V)) {
                  spectra.push_back(spectrum(V, pt));
                  py::dict d = point_dict(pt);
                  d["spectrum"] = spectrum_dict(spectra.back());
                  pts.append(d);
              }
              py::dict out = verdict_dict(main_theorem_verdict(V.k(), spectra, explain));
              out["darboux_points"] = pts;
              return out;
          },
          py::arg("potential"), py::arg("explain") = false);

    // --- integer sets ---
    m.def("f_pm",
          [](long k, const py::object& p, const std::string& sign) {
              auto f = f_pm(k, bigint_from(p), sign == "+" ? Sign::Plus : Sign::Minus);
              py::dict d;
              d["is_integer"] = f.is_integer;
              d["value"] = f.is_integer ? pyint(f.value) : py::object(py::none());
              d["approx"] = f.approx;
              return d;
          },
          py::arg("k"), py::arg("p"), py::arg("sign"));
    m.def("in_j",
          [](long k, const py::object& lam) { return witness_dict(in_J_pm(k, bigint_from(lam))); },
          py::arg("k"), py::arg("lam"));
    m.def("in_j_small",
          [](int k, const py::object& lam) {
              return witness_dict(in_J_k_small(k, bigint_from(lam)));
          },
          py::arg("k"), py::arg("lam"));
    m.def("jset",
          [](long k, int count) {
              py::list out;
              for (const auto& v : enumerate_J_pm(k, count)) out.append(pyint(v));
              return out;
          },
          py::arg("k"), py::arg("count"));
    m.def("jset_via_pell",
          [](long k, int count) {
              py::list out;
              for (const auto& v : enumerate_J_pm_via_pell(k, count)) out.append(pyint(v));
              return out;
          },
          py::arg("k"), py::arg("count"));
    m.def("jscan",
          [](long k, long long pbound) {
              auto scan = integer_density_scan(k, pbound);
              py::dict d;
              d["count"] = scan.hit_count;
              d["hit_ps"] = scan.hit_ps;
              return d;
          },
          py::arg("k"), py::arg("pbound"));
    m.def("pell_fundamental",
          [](const py::object& D) {
              auto s = pell_fundamental(bigint_from(D));
              return py::make_tuple(pyint(s.U), pyint(s.V));
          },
          py::arg("D"));
    m.def("is_triangular", [](const py::object& t) { return is_triangular(bigint_from(t)); });
    m.def("is_square_triangular",
          [](const py::object& t) { return is_square_triangular(bigint_from(t)); });

    // --- galois tables ---
    auto hits_out = [](const std::vector<FamilyHit>& hits) {
        py::list out;
        for (const auto& h : hits) out.append(hit_dict(h));
        return out;
    };
    m.def("check_thm2",
          [hits_out](long k, const py::object& lam) {
              return hits_out(check_thm2(k, rational_from(lam)));
          },
          py::arg("k"), py::arg("lam"));
    m.def("check_generic_level",
          [hits_out](long k, const py::object& lam) {
              auto res = check_generic_level(k, rational_from(lam));
              py::dict d;
              d["hits"] = hits_out(res.hits);
              d["partial_table"] = res.partial_table;
              return d;
          },
          py::arg("k"), py::arg("lam"));
    m.def("check_special_level",
          [hits_out](long k, const py::object& lam) {
              return hits_out(check_special_level(k, rational_from(lam)));
          },
          py::arg("k"), py::arg("lam"));
    m.def("riemann_exponents",
          [](long k, double lam) {
              auto e = riemann_exponents(k, lam);
              return py::make_tuple(e.rho, e.sigma, e.tau);
          },
          py::arg("k"), py::arg("lam"));
    m.def("kimura_solvable",
          [](const Complex& rho, const Complex& sigma, const Complex& tau) {
              auto r = kimura_solvable(rho, sigma, tau);
              py::dict d;
              d["solvable"] = r.solvable;
              d["case"] = r.kind == KimuraResult::Kind::ConditionI  ? "condition-1"
                          : r.kind == KimuraResult::Kind::SchwarzRow ? "schwarz-row"
                                                                     : "none";
              d["row"] = r.schwarz_row;
              return d;
          },
          py::arg("rho"), py::arg("sigma"), py::arg("tau"));

    // --- dynamics ---
    m.def("integrate",
          [](const py::object& poly, const py::object& radial, const std::string& kinetic,
             std::vector<double> q0, std::vector<double> p0, double t_end, double tol,
             int samples) {
              auto V = model_from(poly, radial);
              PhaseState s0;
              s0.q = std::move(q0);
              s0.p = std::move(p0);
              s0.u = std::sqrt(1.0 + s0.p[0] * s0.p[0] + s0.p[1] * s0.p[1]);
              IntegratorSettings set;
              set.abs_tol = set.rel_tol = tol;
              auto tr = integrate(kinetic_from(kinetic), V, s0, t_end, set, samples);
              py::list states;
              for (const auto& s : tr.samples) {
                  py::dict d;
                  d["t"] = s.t;
                  d["q"] = s.q;
                  d["p"] = s.p;
                  d["u"] = s.u;
                  states.append(d);
              }
              py::dict out;
              out["samples"] = states;
              out["energy_drift"] = tr.energy_drift;
              out["casimir_drift"] = tr.casimir_drift;
              out["l_drift"] = tr.l_drift;
              out["steps"] = tr.steps;
              return out;
          },
          py::arg("poly"), py::arg("radial"), py::arg("kinetic"), py::arg("q0"), py::arg("p0"),
          py::arg("t_end"), py::arg("tol") = 1e-10, py::arg("samples") = 0);

    m.def("poincare_section",
          [](const py::object& poly, const py::object& radial, const std::string& kinetic,
             const std::vector<std::vector<double>>& seeds, double energy, double t_end,
             double tol) {
              auto V = model_from(poly, radial);
              Kinetic kin = kinetic_from(kinetic);
              std::vector<PhaseState> states;
              for (const auto& s : seeds) {
                  if (s.size() != 4)
                      throw std::invalid_argument("each seed is [q1, q2, p1, p2]");
                  PhaseState st;
                  st.q = {s[0], s[1]};
                  st.p = {s[2], s[3]};
                  st.u = std::sqrt(1.0 + s[2] * s[2] + s[3] * s[3]);
                  states.push_back(st);
              }
              IntegratorSettings set;
              set.abs_tol = set.rel_tol = tol;
              auto orbits = poincare_section(V, kin, states, energy, t_end, {}, set);
              py::list out;
              for (const auto& orb : orbits) {
                  py::dict d;
                  py::list pts;
                  for (const auto& pt : orb.points)
                      pts.append(py::make_tuple(pt.t, pt.q2, pt.p2));
                  d["points"] = pts;
                  d["energy_drift"] = orb.energy_drift;
                  d["casimir_drift"] = orb.casimir_drift;
                  out.append(d);
              }
              return out;
          },
          py::arg("poly"), py::arg("radial"), py::arg("kinetic"), py::arg("seeds"),
          py::arg("energy"), py::arg("t_end"), py::arg("tol") = 1e-10);

    m.def("variational_r",
          [](int k, const Complex& lam, double s, const Complex& z) {
              return variational_coefficient_r(k, lam, s, z);
          },
          py::arg("k"), py::arg("lam"), py::arg("s"), py::arg("z"));

    m.attr("__version__") = "0.1.0";
}
