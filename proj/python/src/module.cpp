#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "stvac/continuation.hpp"
#include "stvac/error.hpp"
#include "stvac/exact.hpp"
#include "stvac/fg.hpp"
#include "stvac/fixtures.hpp"
#include "stvac/kid.hpp"
#include "stvac/stationary.hpp"
#include "stvac/weyl.hpp"
#ifdef STVAC_WITH_CLI
#include "commands.hpp"
#endif

namespace py = pybind11;
using namespace stvac;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// (nodes, components) array of a field
Array to_array(const TensorField& t) {
  Array out({t.nodes(), t.components()});
  auto v = out.mutable_unchecked<2>();
  for (std::size_t n = 0; n < t.nodes(); ++n)
    for (std::size_t c = 0; c < t.components(); ++c) v(n, c) = t.at(n, c);
  return out;
}

TensorField boundary_tensor(const Chart& c, const Array& a, const char* name) {
  const TensorField like(c, 0, 2, Symmetry::symmetric);
  if (a.ndim() != 2 || static_cast<std::size_t>(a.shape(0)) != like.nodes() || static_cast<std::size_t>(a.shape(1)) != like.components())
    throw InputError(std::string(name) + ": expected shape (" + std::to_string(like.nodes()) + ", " + std::to_string(like.components()) + ")");
  auto v = a.unchecked<2>();
  TensorField t(c, 0, 2, Symmetry::symmetric);
  for (std::size_t n = 0; n < t.nodes(); ++n)
    for (std::size_t k = 0; k < t.components(); ++k) t.at(n, k) = v(n, k);
  return t;
}

py::dict residual_norms(const ReducedResiduals& r) {
  py::dict d;
  d["tt"] = r.tt.max_abs();
  d["ij"] = r.ij.max_abs();
  d["ti"] = r.ti.max_abs();
  return d;
}

py::dict sector_problem(const std::string& kind, double mass, double rho_b, int k) {
  const SectorProblem p = kind == "ads" ? ads_sector(k) : kind == "schwarzschild" ? schwarzschild_sector(mass, rho_b) : throw InputError("unknown sector preset '" + kind + "'");
  py::dict d;
  d["sector"] = to_string(p.sector);
  d["Lambda"] = p.Lambda;
  d["k"] = p.initial.k;
  d["g"] = p.initial.g;
  d["Pi"] = p.initial.Pi;
  d["V"] = p.initial.V;
  d["Vp"] = p.initial.Vp;
  d["xi"] = p.initial.xi;
  d["xip"] = p.initial.xip;
  return d;
}

SectorProblem problem_from(const py::dict& d) {
  SectorProblem p;
  const std::string s = d["sector"].cast<std::string>();
  p.sector = s == "torus" ? Sector::torus : s == "sphere" ? Sector::sphere : s == "hyperbolic" ? Sector::hyperbolic : throw InputError("unknown sector '" + s + "'");
  p.Lambda = d["Lambda"].cast<double>();
  SectorState& st = p.initial;
  st.k = d["k"].cast<int>();
  st.g = d["g"].cast<std::vector<double>>();
  st.Pi = d["Pi"].cast<std::vector<double>>();
  st.V = d["V"].cast<double>();
  st.Vp = d["Vp"].cast<double>();
  st.xi = d["xi"].cast<std::vector<double>>();
  st.xip = d["xip"].cast<std::vector<double>>();
  return p;
}

CarlemanForm form_of(const std::string& s) {
  if (s == "shape") return CarlemanForm::shape;
  if (s == "shape_derivatives") return CarlemanForm::shape_derivatives;
  if (s == "lapse") return CarlemanForm::lapse;
  if (s == "finite_distance") return CarlemanForm::finite_distance;
  throw InputError("unknown Carleman form '" + s + "'");
}

PairReference reference_of(const std::string& s) {
  if (s == "flat") return PairReference::flat;
  if (s == "hyperbolic") return PairReference::hyperbolic;
  if (s == "finite") return PairReference::finite;
  throw InputError("unknown pair reference '" + s + "'");
}

}  // namespace

PYBIND11_MODULE(_stvac, m) {
  m.doc() = "stationary vacuum toolkit";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<DivergenceError>(m, "DivergenceError", base.ptr());
  py::register_exception<IntegrationError>(m, "IntegrationError", base.ptr());
  py::register_exception<SingularMetricError>(m, "SingularMetricError", base.ptr());

  // exact solutions
  m.def(
      "exact_residuals",
      [](const std::string& name, int nodes, int order) {
        if (nodes < 9) throw InputError("exact_residuals: need at least 9 nodes");
        constexpr double pi = 3.14159265358979323846;
        auto residuals = [&](const Grid& g) {
          const Chart c = Chart::of(g);
          if (name == "minkowski") return reduced_residuals(minkowski(c));
          if (name == "ads") return reduced_residuals(anti_de_sitter(c));
          if (name == "schwarzschild") return reduced_residuals(schwarzschild(c, 1.0));
          throw InputError("unknown exact solution '" + name + "'");
        };
        Grid g = name == "minkowski" ? Grid({Axis::periodic("x", 0, 2 * pi, nodes), Axis::periodic("y", 0, 2 * pi, nodes), Axis::periodic("z", 0, 2 * pi, nodes)})
                 : name == "ads" ? Grid({Axis::radial_interval("r", 0.0, 1.0, nodes), Axis::periodic("y", 0, 2 * pi, 12), Axis::periodic("z", 0, 2 * pi, 12)}, order)
                                 : Grid({Axis::radial_interval("rho", 4.0, 8.0, nodes), Axis::interval("theta", 0.6, 2.5, nodes), Axis::periodic("phi", 0, 2 * pi, 12)}, order);
        const ReducedResiduals f = residuals(g);
        py::dict d = residual_norms(f);
        const bool spectral = name == "minkowski";
        double tol = 1e-10;
        if (!spectral) {
          const ReducedResiduals c = residuals(g.coarsened());
          tol = std::max({zero_tolerance(f.tt, c.tt, order), zero_tolerance(f.ij, c.ij, order), zero_tolerance(f.ti, c.ti, order)});
        }
        d["tolerance"] = tol;
        return d;
      },
      py::arg("name"), py::arg("nodes") = 33, py::arg("order") = 4,
      "sup-norms of the reduced residual blocks of an exact solution and the tolerance they are held to");

  // KIDs on the flat ball
  m.def("flat_ball_kid_residuals", [](double R, int nx, int nt) {
    const RadialFoliation f = flat_ball(R, flat_ball_grid(nx, nt));
    py::dict d;
    for (int i = 0; i < flat_ball_killing_count(); ++i) d[py::str(flat_ball_killing_name(i))] = kid_residual(flat_ball_kid(R, f, i)).max_abs();
    d["planted"] = kid_residual(planted_non_kid(f)).max_abs();
    return d;
  }, py::arg("R") = 2.0, py::arg("nx") = 17, py::arg("nt") = 24);

  // Fefferman-Graham
  m.def(
      "fg_expand",
      [](const Array& G0, const Array& Gn, int order, int ny, int nz) {
        const Chart c = fg_boundary_chart(ny, nz);
        const FGData d = fg_expand(boundary_tensor(c, G0, "G0"), boundary_tensor(c, Gn, "Gn"), order);
        py::list coeffs;
        for (const TensorField& t : d.coeff) coeffs.append(to_array(t));
        const FGDecay dec = fg_decay(d);
        py::dict out;
        out["coefficients"] = coeffs;
        out["rho"] = dec.rho;
        out["residual"] = dec.residual;
        out["slope"] = dec.slope;
        out["log_term"] = d.log_term;
        return out;
      },
      py::arg("G0"), py::arg("Gn"), py::arg("order"), py::arg("ny") = 48, py::arg("nz") = 10,
      "coefficients G_m (nodes x 9 arrays over the (t, y, z) boundary chart) and the truncation residual decay");
  m.def("fg_boundary_nodes", [](int ny, int nz) {
    const Chart c = fg_boundary_chart(ny, nz);
    const Grid& g = c.grid();
    Array out({g.size(), std::size_t{2}});
    auto v = out.mutable_unchecked<2>();
    for (std::size_t n = 0; n < g.size(); ++n) v(n, 0) = g.coord(n, 0), v(n, 1) = g.coord(n, 1);
    return out;
  }, py::arg("ny") = 48, py::arg("nz") = 10);

  // Carleman inequalities and the pointwise estimate
  m.def(
      "carleman_check",
      [](const std::string& reference, const std::string& form, std::vector<double> s, int order, unsigned long seed) {
        PairRecipe r;
        r.reference = reference_of(reference);
        r.seed = seed;
        CarlemanConfig cfg;
        cfg.s = std::move(s);
        cfg.order = order;
        const CarlemanReport rep = carleman_check(manufactured_pair(r), form_of(form), cfg);
        py::list rows;
        for (const CarlemanRow& row : rep.rows) rows.append(py::make_tuple(row.s, row.lhs, row.rhs, row.needed_C));
        py::dict d;
        d["rows"] = rows;
        d["C"] = rep.C;
        d["spread"] = rep.spread;
        d["holds"] = rep.holds();
        return d;
      },
      py::arg("reference") = "flat", py::arg("form") = "shape", py::arg("s") = std::vector<double>{3, 4, 5, 6, 7, 8, 9, 10}, py::arg("order") = 0,
      py::arg("seed") = 1, "rows (s, lhs, rhs, needed C) for one manufactured pair");
  m.def(
      "estia_sample",
      [](unsigned long seed, int nodes) {
        const EstiaSample s = estia_sample(random_asymptotic_pair(seed, nodes));
        py::dict d;
        d["rejected"] = s.rejected;
        d["diagnostic"] = s.diagnostic;
        d["ratio"] = s.ratio;
        d["split_defect"] = s.split_defect;
        d["groups"] = py::dict(py::arg("pi") = s.groups.pi, py::arg("lapse") = s.groups.lapse, py::arg("twist_a") = s.groups.twist_a,
                               py::arg("twist_b") = s.groups.twist_b, py::arg("twist_c") = s.groups.twist_c);
        return d;
      },
      py::arg("seed") = 1, py::arg("nodes") = 41);

  // cohomogeneity-one sector
  m.def("sector_preset", &sector_problem, py::arg("kind"), py::arg("mass") = 1.0, py::arg("rho_b") = 3.0, py::arg("k") = 2,
        "initial data dict for 'ads' or 'schwarzschild'");
  m.def(
      "continuation_ode",
      [](const py::dict& a, const py::dict& b, double r0, double r1, int samples, double tolerance) {
        const SeparationTrace t = continuation_ode(problem_from(a), problem_from(b), r0, r1, samples, tolerance);
        std::vector<double> V;
        for (const SectorState& s : t.a.states) V.push_back(s.V);
        py::dict d;
        d["radius"] = t.radius;
        d["separation"] = t.separation;
        d["sup"] = t.sup;
        d["truncated"] = t.truncated;
        d["diagnostic"] = t.diagnostic;
        d["V"] = V;
        return d;
      },
      py::arg("a"), py::arg("b"), py::arg("r0") = 0.0, py::arg("r1") = 1.0, py::arg("samples") = 101, py::arg("tolerance") = 1e-12);
  m.def("schwarzschild_lapse", &schwarzschild_lapse, py::arg("mass"), py::arg("rho_b"), py::arg("x"));

  // Weyl metrics
  py::class_<AxisymmetricHarmonic>(m, "AxisymmetricHarmonic")
      .def(py::init<std::vector<double>, double, bool>(), py::arg("coefficients"), py::arg("radius") = 1.0, py::arg("exterior") = false)
      .def_property_readonly("coefficients", &AxisymmetricHarmonic::coefficients)
      .def_property_readonly("radius", &AxisymmetricHarmonic::radius)
      .def_property_readonly("exterior", &AxisymmetricHarmonic::exterior)
      .def_property_readonly("degree", &AxisymmetricHarmonic::degree)
      .def("boundary_coefficients", &AxisymmetricHarmonic::boundary_coefficients)
      .def("contains", &AxisymmetricHarmonic::contains, py::arg("rho"), py::arg("z"))
      .def(
          "__call__",
          [](const AxisymmetricHarmonic& u, double rho, double z) {
            const auto s = u.eval(rho, z);
            return py::make_tuple(s.u, s.u_rho, s.u_z);
          },
          py::arg("rho"), py::arg("z"), "(u, du/drho, du/dz)");
  m.def("solve_axisym_laplace", &solve_axisym_laplace, py::arg("f"), py::arg("radius"), py::arg("L"), py::arg("exterior") = false);
  m.def(
      "weyl_k",
      [](const AxisymmetricHarmonic& u, double rho, double z, const std::string& path) {
        const KPath p = path == "north" ? KPath::north_arc : path == "south" ? KPath::south_arc : path == "axis" ? KPath::axis : throw InputError("unknown path '" + path + "'");
        return weyl_k(u, rho, z, p);
      },
      py::arg("u"), py::arg("rho"), py::arg("z"), py::arg("path") = "north");
  m.def(
      "weyl_vacuum_check",
      [](const AxisymmetricHarmonic& u, double rho0, double rho1, double z0, double z1, int nodes, int order) {
        const Grid g({Axis::interval("rho", rho0, rho1, nodes), Axis::interval("z", z0, z1, nodes)}, order);
        const WeylMetric w = weyl_metric(u, g);
        const ReducedResiduals f = reduced_residuals(w.metric);
        const ReducedResiduals c = reduced_residuals(weyl_metric(u, g.coarsened()).metric);
        py::dict d = residual_norms(f);
        d["tolerance_tt"] = zero_tolerance(f.tt, c.tt, order);
        d["tolerance_ij"] = zero_tolerance(f.ij, c.ij, order);
        d["inf_V"] = w.inf_V;
        d["sup_V"] = w.sup_V;
        d["path_defect"] = w.path_defect;
        return d;
      },
      py::arg("u"), py::arg("rho0"), py::arg("rho1"), py::arg("z0"), py::arg("z1"), py::arg("nodes") = 33, py::arg("order") = 6);
  m.def(
      "analyticity_classify",
      [](const std::vector<double>& b) {
        const AnalyticityReport r = analyticity_classify(b);
        py::dict d;
        d["verdict"] = to_string(r.verdict);
        d["used"] = r.used;
        d["epsilon"] = r.epsilon;
        d["beta"] = r.beta;
        d["power"] = r.power;
        d["bic"] = py::make_tuple(r.bic_geometric, r.bic_stretched, r.bic_algebraic);
        d["diagnostic"] = r.diagnostic;
        return d;
      },
      py::arg("b"));
  m.def(
      "synthetic_spectrum",
      [](const std::string& kind, double rate, double noise, std::uint64_t seed, int L) {
        const SpectrumKind k = kind == "geometric" ? SpectrumKind::geometric : kind == "stretched" ? SpectrumKind::stretched : kind == "algebraic" ? SpectrumKind::algebraic : throw InputError("unknown spectrum kind '" + kind + "'");
        return synthetic_spectrum(k, rate, noise, seed, L);
      },
      py::arg("kind"), py::arg("rate"), py::arg("noise") = 0.0, py::arg("seed") = 1, py::arg("L") = 128);

#ifdef STVAC_WITH_CLI
  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "stvac");
        py::gil_scoped_release release;
        return cli::run(args);
      },
      py::arg("args"), "runs the command-line tool in-process and returns its exit code");
#endif
}
