#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>

#include "CLI11.hpp"
#include "config.hpp"
#include "json.hpp"
#include "report.hpp"
#include "stvac/continuation.hpp"
#include "stvac/error.hpp"
#include "stvac/fg.hpp"
#include "stvac/fixtures.hpp"
#include "stvac/foliation.hpp"
#include "stvac/io.hpp"
#include "stvac/kid.hpp"
#include "stvac/stationary.hpp"
#include "stvac/weyl.hpp"

namespace stvac::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Global {
  std::string config;
  std::string out;
  bool hex = false;
  bool plot = false;
  bool dry_run = false;
  bool quiet = false;
  int jobs = 0;
};

struct Context {
  Global g;
  std::string path(const std::string& name) const { return (fs::path(g.out) / name).string(); }
  void save(const Csv& csv, const std::string& name) const {
    csv.save(path(name));
    if (!g.quiet) std::cout << "wrote " << path(name) << "\n";
  }
  void plot(const std::string& name, const std::string& svg) const {
    if (!g.plot) return;
    save_text(path(name), svg);
    if (!g.quiet) std::cout << "wrote " << path(name) << "\n";
  }
  void say(const std::string& s) const {
    if (!g.quiet) std::cout << s << "\n";
  }
};

std::string num(double v) { return format_double(v, false); }

int verdict(const Context& ctx, bool pass, const std::string& what) {
  ctx.say(std::string(pass ? "PASS " : "FAIL ") + what);
  return pass ? kPass : kToleranceFailure;
}

int dry(const Context& ctx) {
  ctx.say("dry run: inputs valid");
  return kPass;
}

// results[i] = fn(i), computed by a pool of threads; order is fixed by i
template <class T, class F>
std::vector<T> parallel_map(int n, int jobs, F&& fn) {
  std::vector<T> out(n);
  std::vector<std::exception_ptr> errs(n);
  int workers = jobs > 0 ? jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, std::max(n, 1));
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

RadialFoliation coarsened(const RadialFoliation& f) {
  const Chart cc = f.chart.on_grid(f.chart.grid().coarsened());
  return RadialFoliation(restrict_to(f.V, cc), restrict_to(f.xi, cc), MetricField(restrict_to(f.g.g(), cc), f.g.signature()), f.kind);
}

StationaryMetric coarsened(const StationaryMetric& sm) {
  const Chart cc = sm.chart().on_grid(sm.chart().grid().coarsened());
  return StationaryMetric(restrict_to(sm.V, cc), restrict_to(sm.theta, cc), MetricField(restrict_to(sm.g.g(), cc), sm.g.signature()), sm.Lambda);
}

struct Gate {
  std::string name;
  double value, tolerance;
};

int report_gates(const Context& ctx, const std::vector<Gate>& gates, const std::string& file) {
  Csv csv({"quantity", "max_abs", "tolerance", "pass"}, ctx.g.hex);
  bool ok = true;
  for (const Gate& g : gates) {
    const bool pass = g.value <= g.tolerance;
    ok = ok && pass;
    csv.row({g.name, g.value, g.tolerance, std::string(pass ? "yes" : "no")});
  }
  ctx.save(csv, file);
  std::string worst;
  for (const Gate& g : gates) worst += " " + g.name + "=" + num(g.value);
  return verdict(ctx, ok, file.substr(0, file.find('.')) + ":" + worst);
}

// ---- residual / gauss ------------------------------------------------------

struct ResidualOpts {
  std::string input;
  double tol = 0.0;
};

int cmd_residual(const Context& ctx, const ResidualOpts& o) {
  const Bundle b = load_bundle(o.input);
  StationaryMetric sm;
  if (b.kind == "foliation") {
    double Lambda = 0;
    const RadialFoliation f = foliation_from_bundle(b, &Lambda);
    sm = to_stationary(f, Lambda);
  } else if (b.kind == "stationary") {
    sm = stationary_from_bundle(b);
  } else {
    throw InputError(o.input + ": expected a foliation or stationary bundle, got " + b.kind);
  }
  if (ctx.g.dry_run) return dry(ctx);
  const ReducedResiduals r = reduced_residuals(sm);
  const Grid& grid = sm.chart().grid();
  std::vector<double> tol(3, o.tol > 0 ? o.tol : 1e-8);
  if (o.tol <= 0 && grid.coarsenable()) {
    const ReducedResiduals c = reduced_residuals(coarsened(sm));
    tol = {zero_tolerance(r.tt, c.tt, grid.fd_order()), zero_tolerance(r.ij, c.ij, grid.fd_order()), zero_tolerance(r.ti, c.ti, grid.fd_order())};
  }
  return report_gates(ctx, {{"tt", r.tt.max_abs(), tol[0]}, {"ij", r.ij.max_abs(), tol[1]}, {"ti", r.ti.max_abs(), tol[2]}}, "residual.csv");
}

int cmd_gauss(const Context& ctx, const ResidualOpts& o) {
  double Lambda = 0;
  const RadialFoliation f = foliation_from_bundle(load_bundle(o.input), &Lambda);
  if (ctx.g.dry_run) return dry(ctx);
  const GaussResiduals r = gauss_residuals(f, Lambda);
  const std::vector<std::pair<std::string, const TensorField*>> parts = {{"AB", &r.AB}, {"Ar", &r.Ar}, {"rr", &r.rr},
                                                                         {"rr3", &r.rr3}, {"divr", &r.divr}, {"divA", &r.divA}};
  std::vector<double> tol(parts.size(), o.tol > 0 ? o.tol : 1e-8);
  const Grid& grid = f.chart.grid();
  if (o.tol <= 0 && grid.coarsenable()) {
    const GaussResiduals c = gauss_residuals(coarsened(f), Lambda);
    const TensorField* cs[] = {&c.AB, &c.Ar, &c.rr, &c.rr3, &c.divr, &c.divA};
    for (std::size_t i = 0; i < parts.size(); ++i) tol[i] = zero_tolerance(*parts[i].second, *cs[i], grid.fd_order());
  }
  std::vector<Gate> gates;
  for (std::size_t i = 0; i < parts.size(); ++i) gates.push_back({parts[i].first, parts[i].second->max_abs(), tol[i]});
  return report_gates(ctx, gates, "gauss.csv");
}

// ---- kid -------------------------------------------------------------------

struct KidOpts {
  std::string input, foliation;
  double tol = 1e-8;
};

int cmd_kid_check(const Context& ctx, const KidOpts& o) {
  const BoundaryKID k = kid_from_bundle(load_bundle(o.input));
  if (ctx.g.dry_run) return dry(ctx);
  const KIDResidual r = kid_residual(k);
  return report_gates(ctx, {{"k0", r.k0.max_abs(), o.tol}, {"k1", r.k1.max_abs(), o.tol}}, "kid-check.csv");
}

int cmd_kid_extend(const Context& ctx, const KidOpts& o) {
  if (o.foliation.empty()) throw InputError("kid extend: --foliation is required");
  const BoundaryKID k = kid_from_bundle(load_bundle(o.input));
  double Lambda = 0;
  const RadialFoliation f = foliation_from_bundle(load_bundle(o.foliation), &Lambda);
  if (!(boundary_chart(f) == k.chart())) throw InputError("kid extend: the KID and the foliation live on different boundary charts");
  if (ctx.g.dry_run) return dry(ctx);
  const CandidateKillingField w = extend_kid(f, k);
  const KillingReport rep = killing_verify(f, w, Lambda);
  Csv csv({"radius", "h_norm"}, ctx.g.hex);
  double sup = 0;
  for (std::size_t i = 0; i < rep.radius.size(); ++i) {
    csv.row({rep.radius[i], rep.slice_norm[i]});
    sup = std::max(sup, rep.slice_norm[i]);
  }
  ctx.save(csv, "kid-extend.csv");
  ctx.plot("kid-extend.svg", svg_chart("deformation of the extended field", "radius", "sup |h|", {{"|h|", rep.radius, rep.slice_norm}}, true));
  return verdict(ctx, sup <= o.tol, "kid extend: sup |h| = " + num(sup) + " (tolerance " + num(o.tol) + ")");
}

// ---- fg --------------------------------------------------------------------

struct FgOpts {
  std::string input, a, b, output;
  int order = -1;
  int truncate = -1;
  double margin = 0.8;
  double tol = 1e-12;
};

int cmd_fg_expand(const Context& ctx, const FgOpts& o) {
  const Bundle in = load_bundle(o.input);
  if (in.kind != "fg-input") throw InputError(o.input + ": expected an fg-input bundle, got " + in.kind);
  const Block& blk = in.block("boundary");
  const TensorField& G0 = blk.field("G0");
  const TensorField& Gn = blk.field("Gn");
  const int n = G0.chart().dim();
  const int order = o.order >= 0 ? o.order : n;
  if (ctx.g.dry_run) return dry(ctx);
  FGData d = fg_expand(G0, Gn, order);
  const std::string out = o.output.empty() ? ctx.path("fg-expand.dat") : o.output;
  save_bundle(out, to_bundle(d));
  ctx.say("wrote " + out);
  Csv coeffs({"order", "sup_norm"}, ctx.g.hex);
  for (int m = 0; m <= d.order(); ++m) coeffs.row({static_cast<long long>(m), d.coeff[m].max_abs()});
  ctx.save(coeffs, "fg-expand.csv");

  const int k = o.truncate >= 0 ? std::min(o.truncate, d.order()) : d.order();
  d.coeff.resize(k + 1);
  const FGDecay dec = fg_decay(d);
  Csv decay({"rho", "residual"}, ctx.g.hex);
  double worst = 0;
  for (std::size_t i = 0; i < dec.rho.size(); ++i) {
    decay.row({dec.rho[i], dec.residual[i]});
    worst = std::max(worst, dec.residual[i]);
  }
  ctx.save(decay, "fg-decay.csv");
  ctx.plot("fg-decay.svg", svg_chart("residual of the truncated expansion", "rho", "|Ric + n g|", {{"order " + std::to_string(k), dec.rho, dec.residual}}, true));
  // round-off level residuals carry no slope
  const bool exact = worst < 1e-12;
  const bool pass = exact || dec.slope >= k + o.margin;
  return verdict(ctx, pass, "fg expand: order " + std::to_string(k) + ", residual slope " + num(dec.slope) + (exact ? " (residual at round-off)" : "") +
                                ", required " + num(k + o.margin));
}

int cmd_fg_compare(const Context& ctx, const FgOpts& o) {
  if (o.a.empty() || o.b.empty()) throw InputError("fg compare: --a and --b are required");
  const FGData a = fg_from_bundle(load_bundle(o.a)), b = fg_from_bundle(load_bundle(o.b));
  if (ctx.g.dry_run) return dry(ctx);
  const FGComparison c = fg_compare(a, b, o.tol);
  Csv csv({"order", "difference"}, ctx.g.hex);
  for (std::size_t m = 0; m < c.difference.size(); ++m) csv.row({static_cast<long long>(m), c.difference[m]});
  ctx.save(csv, "fg-compare.csv");
  return verdict(ctx, c.first_difference < 0,
                 c.first_difference < 0 ? "fg compare: coefficients agree" : "fg compare: first difference at order " + std::to_string(c.first_difference));
}

// ---- carleman --------------------------------------------------------------

struct CarlemanOpts {
  std::string input, reference;
  std::string pair_reference = "flat";
  std::string form;
  int pairs = 1;
  unsigned long seed = 1;
  int order = 0;
  double s_min = 3, s_max = 10, s_step = 1;
  double decay_ratio = 1e-8;
  double spread_max = 0;
};

CarlemanForm parse_form(const std::string& s) {
  if (s == "shape") return CarlemanForm::shape;
  if (s == "shape_derivatives" || s == "shape-derivatives") return CarlemanForm::shape_derivatives;
  if (s == "lapse") return CarlemanForm::lapse;
  if (s == "finite_distance" || s == "finite-distance") return CarlemanForm::finite_distance;
  throw InputError("unknown Carleman form '" + s + "'");
}

PairReference parse_reference(const std::string& s) {
  if (s == "flat") return PairReference::flat;
  if (s == "hyperbolic") return PairReference::hyperbolic;
  if (s == "finite") return PairReference::finite;
  throw InputError("unknown pair reference '" + s + "'");
}

int cmd_carleman(const Context& ctx, const CarlemanOpts& o) {
  if (!(o.s_min > 2) || !(o.s_max >= o.s_min) || !(o.s_step > 0)) throw InputError("carleman: need 2 < s-min <= s-max and s-step > 0");
  CarlemanConfig cfg;
  for (double s = o.s_min; s <= o.s_max + 1e-9 * o.s_step; s += o.s_step) cfg.s.push_back(s);
  cfg.order = o.order;
  cfg.decay_ratio = o.decay_ratio;
  const bool from_files = !o.input.empty() || !o.reference.empty();
  if (from_files && (o.input.empty() || o.reference.empty())) throw InputError("carleman: --input and --reference go together");
  const PairReference ref = parse_reference(o.pair_reference);
  const CarlemanForm form = o.form.empty() ? (ref == PairReference::finite ? CarlemanForm::finite_distance : CarlemanForm::shape) : parse_form(o.form);
  if (o.pairs < 1) throw InputError("carleman: --pairs must be positive");

  std::vector<SolutionPair> pairs;
  if (from_files) {
    pairs.emplace_back(foliation_from_bundle(load_bundle(o.input)), foliation_from_bundle(load_bundle(o.reference)));
  }
  if (ctx.g.dry_run) return dry(ctx);
  const int n = from_files ? 1 : o.pairs;
  std::vector<CarlemanReport> reports;
  try {
    reports = parallel_map<CarlemanReport>(n, ctx.g.jobs, [&](int i) {
      if (from_files) return carleman_check(pairs[0], form, cfg);
      PairRecipe r;
      r.reference = ref;
      r.seed = o.seed + i;
      return carleman_check(manufactured_pair(r), form, cfg);
    });
  } catch (const DivergenceError& e) {
    ctx.say(std::string("FAIL carleman: ") + e.what());
    return kToleranceFailure;
  }
  Csv csv({"pair", "s", "lhs", "rhs", "needed_C"}, ctx.g.hex);
  std::vector<Series> series;
  for (int i = 0; i < n; ++i) {
    Series sr{"pair " + std::to_string(i), {}, {}};
    for (const CarlemanRow& row : reports[i].rows) {
      csv.row({static_cast<long long>(i), row.s, row.lhs, row.rhs, row.needed_C});
      sr.x.push_back(row.s), sr.y.push_back(row.needed_C);
    }
    if (i < 6) series.push_back(std::move(sr));
  }
  ctx.save(csv, "carleman.csv");
  const CarlemanFit fit = fit_constant(reports);
  Csv fc({"form", "order", "pairs", "C", "spread", "holds"}, ctx.g.hex);
  fc.row({to_string(form), static_cast<long long>(o.order), static_cast<long long>(n), fit.C, fit.spread, std::string(fit.holds ? "yes" : "no")});
  ctx.save(fc, "carleman-fit.csv");
  ctx.plot("carleman.svg", svg_chart("Carleman constant needed per s", "s", "rhs / lhs", series, true));
  const bool spread_ok = o.spread_max <= 0 || fit.spread <= o.spread_max;
  return verdict(ctx, fit.holds && spread_ok,
                 "carleman " + to_string(form) + ": fitted C = " + num(fit.C) + ", s^2 spread " + num(fit.spread) +
                     (o.spread_max > 0 ? " (limit " + num(o.spread_max) + ")" : ""));
}

// ---- estia -----------------------------------------------------------------

struct EstiaOpts {
  int samples = 100;
  unsigned long seed = 1;
  int nodes = 41;
  double decay_bound = 100;
  double split_tol = 1e-10;
};

int cmd_estia(const Context& ctx, const EstiaOpts& o) {
  if (o.samples < 1) throw InputError("estia: --samples must be positive");
  if (o.nodes < 9) throw InputError("estia: --nodes must be at least 9");
  if (ctx.g.dry_run) return dry(ctx);
  const auto samples = parallel_map<EstiaSample>(o.samples, ctx.g.jobs, [&](int i) {
    return estia_sample(random_asymptotic_pair(o.seed + i, o.nodes), o.decay_bound);
  });
  Csv csv({"sample", "rejected", "ratio", "pi", "lapse", "twist_a", "twist_b", "twist_c", "split_defect"}, ctx.g.hex);
  double C = 0, split = 0;
  EstiaGroups gc;
  int accepted = 0;
  Series ratio{"ratio", {}, {}};
  for (int i = 0; i < o.samples; ++i) {
    const EstiaSample& s = samples[i];
    csv.row({static_cast<long long>(i), std::string(s.rejected ? "yes" : "no"), s.ratio, s.groups.pi, s.groups.lapse, s.groups.twist_a, s.groups.twist_b,
             s.groups.twist_c, s.split_defect});
    if (s.rejected) continue;
    ++accepted;
    C = std::max(C, s.ratio);
    split = std::max(split, s.split_defect);
    gc.pi = std::max(gc.pi, s.groups.pi), gc.lapse = std::max(gc.lapse, s.groups.lapse);
    gc.twist_a = std::max(gc.twist_a, s.groups.twist_a), gc.twist_b = std::max(gc.twist_b, s.groups.twist_b);
    gc.twist_c = std::max(gc.twist_c, s.groups.twist_c);
    ratio.x.push_back(i), ratio.y.push_back(s.ratio);
  }
  ctx.save(csv, "estia.csv");
  Csv fit({"accepted", "C", "pi", "lapse", "twist_a", "twist_b", "twist_c", "split_defect"}, ctx.g.hex);
  fit.row({static_cast<long long>(accepted), C, gc.pi, gc.lapse, gc.twist_a, gc.twist_b, gc.twist_c, split});
  ctx.save(fit, "estia-fit.csv");
  ctx.plot("estia.svg", svg_chart("pointwise ratio per sample", "sample", "ratio", {ratio}, true));
  const bool pass = accepted > 0 && std::isfinite(C) && std::isfinite(gc.max()) && split <= o.split_tol;
  return verdict(ctx, pass, "estia: " + std::to_string(accepted) + " accepted samples, fitted C = " + num(C) + ", worst group " + num(gc.max()) +
                                ", split defect " + num(split));
}

// ---- continuation ----------------------------------------------------------

Sector parse_sector(const std::string& s) {
  if (s == "torus") return Sector::torus;
  if (s == "sphere") return Sector::sphere;
  if (s == "hyperbolic") return Sector::hyperbolic;
  throw InputError("unknown sector '" + s + "'");
}

std::vector<double> vec(const json& j, const char* key, std::size_t n) {
  if (!j.contains(key)) return std::vector<double>(n, 0.0);
  auto v = j.at(key).get<std::vector<double>>();
  if (v.size() != n) throw InputError(std::string("continuation profile: '") + key + "' needs " + std::to_string(n) + " entries");
  return v;
}

SectorProblem parse_problem(const json& j) {
  SectorProblem p;
  if (j.contains("preset")) {
    const std::string preset = j.at("preset").get<std::string>();
    if (preset == "ads")
      p = ads_sector(j.value("k", 2));
    else if (preset == "schwarzschild")
      p = schwarzschild_sector(j.at("mass").get<double>(), j.at("rho_b").get<double>());
    else
      throw InputError("continuation profile: unknown preset '" + preset + "'");
  } else {
    p.sector = parse_sector(j.value("sector", std::string("torus")));
    p.Lambda = j.value("Lambda", 0.0);
    const int k = j.at("k").get<int>();
    if (k < 1) throw InputError("continuation profile: k must be positive");
    SectorState& s = p.initial;
    s.k = k;
    s.g = vec(j, "g", k * k);
    s.Pi = vec(j, "Pi", k * k);
    s.V = j.value("V", 1.0);
    s.Vp = j.value("Vp", 0.0);
    s.xi = vec(j, "xi", k);
    s.xip = vec(j, "xip", k);
  }
  const double ps = j.value("Pi_scale", 1.0), vs = j.value("V_scale", 1.0);
  for (double& x : p.initial.Pi) x *= ps;
  p.initial.V *= vs;
  return p;
}

int cmd_continuation(const Context& ctx, const std::string& profile) {
  if (profile.empty()) throw InputError("continuation: --profile is required");
  std::ifstream in(profile);
  if (!in) throw InputError(profile + ": cannot open");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(profile + ": " + e.what());
  }
  SectorProblem a, b;
  double r0 = 0, r1 = 1, tol = 1e-12;
  int samples = 101;
  double max_sep = -1, min_sep = -1, max_lapse = -1;
  bool exact = false;
  double mass = 0, rho_b = 0;
  try {
    a = parse_problem(j.at("a"));
    b = j.contains("b") ? parse_problem(j.at("b")) : a;
    r0 = j.value("r0", 0.0), r1 = j.value("r1", 1.0), tol = j.value("tolerance", 1e-12);
    samples = j.value("samples", 101);
    max_sep = j.value("max_separation", -1.0), min_sep = j.value("min_separation", -1.0);
    if (j.contains("exact")) {
      if (j.at("exact").get<std::string>() != "schwarzschild") throw InputError("continuation profile: 'exact' supports schwarzschild only");
      const json& ja = j.at("a");
      mass = ja.at("mass").get<double>(), rho_b = ja.at("rho_b").get<double>();
      exact = true;
      max_lapse = j.value("max_lapse_error", 1e-8);
    }
  } catch (const json::exception& e) {
    throw InputError(profile + ": " + e.what());
  }
  if (samples < 2) throw InputError(profile + ": samples must be at least 2");
  if (ctx.g.dry_run) return dry(ctx);
  const SeparationTrace t = continuation_ode(a, b, r0, r1, samples, tol);
  std::vector<std::string> cols = {"radius", "separation", "V_a", "V_b", "constraint_a", "constraint_b"};
  if (exact) cols.push_back("lapse_error");
  Csv csv(cols, ctx.g.hex);
  double lapse_err = 0;
  for (std::size_t i = 0; i < t.radius.size(); ++i) {
    std::vector<Cell> row = {t.radius[i], t.separation[i], t.a.states[i].V, t.b.states[i].V, t.a.constraint[i], t.b.constraint[i]};
    if (exact) {
      const double e = std::abs(t.a.states[i].V - schwarzschild_lapse(mass, rho_b, t.radius[i] - r0));
      lapse_err = std::max(lapse_err, e);
      row.push_back(e);
    }
    csv.row(std::move(row));
  }
  ctx.save(csv, "continuation.csv");
  ctx.plot("continuation.svg", svg_chart("separation of the two solutions", "r", "separation", {{"separation", t.radius, t.separation}}, true));
  bool pass = !t.truncated;
  std::string msg = "continuation: sup separation " + num(t.sup);
  if (t.truncated) msg += ", integration stopped: " + t.diagnostic;
  if (max_sep >= 0) pass = pass && t.sup <= max_sep, msg += " (max " + num(max_sep) + ")";
  if (min_sep >= 0) pass = pass && t.sup >= min_sep, msg += " (min " + num(min_sep) + ")";
  if (exact) pass = pass && lapse_err <= max_lapse, msg += ", lapse error " + num(lapse_err) + " (max " + num(max_lapse) + ")";
  return verdict(ctx, pass, msg);
}

// ---- weyl ------------------------------------------------------------------

struct WeylOpts {
  std::string coeffs, bundle, expect;
  double radius = 1.0;
  bool exterior = false;
  double rho_min = NAN, rho_max = NAN, z_min = NAN, z_max = NAN;
  int nodes = 65;
  int order = 6;
};

int cmd_weyl_gen(const Context& ctx, const WeylOpts& o) {
  if (o.coeffs.empty()) throw InputError("weyl gen: --coeffs is required");
  const AxisymmetricHarmonic u(read_coefficients(o.coeffs), o.radius, o.exterior);
  const double R = o.radius;
  auto pick = [](double v, double d) { return std::isnan(v) ? d : v; };
  const double r0 = pick(o.rho_min, o.exterior ? 1.2 * R : 0.1 * R), r1 = pick(o.rho_max, o.exterior ? 4.4 * R : 0.6 * R);
  const double z0 = pick(o.z_min, o.exterior ? -1.6 * R : -0.6 * R), z1 = pick(o.z_max, o.exterior ? 1.6 * R : 0.6 * R);
  if (o.nodes < 9 || o.nodes % 2 == 0) throw InputError("weyl gen: --nodes must be odd and at least 9");
  const Grid grid({Axis::interval("rho", r0, r1, o.nodes), Axis::interval("z", z0, z1, o.nodes)}, o.order);
  if (ctx.g.dry_run) return dry(ctx);
  const WeylMetric w = weyl_metric(u, grid);
  const WeylMetric wc = weyl_metric(u, grid.coarsened());
  const ReducedResiduals r = reduced_residuals(w.metric), rc = reduced_residuals(wc.metric);
  Csv nodes({"rho", "z", "V", "k"}, ctx.g.hex);
  for (std::size_t n = 0; n < grid.size(); ++n) nodes.row({grid.coord(n, 0), grid.coord(n, 1), w.metric.V.data()[n], w.k.data()[n]});
  ctx.save(nodes, "weyl-gen.csv");
  if (!o.bundle.empty()) {
    save_bundle(o.bundle, to_bundle(w.metric));
    ctx.say("wrote " + o.bundle);
  }
  const double tol_tt = zero_tolerance(r.tt, rc.tt, o.order), tol_ij = zero_tolerance(r.ij, rc.ij, o.order);
  ctx.say("weyl gen: inf V = " + num(w.inf_V) + ", sup V = " + num(w.sup_V) + ", k path defect = " + num(w.path_defect));
  return report_gates(ctx, {{"tt", r.tt.max_abs(), tol_tt}, {"ij", r.ij.max_abs(), tol_ij}, {"ti", r.ti.max_abs(), 1e-12}, {"k_paths", w.path_defect, 1e-10}},
                      "weyl-residual.csv");
}

AnalyticityVerdict parse_verdict(const std::string& s) {
  if (s == "analytic") return AnalyticityVerdict::analytic;
  if (s == "smooth-non-analytic") return AnalyticityVerdict::smooth_non_analytic;
  if (s == "insufficient-data") return AnalyticityVerdict::insufficient_data;
  throw InputError("unknown verdict '" + s + "'");
}

int cmd_weyl_classify(const Context& ctx, const WeylOpts& o) {
  if (o.coeffs.empty()) throw InputError("weyl classify: --coeffs is required");
  const AxisymmetricHarmonic u(read_coefficients(o.coeffs), o.radius, o.exterior);
  const bool gated = !o.expect.empty();
  const AnalyticityVerdict want = gated ? parse_verdict(o.expect) : AnalyticityVerdict::insufficient_data;
  if (ctx.g.dry_run) return dry(ctx);
  const AnalyticityReport rep = analyticity_classify(u);
  Csv csv({"verdict", "used", "epsilon", "beta", "power", "bic_geometric", "bic_stretched", "bic_algebraic"}, ctx.g.hex);
  csv.row({to_string(rep.verdict), static_cast<long long>(rep.used), rep.epsilon, rep.beta, rep.power, rep.bic_geometric, rep.bic_stretched,
           rep.bic_algebraic});
  ctx.save(csv, "weyl-classify.csv");
  const auto b = u.boundary_coefficients();
  Series s{"|b_l|", {}, {}};
  for (std::size_t l = 0; l < b.size(); ++l) s.x.push_back(static_cast<double>(l)), s.y.push_back(std::abs(b[l]));
  ctx.plot("weyl-classify.svg", svg_chart("trace coefficients", "l", "|b_l|", {s}, true));
  ctx.say("weyl classify: " + to_string(rep.verdict) + " (" + rep.diagnostic + ")");
  if (!gated) return kPass;
  return verdict(ctx, rep.verdict == want, "weyl classify: expected " + o.expect);
}

// ---- fixtures --------------------------------------------------------------

void write_coefficients(const std::string& path, const std::vector<double>& b) {
  std::ostringstream os;
  os << "# l a_l\n";
  for (std::size_t l = 0; l < b.size(); ++l) os << l << " " << hex(b[l]) << "\n";
  save_text(path, os.str());
}

}  // namespace

std::vector<std::string> write_fixtures(const std::string& dir) {
  fs::create_directories(dir);
  std::vector<std::string> names;
  auto put = [&](const std::string& name, const Bundle& b) {
    save_bundle((fs::path(dir) / name).string(), b);
    names.push_back(name);
  };
  auto text = [&](const std::string& name, const std::string& body) {
    save_text((fs::path(dir) / name).string(), body);
    names.push_back(name);
  };

  put("minkowski.fol", to_bundle(minkowski_slab(torus_slab("x", 0.0, 1.0, 17, 10)), 0.0));
  const RadialFoliation ads = ads_slab(torus_slab("r", 0.0, 1.0, 33, 10));
  put("ads.fol", to_bundle(ads, -3.0));
  // AdS data with the lapse scaled by 1 + r/10: not a solution
  RadialFoliation bent = ads;
  for (std::size_t n = 0; n < bent.V.nodes(); ++n) bent.V.data()[n] *= 1.0 + 0.1 * bent.radius(n);
  put("bad-ads.fol", to_bundle(bent, -3.0));

  const double R = 2.0;
  const RadialFoliation ball = flat_ball(R, flat_ball_grid(33, 16));
  put("flat-ball.fol", to_bundle(ball, 0.0));
  put("kid.dat", to_bundle(flat_ball_kid(R, ball, 1)));
  put("bad-kid.dat", to_bundle(planted_non_kid(ball)));

  auto fg_input = [](const TensorField& G0, const TensorField& Gn) {
    Bundle b;
    b.kind = "fg-input";
    b.blocks.push_back(Block{"boundary", G0.chart(), {}, {{"G0", G0}, {"Gn", Gn}}});
    return b;
  };
  const Chart bc = fg_boundary_chart();
  put("fg-poincare.dat", fg_input(fg_minkowski(bc), TensorField(bc, 0, 2, Symmetry::symmetric)));
  put("fg-curved.dat", fg_input(fg_curved(bc), TensorField(bc, 0, 2, Symmetry::symmetric)));
  put("fg-tt.dat", fg_input(fg_minkowski(bc), fg_tt_tensor(bc, 0.2)));

  PairRecipe recipe;
  recipe.seed = 7;
  const SolutionPair pair = manufactured_pair(recipe);
  put("pair.fol", to_bundle(pair.f, 0.0));
  put("pair-reference.fol", to_bundle(pair.f0, 0.0));

  text("ads-identical.json", R"({"a": {"preset": "ads", "k": 2}, "r0": 0, "r1": 1, "samples": 101, "max_separation": 1e-9})" "\n");
  text("ads-mismatch.json",
       R"({"a": {"preset": "ads", "k": 2}, "b": {"preset": "ads", "k": 2, "Pi_scale": 1.001}, "r0": 0, "r1": 1, "samples": 101, "min_separation": 5e-4})"
       "\n");
  text("schwarzschild.json",
       R"({"a": {"preset": "schwarzschild", "mass": 1, "rho_b": 4}, "r0": 0, "r1": 3, "samples": 61, "exact": "schwarzschild", "max_lapse_error": 1e-8})"
       "\n");

  std::vector<double> half(129), root(129), inv2(129);
  for (int l = 0; l <= 128; ++l) {
    half[l] = std::pow(0.5, l);
    root[l] = std::exp(-std::sqrt(static_cast<double>(l)));
    inv2[l] = 1.0 / std::max(1.0, static_cast<double>(l) * l);
  }
  auto coeff = [&](const std::string& name, const std::vector<double>& b) {
    write_coefficients((fs::path(dir) / name).string(), b);
    names.push_back(name);
  };
  coeff("coeffs-geometric.txt", half);
  coeff("coeffs-root.txt", root);
  coeff("coeffs-inverse-square.txt", inv2);
  coeff("curzon.txt", {-1.0});
  coeff("quadrupole.txt", {0.0, 0.0, 0.8});

  text("example.ini",
       "# global options\n"
       "hex = false\n"
       "\n"
       "[carleman]\n"
       "s-min = 3\n"
       "s-max = 10\n"
       "pairs = 4\n"
       "\n"
       "[estia]\n"
       "samples = 20\n"
       "seed = 11\n");
  return names;
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"Numerical checks for stationary vacuum metrics near a boundary", "stvac"};
  app.fallthrough();
  app.require_subcommand(1);
  Global g;
  if (const char* env = std::getenv(kOutputDirEnv)) g.out = env;
  if (g.out.empty()) g.out = ".";
  app.add_option("--config", g.config, "key-value configuration file");
  app.add_option("--out", g.out, std::string("output directory (default $") + kOutputDirEnv + " or .)");
  app.add_flag("--hex", g.hex, "write floating point CSV cells as hexadecimal literals");
  app.add_flag("--plot", g.plot, "also write SVG charts");
  app.add_flag("--dry-run", g.dry_run, "validate inputs without computing");
  app.add_flag("--quiet", g.quiet, "suppress progress output");
  app.add_option("--jobs", g.jobs, "worker threads for sample sweeps (0: all cores)")->check(CLI::NonNegativeNumber);

  ResidualOpts res, gau;
  auto* c_res = app.add_subcommand("residual", "reduced Einstein residual of a foliation or stationary bundle");
  c_res->add_option("--input", res.input, "bundle file")->check(CLI::ExistingFile);
  c_res->add_option("--tol", res.tol, "fixed tolerance (default: Richardson estimate)");
  auto* c_gau = app.add_subcommand("gauss", "radial Einstein system of a foliation bundle");
  c_gau->add_option("--input", gau.input, "foliation file")->check(CLI::ExistingFile);
  c_gau->add_option("--tol", gau.tol, "fixed tolerance (default: Richardson estimate)");

  KidOpts kc, ke;
  auto* c_kid = app.add_subcommand("kid", "Killing initial data");
  c_kid->require_subcommand(1);
  auto* c_kc = c_kid->add_subcommand("check", "KID residual of a boundary pair");
  c_kc->add_option("--input", kc.input, "kid file")->check(CLI::ExistingFile);
  c_kc->add_option("--tol", kc.tol, "tolerance")->capture_default_str();
  auto* c_ke = c_kid->add_subcommand("extend", "extend a KID along a foliation and measure the deformation");
  c_ke->add_option("--input", ke.input, "kid file")->check(CLI::ExistingFile);
  c_ke->add_option("--foliation", ke.foliation, "foliation file")->check(CLI::ExistingFile);
  c_ke->add_option("--tol", ke.tol, "tolerance")->capture_default_str();

  FgOpts fe, fc;
  auto* c_fg = app.add_subcommand("fg", "Fefferman-Graham expansion");
  c_fg->require_subcommand(1);
  auto* c_fe = c_fg->add_subcommand("expand", "coefficients from (G0, Gn)");
  c_fe->add_option("--input", fe.input, "fg-input file")->check(CLI::ExistingFile);
  c_fe->add_option("--order", fe.order, "expansion order (default: boundary dimension)");
  c_fe->add_option("--truncate", fe.truncate, "order kept for the residual decay check");
  c_fe->add_option("--margin", fe.margin, "required slope above the truncation order")->capture_default_str();
  c_fe->add_option("--output", fe.output, "coefficient file (default <out>/fg-expand.dat)");
  auto* c_fc = c_fg->add_subcommand("compare", "compare two coefficient files");
  c_fc->add_option("--a", fc.a, "fg file")->check(CLI::ExistingFile);
  c_fc->add_option("--b", fc.b, "fg file")->check(CLI::ExistingFile);
  c_fc->add_option("--tol", fc.tol, "tolerance")->capture_default_str();

  CarlemanOpts co;
  auto* c_car = app.add_subcommand("carleman", "weighted inequalities between solution pairs");
  c_car->add_option("--input", co.input, "foliation of the solution")->check(CLI::ExistingFile);
  c_car->add_option("--reference", co.reference, "foliation of the reference solution")->check(CLI::ExistingFile);
  c_car->add_option("--pair-reference", co.pair_reference, "manufactured pairs: flat, hyperbolic or finite")->capture_default_str();
  c_car->add_option("--pairs", co.pairs, "number of manufactured pairs")->capture_default_str();
  c_car->add_option("--seed", co.seed, "seed of the first pair")->capture_default_str();
  c_car->add_option("--form", co.form, "shape, shape_derivatives, lapse or finite_distance");
  c_car->add_option("--order", co.order, "derivative order of shape_derivatives")->capture_default_str();
  c_car->add_option("--s-min", co.s_min, "smallest s")->capture_default_str();
  c_car->add_option("--s-max", co.s_max, "largest s")->capture_default_str();
  c_car->add_option("--s-step", co.s_step, "step in s")->capture_default_str();
  c_car->add_option("--decay-ratio", co.decay_ratio, "decay required at the far end")->capture_default_str();
  c_car->add_option("--spread-max", co.spread_max, "bound on the s^2 spread (0: not checked)")->capture_default_str();

  EstiaOpts eo;
  auto* c_est = app.add_subcommand("estia", "pointwise estimate of |A0|^2 - |A|^2 on random pairs");
  c_est->add_option("--samples", eo.samples, "number of pairs")->capture_default_str();
  c_est->add_option("--seed", eo.seed, "seed of the first pair")->capture_default_str();
  c_est->add_option("--nodes", eo.nodes, "radial nodes")->capture_default_str();
  c_est->add_option("--decay-bound", eo.decay_bound, "largest accepted decay constant")->capture_default_str();
  c_est->add_option("--split-tol", eo.split_tol, "tolerance of the twist split identity")->capture_default_str();

  std::string profile;
  auto* c_con = app.add_subcommand("continuation", "separation of two cohomogeneity-one solutions");
  c_con->add_option("--profile", profile, "JSON profile")->check(CLI::ExistingFile);

  WeylOpts wg, wc;
  auto* c_wey = app.add_subcommand("weyl", "static axisymmetric vacuum metrics");
  c_wey->require_subcommand(1);
  auto* c_wg = c_wey->add_subcommand("gen", "metric from a harmonic potential");
  auto* c_wc = c_wey->add_subcommand("classify", "decay class of the trace coefficients");
  for (auto [cmd, o] : {std::pair{c_wg, &wg}, std::pair{c_wc, &wc}}) {
    cmd->add_option("--coeffs", o->coeffs, "two-column file (l, a_l)")->check(CLI::ExistingFile);
    cmd->add_option("--radius", o->radius, "radius of the sphere")->capture_default_str();
    cmd->add_flag("--exterior", o->exterior, "exterior series rt^(-l-1)");
  }
  c_wg->add_option("--rho-min", wg.rho_min, "grid");
  c_wg->add_option("--rho-max", wg.rho_max, "grid");
  c_wg->add_option("--z-min", wg.z_min, "grid");
  c_wg->add_option("--z-max", wg.z_max, "grid");
  c_wg->add_option("--nodes", wg.nodes, "nodes per axis (odd)")->capture_default_str();
  c_wg->add_option("--order", wg.order, "finite-difference order")->capture_default_str();
  c_wg->add_option("--bundle", wg.bundle, "also write the stationary bundle");
  c_wc->add_option("--expect", wc.expect, "analytic, smooth-non-analytic or insufficient-data; mismatch exits 2");

  std::string fixture_dir;
  auto* c_fix = app.add_subcommand("fixture", "write the reference input files");
  c_fix->add_option("--dir", fixture_dir, "target directory (default: output directory)");

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
    if (!g.config.empty()) apply_config(app, parse_config(g.config));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }

  Context ctx{g};
  try {
    if (!c_fix->parsed()) {
      std::error_code ec;
      fs::create_directories(g.out, ec);
      if (ec || !fs::is_directory(g.out)) throw InputError("cannot create output directory " + g.out);
    }
    if (c_res->parsed()) {
      if (res.input.empty()) throw InputError("residual: --input is required");
      return cmd_residual(ctx, res);
    }
    if (c_gau->parsed()) {
      if (gau.input.empty()) throw InputError("gauss: --input is required");
      return cmd_gauss(ctx, gau);
    }
    if (c_kc->parsed()) {
      if (kc.input.empty()) throw InputError("kid check: --input is required");
      return cmd_kid_check(ctx, kc);
    }
    if (c_ke->parsed()) {
      if (ke.input.empty()) throw InputError("kid extend: --input is required");
      return cmd_kid_extend(ctx, ke);
    }
    if (c_fe->parsed()) {
      if (fe.input.empty()) throw InputError("fg expand: --input is required");
      return cmd_fg_expand(ctx, fe);
    }
    if (c_fc->parsed()) return cmd_fg_compare(ctx, fc);
    if (c_car->parsed()) return cmd_carleman(ctx, co);
    if (c_est->parsed()) return cmd_estia(ctx, eo);
    if (c_con->parsed()) return cmd_continuation(ctx, profile);
    if (c_wg->parsed()) return cmd_weyl_gen(ctx, wg);
    if (c_wc->parsed()) return cmd_weyl_classify(ctx, wc);
    if (c_fix->parsed()) {
      const std::string dir = fixture_dir.empty() ? g.out : fixture_dir;
      if (g.dry_run) return dry(ctx);
      for (const auto& n : write_fixtures(dir)) ctx.say("wrote " + (fs::path(dir) / n).string());
      return kPass;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  std::cerr << "error: no subcommand\n";
  return kInputError;
}

}  // namespace stvac::cli
