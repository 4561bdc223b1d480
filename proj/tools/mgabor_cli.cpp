#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mgabor/acceptance.hpp"
#include "mgabor/config.hpp"
#include "mgabor/duality.hpp"

using namespace mgabor;
using json = nlohmann::json;

namespace {

struct Globals {
    std::string config;
    std::string out;
    std::uint64_t seed = 1;
    int threads = 1;
    bool dry_run = false;
};

enum Exit { kOk = 0, kFail = 1, kConfig = 2 };

/// Parsed config document plus a root node; an empty object when no file was given.
struct Doc {
    json data = json::object();
    ConfigNode root{&data, "$"};

    explicit Doc(const std::string& file) {
        if (!file.empty()) data = load_config(file);
        if (!data.is_object()) throw ConfigError("$", "expected a JSON object at the top level");
        root = ConfigNode(&data, "$");
    }
    ConfigNode at_or_empty(const std::string& key) const {
        static const json empty = json::object();
        return root.has(key) ? root.at(key) : ConfigNode(&empty, "$." + key);
    }
};

json point_json(const PhasePoint& p) { return json::array({p.x, p.omega}); }

int verdict_exit(Verdict v) { return v == Verdict::fail ? kFail : kOk; }

void emit(const Globals& g, const std::string& name, const json& j) {
    const std::string text = j.dump(2);
    std::cout << text << '\n';
    if (!g.out.empty()) {
        std::filesystem::create_directories(g.out);
        std::ofstream(std::filesystem::path(g.out) / (name + ".json")) << text << '\n';
    }
}

void emit_csv(const Globals& g, const std::string& name, const std::vector<std::string>& header,
              const std::vector<std::vector<double>>& rows) {
    if (g.out.empty()) return;
    write_csv(std::filesystem::path(g.out) / (name + ".csv"), header, rows);
}

ModelSetSpec spec_of(const Doc& d) { return modelset_from(d.root); }

PlainLattice lattice_of(const Doc& d) {
    return d.root.has("lattice") ? lattice_from(d.root.at("lattice")) : PlainLattice::separable(1.0, 1.0);
}

std::shared_ptr<const Bump> bump_of(const Doc& d, const ModelSetSpec& spec) {
    return std::make_shared<const Bump>(bump_from(d.at_or_empty("bump"), spec.window));
}

AnalyticWindow analytic_or_g0(const Doc& d, const std::string& key) {
    return d.root.has(key) ? analytic_from(d.root.at(key)) : AnalyticWindow::gaussian();
}

std::vector<AnalyticWindow> analytic_list(const Doc& d, const std::string& key) {
    if (!d.root.has(key)) return {AnalyticWindow::gaussian()};
    const auto node = d.root.at(key);
    if (!node.raw().is_array()) return {analytic_from(node)};
    std::vector<AnalyticWindow> out;
    for (std::size_t i = 0; i < node.size(); ++i) out.push_back(analytic_from(node.at(i)));
    if (out.empty()) node.fail("empty window list");
    return out;
}

std::vector<Signal> signal_list(const Doc& d, const std::string& key) {
    if (!d.root.has(key)) return {AnalyticWindow::gaussian()};
    return signals_from(d.root.at(key));
}

Domain domain_of(const Doc& d, const std::string& kind, const std::string& kernel) {
    if (kind == "lattice") return lattice_of(d);
    if (kind != "modelset") throw ConfigError("--domain", "expected lattice or modelset");
    const auto spec = spec_of(d);
    return ModelSetDomain{spec, kernel_from(kernel, d.root, spec)};
}

double domain_radius_estimate(const Domain& dom, double radius) {
    return domain_density(dom) * 4.0 * radius * radius;
}

void print_dry_run(const json& j) { std::cout << j.dump(2) << '\n'; }

std::vector<PhasePoint> points_of(const Doc& d, const std::string& key, PhasePoint fallback) {
    if (!d.root.has(key)) return {fallback};
    const auto node = d.root.at(key);
    if (node.size() > 0 && node.at(0).raw().is_number()) return {node.point()};
    std::vector<PhasePoint> out;
    for (std::size_t i = 0; i < node.size(); ++i) out.push_back(node.at(i).point());
    return out;
}

// ---- scheme -------------------------------------------------------------------------------------

int scheme_check(const Globals& g) {
    const Doc d(g.config);
    const auto scheme = d.root.has("scheme") ? scheme_from(d.root.at("scheme")) : scheme_a();
    const double radius = d.root.positive_or("radius", 10.0);
    const double tol = d.root.positive_or("tol", 1e-9);
    if (g.dry_run) {
        print_dry_run({{"radius", radius}, {"estimated_points", std::pow(2.0 * radius, 3) / scheme.volume()}});
        return kOk;
    }
    const auto diag = scheme_diagnostics(scheme, radius, tol);
    emit(g, "scheme_check",
         {{"check", "scheme"},
          {"volume", scheme.volume()},
          {"points", diag.points},
          {"injectivity_min_distance", diag.injectivity_min_distance},
          {"injectivity_pass", diag.injectivity_pass},
          {"internal_covering_radius", diag.internal_covering_radius},
          {"integrality_deviation", diag.integrality_deviation},
          {"integrality_pass", diag.integrality_pass},
          {"verdict", diag.pass ? "pass" : "fail"}});
    return diag.pass ? kOk : kFail;
}

// ---- modelset -----------------------------------------------------------------------------------

int modelset_enumerate(const Globals& g) {
    const Doc d(g.config);
    const auto spec = spec_of(d);
    const double radius = d.root.positive_or("radius", 10.0);
    const double density = spec.window.measure() / spec.scheme.volume();
    if (g.dry_run) {
        print_dry_run({{"radius", radius}, {"estimated_points", density * 4.0 * radius * radius}});
        return kOk;
    }
    std::shared_ptr<const Bump> bump;
    if (d.root.has("bump")) bump = bump_of(d, spec);
    const auto pts = enumerate_model_set(spec, radius, bump.get());
    std::vector<std::vector<double>> rows;
    for (const auto& p : pts.points) rows.push_back({p.lambda(0), p.lambda(1), p.internal, p.weight});
    emit_csv(g, "modelset_points", {"x", "omega", "internal", "weight"}, rows);
    json sample = json::array();
    for (std::size_t k = 0; k < std::min<std::size_t>(16, pts.size()); ++k)
        sample.push_back({{"lambda", {pts.points[k].lambda(0), pts.points[k].lambda(1)}},
                          {"internal", pts.points[k].internal},
                          {"weight", pts.points[k].weight}});
    emit(g, "modelset_enumerate",
         {{"check", "modelset_enumerate"}, {"radius", radius}, {"count", pts.size()}, {"first_points", sample},
          {"verdict", "report-only"}});
    return kOk;
}

int modelset_density(const Globals& g) {
    const Doc d(g.config);
    const auto spec = spec_of(d);
    const double radius = d.root.positive_or("radius", 100.0);
    const double tol = d.root.positive_or("tol", 2e-2);
    if (g.dry_run) {
        print_dry_run({{"radius", radius},
                       {"estimated_points", spec.window.measure() / spec.scheme.volume() * kPi * radius * radius}});
        return kOk;
    }
    const auto e = density_estimate(spec, radius);
    const bool pass = e.relative_gap < tol;
    emit(g, "modelset_density",
         {{"check", "density"},
          {"radius", radius},
          {"count", e.count},
          {"estimate", e.estimate},
          {"theoretical", e.theoretical},
          {"relative_gap", e.relative_gap},
          {"tol", tol},
          {"verdict", pass ? "pass" : "fail"}});
    return pass ? kOk : kFail;
}

int modelset_genericity(const Globals& g) {
    const Doc d(g.config);
    const auto spec = spec_of(d);
    const double radius = d.root.positive_or("radius", 10.0);
    if (g.dry_run) {
        print_dry_run({{"radius", radius}});
        return kOk;
    }
    const double margin = genericity_margin(spec, radius);
    emit(g, "modelset_genericity",
         {{"check", "genericity"},
          {"radius", radius},
          {"margin", std::isfinite(margin) ? json(margin) : json("inf")},
          {"verdict", margin > 0.0 ? "pass" : "fail"}});
    return margin > 0.0 ? kOk : kFail;
}

// ---- bump ---------------------------------------------------------------------------------------

int bump_eval(const Globals& g) {
    const Doc d(g.config);
    const auto spec = spec_of(d);
    const auto bs = bump_from(d.at_or_empty("bump"), spec.window);
    std::vector<double> pts{0.0};
    if (d.root.has("points")) {
        pts.clear();
        const auto node = d.root.at("points");
        for (std::size_t i = 0; i < node.size(); ++i) pts.push_back(node.at(i).number());
    }
    if (g.dry_run) {
        print_dry_run({{"points", pts.size()}, {"omega_n_measure", bs.omega_n_measure()}});
        return kOk;
    }
    const Bump bump(bs);
    json rows = json::array();
    std::vector<std::vector<double>> csv;
    for (double v : pts) {
        const double val = bump.value(v), hat = bump.hat(v), hs = bump.hat_squared(v);
        rows.push_back({{"v", v}, {"psi", val}, {"psi_hat", hat}, {"psi_squared_hat", hs}});
        csv.push_back({v, val, hat, hs});
    }
    emit_csv(g, "bump_eval", {"v", "psi", "psi_hat", "psi_squared_hat"}, csv);
    emit(g, "bump_eval",
         {{"check", "bump_eval"},
          {"n", bs.n},
          {"eps", bs.eps},
          {"omega_n_measure", bs.omega_n_measure()},
          {"l2_norm_squared", bump.l2_norm_squared()},
          {"values", rows},
          {"verdict", "report-only"}});
    return kOk;
}

int bump_table(const Globals& g) {
    const Doc d(g.config);
    const auto spec = spec_of(d);
    const auto bs = bump_from(d.at_or_empty("bump"), spec.window);
    if (g.dry_run) {
        print_dry_run({{"core_points", 1 << 14}});
        return kOk;
    }
    const Bump bump(bs);
    const auto& grid = bump.grid();
    std::vector<std::vector<double>> csv;
    for (std::size_t j = 0; j < grid.size; ++j) csv.push_back({grid.at(j), bump.values()[j]});
    emit_csv(g, "bump_table", {"v", "psi"}, csv);
    emit(g, "bump_table",
         {{"check", "bump_table"},
          {"grid", {{"start", grid.start}, {"step", grid.step}, {"size", grid.size}}},
          {"hat_l1", bump.hat_l1()},
          {"hat_squared_limit", bump.hat_squared_limit()},
          {"verdict", "report-only"}});
    return kOk;
}

// ---- psf ----------------------------------------------------------------------------------------

int psf_lattice(const Globals& g) {
    const Doc d(g.config);
    const auto lat = lattice_of(d);
    const auto F = gaussian2d_from(d.at_or_empty("F"));
    const auto z = d.root.point_or("z", {0.0, 0.0});
    if (g.dry_run) {
        print_dry_run({{"primal_radius", F.radius(1e-20)}, {"dual_radius", F.hat_radius(1e-20)}});
        return kOk;
    }
    auto rep = psf_lattice_verify(lat, F, z);
    rep.seed = g.seed;
    emit(g, "psf_lattice", to_json(rep));
    return verdict_exit(rep.verdict);
}

int psf_modelset(const Globals& g) {
    const Doc d(g.config);
    const auto spec = spec_of(d);
    const auto F = gaussian2d_from(d.at_or_empty("F"));
    const auto z = d.root.point_or("z", {0.0, 0.0});
    if (g.dry_run) {
        const double r = F.radius(1e-18);
        print_dry_run({{"primal_radius", r},
                       {"estimated_primal_points", spec.window.measure() / spec.scheme.volume() * 4.0 * r * r}});
        return kOk;
    }
    const auto bump = bump_of(d, spec);
    auto rep = psf_modelset_verify(spec, *bump, F, z);
    rep.seed = g.seed;
    emit(g, "psf_modelset", to_json(rep));
    return verdict_exit(rep.verdict);
}

// ---- bracket ------------------------------------------------------------------------------------

int bracket_eval(const Globals& g) {
    const Doc d(g.config);
    const auto spec = spec_of(d);
    const auto f = analytic_or_g0(d, "f");
    const auto h = analytic_or_g0(d, "g");
    const auto z = d.root.point_or("z", {0.0, 0.0});
    const auto zt = d.root.point_or("z_tilde", {0.0, 0.0});
    const double radius = d.root.number_or("radius", 0.0);
    const double tol = d.root.positive_or("tol", 1e-6);
    if (g.dry_run) {
        const double r = radius > 0.0 ? radius : ambiguity_radius(f, h);
        print_dry_run({{"primal_radius", r},
                       {"estimated_terms", spec.window.measure() / spec.scheme.volume() * 4.0 * r * r}});
        return kOk;
    }
    const auto bump = bump_of(d, spec);
    const auto series = bracket_series(f, h, *bump, spec, z, radius);
    const auto dual = bracket_dual(f, h, *bump, spec, z, zt);
    Report rep;
    rep.check = "bracket";
    rep.seed = g.seed;
    rep.set_sides(series(zt), dual.value);
    rep.tail_lhs = series.tail;
    rep.tail_rhs = dual.tail;
    rep.decide(tol, false);
    rep.params = {{"z", point_json(z)}, {"z_tilde", point_json(zt)}};
    rep.details = {{"primal_terms", series.size()},
                   {"dual_terms", dual.terms},
                   {"dual_radius", dual.physical_radius},
                   {"internal_cutoff", dual.internal_cutoff}};
    std::vector<std::vector<double>> csv;
    for (const auto& t : series.terms) csv.push_back({t.freq.x, t.freq.omega, t.coef.real(), t.coef.imag()});
    emit_csv(g, "bracket_series", {"freq_x", "freq_omega", "re", "im"}, csv);
    emit(g, "bracket_eval", to_json(rep));
    return verdict_exit(rep.verdict);
}

// ---- nseries ------------------------------------------------------------------------------------

struct NSeriesRun {
    NSeries ns;
    Domain domain;
    WindowFamily w;
    AnalyticWindow f1, f2;
};

NSeriesRun build_nseries(const Doc& d, const std::string& kind, const std::string& kernel) {
    NSeriesRun run{{}, domain_of(d, kind, kernel), {analytic_list(d, "g"), {}}, analytic_or_g0(d, "f1"),
                   analytic_or_g0(d, "f2")};
    run.w.h = d.root.has("h") ? analytic_list(d, "h") : run.w.g;
    if (run.w.g.size() != run.w.h.size()) d.root.at("h").fail("g and h must have the same length");
    NSeriesOptions opt;
    opt.R1 = d.root.positive_or("R1", 0.0);
    opt.T = d.root.positive_or("T", 0.0);
    opt.tail_target = d.root.positive_or("tail_target", opt.tail_target);
    if (const auto* lat = std::get_if<PlainLattice>(&run.domain))
        run.ns = n_series_lattice(*lat, run.w, run.f1, run.f2, opt);
    else {
        const auto& md = std::get<ModelSetDomain>(run.domain);
        run.ns = n_series_modelset(md.spec, md.kernel, run.w, run.f1, run.f2, opt);
    }
    return run;
}

json nseries_json(const NSeries& ns) {
    return {{"terms", ns.series.size()}, {"R1", ns.R1},           {"T", ns.T},
            {"tail", ns.tail},           {"conditional", ns.conditional}, {"enumerated", ns.enumerated}};
}

int nseries_build(const Globals& g, const std::string& kind, const std::string& kernel) {
    const Doc d(g.config);
    if (g.dry_run) {
        const auto dom = domain_of(d, kind, kernel);
        print_dry_run({{"domain", kind}, {"density", domain_density(dom)}});
        return kOk;
    }
    const auto run = build_nseries(d, kind, kernel);
    std::vector<std::vector<double>> csv;
    for (const auto& t : run.ns.series.terms) csv.push_back({t.freq.x, t.freq.omega, t.coef.real(), t.coef.imag()});
    emit_csv(g, "nseries_terms", {"freq_x", "freq_omega", "re", "im"}, csv);
    json j = {{"check", "nseries_build"}, {"series", nseries_json(run.ns)}, {"verdict", "report-only"}};
    emit(g, "nseries_build", j);
    return kOk;
}

int nseries_eval(const Globals& g, const std::string& kind, const std::string& kernel) {
    const Doc d(g.config);
    const auto zs = points_of(d, "z", {0.0, 0.0});
    const double tol = d.root.positive_or("tol", kind == "lattice" ? 1e-8 : 1e-6);
    if (g.dry_run) {
        print_dry_run({{"domain", kind}, {"points", zs.size()}});
        return kOk;
    }
    const auto run = build_nseries(d, kind, kernel);
    json rows = json::array();
    Verdict verdict = Verdict::pass;
    for (const auto& z : zs) {
        DirectSum direct;
        if (const auto* lat = std::get_if<PlainLattice>(&run.domain))
            direct = n_direct_lattice(*lat, run.w, run.f1, run.f2, z);
        else {
            const auto& md = std::get<ModelSetDomain>(run.domain);
            const auto kern = md.kernel;
            direct = n_direct_modelset(md.spec, [&](double v) { return direct_weight(kern, v); }, run.w, run.f1,
                                       run.f2, z);
        }
        Report rep;
        rep.check = "nseries";
        rep.set_sides(run.ns.series(z), direct.value);
        rep.tail_lhs = run.ns.tail;
        rep.tail_rhs = direct.tail;
        rep.decide(tol, true);
        if (run.ns.conditional) rep.report_only();
        if (rep.verdict == Verdict::fail) verdict = Verdict::fail;
        else if (rep.verdict == Verdict::report_only && verdict == Verdict::pass) verdict = Verdict::report_only;
        json r = to_json(rep, false);
        r["z"] = point_json(z);
        rows.push_back(r);
    }
    emit(g, "nseries_eval",
         {{"check", "nseries_eval"}, {"series", nseries_json(run.ns)}, {"points", rows}, {"verdict", to_string(verdict)}});
    return verdict_exit(verdict);
}

// ---- gabor --------------------------------------------------------------------------------------

GaborSystem system_of(const Doc& d, const std::string& kind, double radius) {
    GaborSystem sys;
    sys.windows = signal_list(d, "g");
    if (kind == "lattice") {
        sys.nodes = nodes_from(lattice_of(d), radius, radius);
    } else {
        const auto spec = spec_of(d);
        std::shared_ptr<const Bump> bump;
        if (d.root.has("bump")) bump = bump_of(d, spec);
        sys.nodes = nodes_from(enumerate_model_set(spec, radius, bump.get()));
    }
    return sys;
}

int gabor_apply(const Globals& g, const std::string& kind) {
    const Doc d(g.config);
    const double radius = d.root.positive_or("radius", 8.0);
    const auto grid = grid_from(d.at_or_empty("grid"));
    if (g.dry_run) {
        print_dry_run({{"radius", radius}, {"grid_points", grid.size}});
        return kOk;
    }
    const auto sys = system_of(d, kind, radius);
    std::optional<std::vector<Signal>> duals;
    if (d.root.has("h")) duals = signal_list(d, "h");
    const Signal f = d.root.has("f") ? signal_from(d.root.at("f")) : Signal(AnalyticWindow::gaussian());
    TruncationPolicy tp = d.root.has("truncation") ? truncation_policy_from(d.root.at("truncation")) : TruncationPolicy{};
    const auto res = frame_apply(sys, duals ? &*duals : nullptr, f, grid, tp);
    std::vector<std::vector<double>> csv;
    for (std::size_t j = 0; j < res.value.size(); ++j)
        csv.push_back({res.value.t(j), res.value.samples[j].real(), res.value.samples[j].imag()});
    emit_csv(g, "gabor_apply", {"t", "re", "im"}, csv);
    emit(g, "gabor_apply",
         {{"check", "frame_apply"},
          {"nodes", sys.nodes.size()},
          {"tail", res.tail},
          {"rounding", res.rounding},
          {"sup_norm", res.value.sup_norm()},
          {"verdict", "report-only"}});
    return kOk;
}

int gabor_bounds(const Globals& g, const std::string& kind) {
    const Doc d(g.config);
    const double radius = d.root.positive_or("radius", 8.0);
    const auto grid = grid_from(d.at_or_empty("grid"));
    if (g.dry_run) {
        print_dry_run({{"radius", radius}, {"grid_points", grid.size}});
        return kOk;
    }
    const auto sys = system_of(d, kind, radius);
    const auto fb = frame_bounds_estimate(sys, grid, {}, g.seed);
    emit(g, "gabor_bounds",
         {{"check", "frame_bounds"},
          {"nodes", sys.nodes.size()},
          {"A", fb.A},
          {"B", fb.B},
          {"residual_A", fb.residual_A},
          {"residual_B", fb.residual_B},
          {"iterations_A", fb.iterations_A},
          {"iterations_B", fb.iterations_B},
          {"converged", fb.converged},
          {"seed", g.seed},
          {"verdict", "report-only"}});
    return kOk;
}

int gabor_covariance(const Globals& g, const std::string& kind) {
    const Doc d(g.config);
    const double radius = d.root.positive_or("radius", 8.0);
    const auto grid = grid_from(d.at_or_empty("grid"));
    const auto z = d.root.point_or("z", {0.3, 0.7});
    const double tol = d.root.positive_or("tol", 1e-6);
    if (g.dry_run) {
        print_dry_run({{"radius", radius}, {"grid_points", grid.size}});
        return kOk;
    }
    const auto sys = system_of(d, kind, radius);
    const auto f = analytic_or_g0(d, "f");
    const double res = covariance_residual(sys, nullptr, z, f, grid);
    const bool pass = res < tol;
    emit(g, "gabor_covariance",
         {{"check", "covariance"},
          {"z", point_json(z)},
          {"nodes", sys.nodes.size()},
          {"residual", res},
          {"tol", tol},
          {"verdict", pass ? "pass" : "fail"}});
    return pass ? kOk : kFail;
}

// ---- duality ------------------------------------------------------------------------------------

DualityPolicy policy_of(const Doc& d) {
    return d.root.has("policy") ? duality_policy_from(d.root.at("policy")) : DualityPolicy{};
}

int duality_report(const Globals& g, const std::string& name, const DualityReport& r, const std::string& report_path) {
    json j = to_json(r);
    j["seed"] = g.seed;
    if (!report_path.empty()) std::ofstream(report_path) << j.dump(2) << '\n';
    std::vector<std::vector<double>> csv;
    for (const auto& e : r.table)
        csv.push_back({e.node.x, e.node.omega, e.internal, e.origin ? 1.0 : 0.0, e.value.real(), e.value.imag(),
                       std::abs(e.residual)});
    emit_csv(g, name, {"x", "omega", "internal", "origin", "re", "im", "abs_residual"}, csv);
    emit(g, name, j);
    return verdict_exit(r.report.verdict);
}

int duality_dry_run(const Doc& d, const std::string& kind, const std::string& kernel) {
    const auto dom = domain_of(d, kind, kernel);
    const auto p = policy_of(d);
    const double r = p.primal_radius > 0.0 ? p.primal_radius : 8.0;
    print_dry_run({{"domain", kind},
                   {"kernel", kind == "modelset" ? kernel : "none"},
                   {"primal_radius", p.primal_radius > 0.0 ? json(p.primal_radius) : json("auto")},
                   {"dual_radius", p.dual_radius > 0.0 ? json(p.dual_radius) : json("auto")},
                   {"internal_cutoff", p.T > 0.0 ? json(p.T) : json("auto")},
                   {"estimate_radius", r},
                   {"estimated_primal_nodes", domain_radius_estimate(dom, r)}});
    return kOk;
}

int duality_figa(const Globals& g, const std::string& kind, const std::string& kernel, const std::string& report) {
    const Doc d(g.config);
    if (g.dry_run) return duality_dry_run(d, kind, kernel);
    WindowFamily w{analytic_list(d, "g"), {}};
    w.h = d.root.has("h") ? analytic_list(d, "h") : w.g;
    const auto r = figa_check(domain_of(d, kind, kernel), w, analytic_or_g0(d, "f1"), analytic_or_g0(d, "f2"),
                              policy_of(d));
    return duality_report(g, "duality_figa", r, report);
}

int duality_janssen(const Globals& g, const std::string& kind, const std::string& kernel, const std::string& report) {
    const Doc d(g.config);
    if (g.dry_run) return duality_dry_run(d, kind, kernel);
    const auto gs = signal_list(d, "g");
    const auto hs = d.root.has("h") ? signal_list(d, "h") : gs;
    const Signal f = d.root.has("f") ? signal_from(d.root.at("f")) : Signal(AnalyticWindow::gaussian());
    const auto grid = grid_from(d.at_or_empty("grid"));
    const auto jr = janssen_apply(domain_of(d, kind, kernel), gs, hs, f, grid, policy_of(d));
    std::vector<std::vector<double>> csv;
    for (std::size_t j = 0; j < jr.value.size(); ++j)
        csv.push_back({jr.value.t(j), jr.value.samples[j].real(), jr.value.samples[j].imag(),
                       jr.direct.samples[j].real(), jr.direct.samples[j].imag()});
    emit_csv(g, "janssen_values", {"t", "janssen_re", "janssen_im", "direct_re", "direct_im"}, csv);
    return duality_report(g, "duality_janssen", jr.report, report);
}

int duality_wr(const Globals& g, const std::string& kind, const std::string& kernel, const std::string& report) {
    const Doc d(g.config);
    if (g.dry_run) return duality_dry_run(d, kind, kernel);
    const auto gs = signal_list(d, "g");
    const auto hs = d.root.has("h") ? signal_list(d, "h") : gs;
    const auto r = wexler_raz_residuals(domain_of(d, kind, kernel), gs, hs, policy_of(d));
    return duality_report(g, "duality_wexler_raz", r, report);
}

int duality_weighted(const Globals& g, bool tight, const std::string& report) {
    const Doc d(g.config);
    if (g.dry_run) return duality_dry_run(d, "modelset", "psi2");
    const auto spec = spec_of(d);
    const auto bump = bump_of(d, spec);
    const auto gs = analytic_list(d, "g");
    const auto r = tight ? weighted_tight_residuals(spec, bump, gs, policy_of(d))
                         : weighted_dual_residuals(spec, bump, gs, d.root.has("h") ? analytic_list(d, "h") : gs,
                                                   policy_of(d));
    return duality_report(g, tight ? "duality_tight" : "duality_dual", r, report);
}

int duality_density(const Globals& g, const std::string& kind, const std::string& kernel, const std::string& report) {
    const Doc d(g.config);
    if (g.dry_run) return duality_dry_run(d, kind, kernel);
    const Signal gs = d.root.has("g") ? signal_from(d.root.at("g")) : Signal(AnalyticWindow::gaussian());
    const Signal hs = d.root.has("h") ? signal_from(d.root.at("h")) : gs;
    const auto dom = domain_of(d, kind, kernel);
    const auto policy = policy_of(d);
    double B = 1.0;
    json bound_source = "default";
    if (d.root.has("upper_bound") && d.root.at("upper_bound").raw().is_string()) {
        if (d.root.at("upper_bound").string() != "estimate") d.root.at("upper_bound").fail("expected a number or \"estimate\"");
        const double radius = d.root.positive_or("radius", 12.0);
        GaborSystem sys;
        sys.windows = {gs};
        if (policy.nodes)
            sys.nodes = *policy.nodes;
        else if (const auto* lat = std::get_if<PlainLattice>(&dom))
            sys.nodes = nodes_from(*lat, radius, radius);
        else {
            const auto& md = std::get<ModelSetDomain>(dom);
            for (auto n : nodes_from(enumerate_model_set(md.spec, radius))) {
                n.weight = direct_weight(md.kernel, n.internal);
                sys.nodes.push_back(n);
            }
        }
        const auto fb = frame_bounds_estimate(sys, grid_from(d.at_or_empty("grid")), {}, g.seed);
        B = fb.B;
        bound_source = {{"estimate", fb.B}, {"converged", fb.converged}, {"nodes", sys.nodes.size()}};
    } else if (d.root.has("upper_bound")) {
        B = d.root.at("upper_bound").positive();
        bound_source = "config";
    }
    const auto dd = density_diagnostic(dom, gs, hs, B, policy);
    json j = to_json(dd.report);
    j["density"] = dd.density;
    j["inner_hg"] = complex_json(dd.inner_hg);
    j["frame_sum"] = complex_json(dd.frame_sum);
    j["abs_sum"] = dd.abs_sum;
    j["bessel_bound"] = dd.bessel_bound;
    j["wr_origin"] = dd.wr_origin;
    j["wr_offorigin_max"] = dd.wr_offorigin_max;
    j["wr_floor"] = dd.wr_floor;
    j["consistent"] = dd.consistent;
    j["upper_bound_source"] = bound_source;
    j["seed"] = g.seed;
    if (!report.empty()) std::ofstream(report) << j.dump(2) << '\n';
    emit(g, "duality_density", j);
    return verdict_exit(dd.report.verdict);
}

// ---- suite --------------------------------------------------------------------------------------

int suite_acceptance(const Globals& g, const std::vector<std::string>& only) {
    if (g.dry_run) {
        print_dry_run({{"criteria", only.empty() ? json("AC-1..AC-10") : json(only)}});
        return kOk;
    }
    const auto results = run_acceptance(g.seed, only);
    json arr = json::array();
    std::vector<std::vector<double>> csv;
    int fails = 0;
    for (std::size_t k = 0; k < results.size(); ++k) {
        const auto& r = results[k];
        std::cerr << summary_line(r) << '\n';
        arr.push_back(to_json(r));
        csv.push_back({std::stod(r.id.substr(r.id.find('-') + 1)), r.measured, r.tol, r.verdict == Verdict::fail ? 0.0 : 1.0,
                       r.runtime_ms});
        if (r.verdict == Verdict::fail) ++fails;
    }
    emit_csv(g, "acceptance_summary", {"criterion", "measured", "tol", "pass", "runtime_ms"}, csv);
    emit(g, "acceptance", {{"seed", g.seed}, {"results", arr}, {"failures", fails}});
    return fails == 0 ? kOk : kFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gabor frames on lattices and model sets: identity checks and operators"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config, "JSON configuration file");
    app.add_option("--out", g.out, "Directory for JSON and CSV outputs");
    app.add_option("--seed", g.seed, "Seed for randomized estimates");
    app.add_option("--threads", g.threads, "Accepted for compatibility; computations are single-threaded")
        ->check(CLI::PositiveNumber);
    app.add_flag("--dry-run", g.dry_run, "Print truncation radii and estimated counts only");

    std::function<int()> action;
    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc, std::function<int()> fn) {
        auto* sub = parent->add_subcommand(name, desc);
        sub->callback([&action, fn] { action = fn; });
        return sub;
    };
    auto group = [&](const std::string& name, const std::string& desc) {
        auto* sub = app.add_subcommand(name, desc);
        sub->require_subcommand(1);
        return sub;
    };

    auto* scheme = group("scheme", "Cut-and-project scheme diagnostics");
    leaf(scheme, "check", "Injectivity, density and integrality checks", [&] { return scheme_check(g); });

    auto* ms = group("modelset", "Model set enumeration and diagnostics");
    leaf(ms, "enumerate", "List model set points in a box", [&] { return modelset_enumerate(g); });
    leaf(ms, "density", "Counting density against |Omega|/vol", [&] { return modelset_density(g); });
    leaf(ms, "genericity", "Distance of internal coordinates from the window boundary",
         [&] { return modelset_genericity(g); });

    auto* bump = group("bump", "Bump function psi_n");
    leaf(bump, "eval", "Evaluate psi_n and its transforms", [&] { return bump_eval(g); });
    leaf(bump, "table", "Dump the tabulated psi_n", [&] { return bump_table(g); });

    auto* psf = group("psf", "Poisson summation checks");
    leaf(psf, "lattice", "Lattice Poisson summation", [&] { return psf_lattice(g); });
    leaf(psf, "modelset", "Weighted model set Poisson summation", [&] { return psf_modelset(g); });

    auto* bracket = group("bracket", "Bracket products");
    leaf(bracket, "eval", "Primal series against dual evaluation", [&] { return bracket_eval(g); });

    std::string domain = "lattice", kernel = "psi2", report;
    auto add_domain = [&](CLI::App* sub) {
        sub->add_option("--domain", domain, "lattice or modelset")->check(CLI::IsMember({"lattice", "modelset"}));
        sub->add_option("--kernel", kernel, "psi2, phi_n or phi_limit")
            ->check(CLI::IsMember({"psi2", "phi_n", "phi_limit"}));
    };
    auto* ns = group("nseries", "Dual-side N-function series");
    add_domain(leaf(ns, "build", "Build the series and dump its terms", [&] { return nseries_build(g, domain, kernel); }));
    add_domain(leaf(ns, "eval", "Evaluate the series against the direct sum", [&] { return nseries_eval(g, domain, kernel); }));

    auto* gabor = group("gabor", "Gabor systems and frame operators");
    add_domain(leaf(gabor, "apply", "Apply the (mixed) frame operator", [&] { return gabor_apply(g, domain); }));
    add_domain(leaf(gabor, "bounds", "Estimate frame bounds", [&] { return gabor_bounds(g, domain); }));
    add_domain(leaf(gabor, "covariance", "Covariance residual of the frame operator", [&] { return gabor_covariance(g, domain); }));

    auto* dual = group("duality", "Duality identities");
    auto add_report = [&](CLI::App* sub) {
        add_domain(sub);
        sub->add_option("--report", report, "Write the JSON report to this path");
    };
    add_report(leaf(dual, "figa", "Fundamental identity", [&] { return duality_figa(g, domain, kernel, report); }));
    add_report(leaf(dual, "janssen", "Janssen representation", [&] { return duality_janssen(g, domain, kernel, report); }));
    add_report(leaf(dual, "wexler-raz", "Wexler-Raz biorthogonality", [&] { return duality_wr(g, domain, kernel, report); }));
    add_report(leaf(dual, "tight", "Weighted tight frame residuals", [&] { return duality_weighted(g, true, report); }));
    add_report(leaf(dual, "dual", "Weighted dual frame residuals", [&] { return duality_weighted(g, false, report); }));
    add_report(leaf(dual, "density", "Density diagnostic", [&] { return duality_density(g, domain, kernel, report); }));

    auto* suite = group("suite", "Test suites");
    std::vector<std::string> only;
    leaf(suite, "acceptance", "Run the acceptance criteria", [&] { return suite_acceptance(g, only); })
        ->add_option("--only", only, "Restrict to these criteria, e.g. AC-3");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }
    try {
        return action ? action() : kConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFail;
    }
}
