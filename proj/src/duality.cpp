#include "mgabor/duality.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mgabor {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

nlohmann::json point_json(const PhasePoint& p) { return nlohmann::json::array({p.x, p.omega}); }

bool is_analytic(const Signal& s) { return std::holds_alternative<AnalyticWindow>(s); }

bool all_analytic(const std::vector<Signal>& v) { return std::all_of(v.begin(), v.end(), is_analytic); }

/// Interval [lo, hi] outside of which the signal vanishes or is negligible.
std::pair<double, double> support(const Signal& s) {
    if (const auto* a = std::get_if<AnalyticWindow>(&s)) {
        const double r = a->essential_radius(1e-17);
        return {-r, r};
    }
    const auto& f = std::get<SampledSignal>(s);
    std::size_t lo = f.size(), hi = 0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        if (f.samples[j] != 0.0) {
            lo = std::min(lo, j);
            hi = j;
        }
    }
    if (lo == f.size()) return {0.0, 0.0};
    return {f.t(lo), f.t(hi)};
}

double sampled_step(const std::vector<Signal>& v) {
    double step = 0.0;
    for (const auto& s : v)
        if (const auto* f = std::get_if<SampledSignal>(&s)) step = step == 0.0 ? f->step : std::min(step, f->step);
    return step;
}

cplx window_coefficient(const std::vector<Signal>& g, const std::vector<Signal>& h, const PhasePoint& mu) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (is_analytic(g[i]) && is_analytic(h[i]))
            s += stft(std::get<AnalyticWindow>(h[i]), std::get<AnalyticWindow>(g[i]), mu);
        else
            s += stft(h[i], g[i], mu).value;
    }
    return s;
}

/// One element of the dual set: beta in Lambda^* or p1^*(eta), with mu = J beta.
struct DualNode {
    PhasePoint beta;
    PhasePoint mu;
    double internal = 0.0;
    bool origin = false;
    double factor = 0.0;
};

struct DualSet {
    std::vector<DualNode> nodes;
    double radius_time = 0.0;
    double radius_freq = 0.0;
    double T = 0.0;
    double scale = 0.0;
    double internal_tail = 0.0;
    bool conditional = false;
};

bool all_zero(const std::int64_t* c, int n) {
    for (int i = 0; i < n; ++i)
        if (c[i] != 0) return false;
    return true;
}

/// Time and frequency radii of mu = J beta over which <h_i, pi(mu) g_i> can be non-negligible.
std::pair<double, double> dual_radii(const std::vector<Signal>& g, const std::vector<Signal>& h,
                                     const DualityPolicy& policy) {
    if (policy.dual_radius > 0.0) return {policy.dual_radius, policy.dual_radius};
    if (all_analytic(g) && all_analytic(h)) {
        auto mag = [&](const PhasePoint& beta) { return std::abs(window_coefficient(g, h, apply_J(beta))); };
        const double r = dual_physical_radius(mag, 1e-17);
        return {r, r};
    }
    double extent = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto [gs, ge] = support(g[i]);
        const auto [hs, he] = support(h[i]);
        extent = std::max({extent, std::abs(hs - ge), std::abs(he - gs)});
    }
    const double nyquist = 0.5 / sampled_step(g.size() ? g : h);
    return {extent, nyquist};
}

DualSet build_dual_set(const Domain& domain, const std::vector<Signal>& g, const std::vector<Signal>& h,
                       const DualityPolicy& policy) {
    if (g.empty() || g.size() != h.size()) throw std::invalid_argument("window lists must be nonempty and of equal size");
    DualSet out;
    const auto [rt, rf] = dual_radii(g, h, policy);
    out.radius_time = rt;
    out.radius_freq = rf;
    const double step = sampled_step(g);
    const double nyquist = step > 0.0 ? 0.5 / step : std::numeric_limits<double>::infinity();
    // mu = (beta.omega, -beta.x): time radius bounds beta.omega, frequency radius bounds beta.x
    auto keep = [&](const PhasePoint& mu) {
        if (std::abs(mu.x) > rt * (1.0 + 1e-12) || std::abs(mu.omega) > rf * (1.0 + 1e-12)) return false;
        // one full period of the sampled frequency axis: [-nyquist, nyquist)
        return !(mu.omega >= nyquist * (1.0 - 1e-12));
    };
    if (const auto* lat = std::get_if<PlainLattice>(&domain)) {
        out.scale = 1.0 / lat->volume();
        const PlainLattice dual = lat->dual();
        const int n = dual.lattice().dim();
        dual.for_each_in_box(Box{{-rf, -rt}, {rf, rt}}, [&](const std::int64_t* c, const double* e) {
            const PhasePoint beta{e[0], e[1]};
            const PhasePoint mu = apply_J(beta);
            if (!keep(mu)) return;
            out.nodes.push_back(DualNode{beta, mu, 0.0, all_zero(c, n), out.scale});
        });
        return out;
    }
    const auto& md = std::get<ModelSetDomain>(domain);
    if (md.spec.d() != 1) throw std::invalid_argument("d = 1 only");
    if (md.spec.shift) throw std::invalid_argument("shifted model sets are not supported here");
    out.scale = kernel_scale(md.spec, md.kernel);
    const double vol = md.spec.scheme.volume();
    double peak = 0.0, mass = 0.0;
    if (md.kernel.envelope_summable()) {
        const double hstep = 0.125;
        const int nb = static_cast<int>(std::ceil(std::max(rt, rf) / hstep));
        for (int i = -nb; i <= nb; ++i)
            for (int j = -nb; j <= nb; ++j) {
                const double m = std::abs(window_coefficient(g, h, apply_J({i * hstep, j * hstep})));
                mass += m;
                peak = std::max(peak, m);
            }
        mass *= hstep * hstep;
    }
    if (policy.T > 0.0) {
        out.T = policy.T;
    } else {
        if (!md.kernel.envelope_summable()) throw Error("phi_limit needs an explicit internal cutoff");
        out.T = internal_cutoff(md.kernel, out.scale * vol * mass,
                                policy.tail_target * out.scale * std::max(peak, 1e-300) * std::abs(md.kernel(0.0)));
    }
    if (md.kernel.envelope_summable()) {
        out.internal_tail =
            out.scale * vol * mass * wiener_profile(md.kernel).tail(static_cast<std::size_t>(std::ceil(out.T)));
    } else {
        out.internal_tail = std::numeric_limits<double>::infinity();
        out.conditional = true;
    }
    const CutProjectScheme dual = dual_scheme(md.spec.scheme);
    const int n = dual.dim();
    dual.for_each_in_box(Box{{-rf, -rt, -out.T}, {rf, rt, out.T}}, [&](const std::int64_t* c, const double* e) {
        const PhasePoint beta{e[0], e[1]};
        const PhasePoint mu = apply_J(beta);
        if (!keep(mu)) return;
        const double k = md.kernel(-e[2]);
        out.nodes.push_back(DualNode{beta, mu, e[2], all_zero(c, n), out.scale * k});
    });
    return out;
}

bool report_only_kernel(const Domain& domain) {
    const auto* md = std::get_if<ModelSetDomain>(&domain);
    return md && md->kernel.kind() == KernelKind::phi_limit;
}

nlohmann::json domain_json(const Domain& domain) {
    if (const auto* lat = std::get_if<PlainLattice>(&domain)) {
        const auto& B = lat->basis();
        return {{"domain", "lattice"}, {"basis", {{B(0, 0), B(0, 1)}, {B(1, 0), B(1, 1)}}}};
    }
    const auto& md = std::get<ModelSetDomain>(domain);
    return {{"domain", "modelset"}, {"omega_half_width", md.spec.window.half_width}, {"kernel", md.kernel.name()}};
}

/// Primal nodes with the weights matching the domain's dual kernel.
std::vector<Node> primal_nodes(const Domain& domain, double radius, const DualityPolicy& policy) {
    if (policy.nodes) return *policy.nodes;
    if (const auto* lat = std::get_if<PlainLattice>(&domain)) return nodes_from(*lat, radius, radius);
    const auto& md = std::get<ModelSetDomain>(domain);
    auto pts = enumerate_model_set(md.spec, radius);
    std::vector<Node> out;
    out.reserve(pts.size());
    for (const auto& p : pts.points) {
        const double w = direct_weight(md.kernel, p.internal);
        if (w != 0.0) out.push_back(Node{{p.lambda[0], p.lambda[1]}, w, p.internal});
    }
    return out;
}

void require_generic(const Domain& domain, double radius) {
    const auto* md = std::get_if<ModelSetDomain>(&domain);
    if (!md || md->kernel.kind() != KernelKind::phi_limit) return;
    if (!(genericity_margin(md->spec, radius) > 0.0)) throw Error("genericity violated");
}

}  // namespace

nlohmann::json to_json(const DualityReport& r, bool include_runtime, std::size_t max_rows) {
    auto j = to_json(r.report, include_runtime);
    j["sup_residual"] = r.sup_residual;
    j["table_size"] = r.table.size();
    std::vector<const ResidualEntry*> rows;
    for (const auto& e : r.table) rows.push_back(&e);
    std::stable_sort(rows.begin(), rows.end(), [](const ResidualEntry* a, const ResidualEntry* b) {
        return std::abs(a->residual) > std::abs(b->residual);
    });
    if (rows.size() > max_rows) rows.resize(max_rows);
    auto table = nlohmann::json::array();
    for (const auto* e : rows)
        table.push_back({{"node", point_json(e->node)}, {"internal", e->internal}, {"origin", e->origin},
                         {"value", complex_json(e->value)}, {"residual", complex_json(e->residual)}});
    j["largest_residuals"] = table;
    return j;
}

double direct_weight(const DecayKernel& kernel, double internal) {
    switch (kernel.kind()) {
        case KernelKind::phi_limit: return kernel.omega().contains(internal) ? 1.0 : 0.0;
        case KernelKind::phi_n: return kernel.omega().measure() * kernel.bump()->value(internal);
        case KernelKind::psi_hat_squared: return kernel.bump()->value(internal);
    }
    return 0.0;
}

double domain_density(const Domain& domain) {
    if (const auto* lat = std::get_if<PlainLattice>(&domain)) return 1.0 / lat->volume();
    const auto& md = std::get<ModelSetDomain>(domain);
    return md.spec.window.measure() / md.spec.scheme.volume();
}

DualityReport figa_check(const Domain& domain, const WindowFamily& w, const AnalyticWindow& f1,
                         const AnalyticWindow& f2, const DualityPolicy& policy) {
    const auto t0 = Clock::now();
    DualityReport out;
    Report& rep = out.report;
    rep.check = "figa";
    NSeriesOptions opt;
    opt.R1 = policy.dual_radius;
    opt.T = policy.T;
    opt.tail_target = policy.tail_target;
    const PhasePoint origin{0.0, 0.0};
    NSeries ns;
    DirectSum direct;
    if (const auto* lat = std::get_if<PlainLattice>(&domain)) {
        direct = n_direct_lattice(*lat, w, f1, f2, origin, policy.primal_radius);
        ns = n_series_lattice(*lat, w, f1, f2, opt);
    } else {
        const auto& md = std::get<ModelSetDomain>(domain);
        double radius = policy.primal_radius;
        if (radius <= 0.0)
            for (std::size_t i = 0; i < w.g.size(); ++i)
                radius = std::max(radius, std::min(ambiguity_radius(f1, w.g[i]), ambiguity_radius(f2, w.h[i])));
        require_generic(domain, radius);
        direct = n_direct_modelset(md.spec, [&](double v) { return direct_weight(md.kernel, v); }, w, f1, f2, origin,
                                   radius);
        ns = n_series_modelset(md.spec, md.kernel, w, f1, f2, opt);
    }
    rep.set_sides(direct.value, ns.series(origin));
    rep.tail_lhs = direct.tail;
    rep.tail_rhs = ns.tail;
    rep.params = domain_json(domain);
    rep.params["windows"] = w.g.size();
    rep.details = {{"primal_terms", direct.terms}, {"dual_terms", ns.series.size()}, {"dual_radius", ns.R1},
                   {"internal_cutoff", ns.T}, {"conditional", ns.conditional}};
    const bool lattice = std::holds_alternative<PlainLattice>(domain);
    rep.decide(policy.tol > 0.0 ? policy.tol : (lattice ? 1e-8 : 1e-6), true);
    if (ns.conditional) rep.report_only();
    rep.runtime_ms = elapsed_ms(t0);
    return out;
}

JanssenResult janssen_apply(const Domain& domain, const std::vector<Signal>& g, const std::vector<Signal>& h,
                            const Signal& f, const GridSpec& grid, const DualityPolicy& policy) {
    const auto t0 = Clock::now();
    if (grid.size == 0) throw std::invalid_argument("empty grid");
    JanssenResult out;
    Report& rep = out.report.report;
    rep.check = "janssen";
    const DualSet ds = build_dual_set(domain, g, h, policy);

    // dual side: sum over mu of c(mu) pi(mu) f on the grid
    std::vector<std::pair<PhasePoint, cplx>> terms;
    double cmax = 0.0;
    for (const auto& n : ds.nodes) {
        if (n.factor == 0.0) continue;
        const cplx c = n.factor * window_coefficient(g, h, n.mu);
        cmax = std::max(cmax, std::abs(c));
        terms.emplace_back(n.mu, c);
    }
    double dropped = 0.0;
    std::vector<std::pair<PhasePoint, cplx>> kept;
    for (const auto& [mu, c] : terms) {
        if (std::abs(c) < 1e-16 * cmax) {
            dropped += std::abs(c);
            continue;
        }
        kept.emplace_back(mu, c);
    }
    double shell = 0.0;
    for (const auto& [mu, c] : kept)
        if (std::abs(mu.x) > ds.radius_time - 1.0 || std::abs(mu.omega) > ds.radius_freq - 1.0) shell += std::abs(c);

    out.value = SampledSignal::zeros(grid.start, grid.step, grid.size);
    double rounding = 0.0;
    double fsup = 0.0;
    if (const auto* fa = std::get_if<AnalyticWindow>(&f)) {
        for (std::size_t j = 0; j < grid.size; ++j) fsup = std::max(fsup, std::abs((*fa)(grid.t(j))));
        for (const auto& [mu, c] : kept)
            for (std::size_t j = 0; j < grid.size; ++j) {
                const double t = grid.t(j);
                out.value.samples[j] += c * cis2pi(mu.omega * t) * (*fa)(t - mu.x);
            }
    } else {
        const auto& fs = std::get<SampledSignal>(f);
        fsup = fs.sup_norm();
        for (const auto& [mu, c] : kept)
            for (std::size_t j = 0; j < grid.size; ++j) {
                const double t = grid.t(j);
                const double pos = (t - mu.x - fs.start) / fs.step;
                const double idx = std::round(pos);
                rounding = std::max(rounding, std::abs(pos - idx) * fs.step);
                if (idx < 0.0 || idx >= static_cast<double>(fs.size())) continue;
                out.value.samples[j] += c * cis2pi(mu.omega * t) * fs.samples[static_cast<std::size_t>(idx)];
            }
    }
    if (!(fsup > 0.0)) throw std::invalid_argument("f vanishes on the grid");

    // direct side
    double radius = policy.primal_radius;
    if (radius <= 0.0) {
        double wr = 0.0;
        for (const auto& s : g) {
            const auto [lo, hi] = support(s);
            wr = std::max({wr, std::abs(lo), std::abs(hi)});
        }
        radius = std::max(std::abs(grid.start), std::abs(grid.t(grid.size - 1))) + wr + 1.0;
        if (const auto* fa = std::get_if<AnalyticWindow>(&f)) {
            for (const auto& s : g)
                if (const auto* ga = std::get_if<AnalyticWindow>(&s)) radius = std::max(radius, ambiguity_radius(*fa, *ga));
        }
    }
    require_generic(domain, radius);
    GaborSystem sys;
    sys.windows = g;
    sys.nodes = primal_nodes(domain, radius, policy);
    const auto direct = frame_apply(sys, &h, f, grid);
    out.direct = direct.value;

    double gap = 0.0;
    std::size_t at = 0;
    for (std::size_t j = 0; j < grid.size; ++j) {
        const double d = std::abs(out.value.samples[j] - out.direct.samples[j]);
        if (d > gap) {
            gap = d;
            at = j;
        }
    }
    rep.lhs = out.value.samples[at];
    rep.rhs = out.direct.samples[at];
    rep.gap = gap / fsup;
    rep.relative_gap = rep.gap;
    rep.relative = true;
    rep.tail_lhs = ds.internal_tail + shell + dropped;
    rep.tail_rhs = direct.tail / fsup;
    const bool lattice = std::holds_alternative<PlainLattice>(domain);
    rep.tol = policy.tol > 0.0 ? policy.tol : (lattice ? 1e-6 : 1e-3);
    rep.verdict = rep.gap <= rep.tail_lhs + rep.tail_rhs + rep.tol ? Verdict::pass : Verdict::fail;
    if (ds.conditional) rep.report_only();
    rep.params = domain_json(domain);
    rep.params["grid"] = {{"start", grid.start}, {"step", grid.step}, {"size", grid.size}};
    rep.details = {{"dual_terms", kept.size()},
                   {"dual_radius_time", ds.radius_time},
                   {"dual_radius_freq", ds.radius_freq},
                   {"internal_cutoff", ds.T},
                   {"internal_tail", ds.internal_tail},
                   {"primal_nodes", sys.nodes.size()},
                   {"primal_radius", radius},
                   {"sampled_shift_rounding", rounding},
                   {"f_sup", fsup},
                   {"worst_t", grid.t(at)}};
    rep.runtime_ms = elapsed_ms(t0);
    return out;
}

DualityReport wexler_raz_residuals(const Domain& domain, const std::vector<Signal>& g, const std::vector<Signal>& h,
                                   const DualityPolicy& policy) {
    const auto t0 = Clock::now();
    DualityReport out;
    Report& rep = out.report;
    rep.check = "wexler_raz";
    const DualSet ds = build_dual_set(domain, g, h, policy);
    bool origin_seen = false;
    for (const auto& n : ds.nodes) {
        ResidualEntry e;
        e.node = n.mu;
        e.internal = n.internal;
        e.origin = n.origin;
        e.value = n.factor == 0.0 ? cplx{0.0, 0.0} : n.factor * window_coefficient(g, h, n.mu);
        e.residual = e.value - (n.origin ? 1.0 : 0.0);
        if (n.origin) {
            origin_seen = true;
            rep.lhs = e.value;
            rep.rhs = 1.0;
        }
        out.sup_residual = std::max(out.sup_residual, std::abs(e.residual));
        out.table.push_back(e);
    }
    if (!origin_seen) throw Error("dual set misses the origin");
    rep.gap = out.sup_residual;
    rep.relative_gap = out.sup_residual;
    rep.tail_rhs = ds.internal_tail;
    rep.tol = policy.tol > 0.0 ? policy.tol : 1e-8;
    rep.verdict = rep.gap <= rep.tail_rhs + rep.tol ? Verdict::pass : Verdict::fail;
    if (ds.conditional || report_only_kernel(domain)) rep.report_only();
    rep.params = domain_json(domain);
    rep.params["windows"] = g.size();
    rep.details = {{"dual_nodes", out.table.size()}, {"dual_radius_time", ds.radius_time},
                   {"dual_radius_freq", ds.radius_freq}, {"internal_cutoff", ds.T}};
    rep.runtime_ms = elapsed_ms(t0);
    return out;
}

namespace {

DualityReport weighted_residuals(const char* name, const ModelSetSpec& spec, std::shared_ptr<const Bump> bump,
                                 const std::vector<AnalyticWindow>& g, const std::vector<AnalyticWindow>& h,
                                 const DualityPolicy& policy) {
    const ModelSetDomain md{spec, DecayKernel::psi_hat_squared(bump)};
    std::vector<Signal> gs(g.begin(), g.end()), hs(h.begin(), h.end());
    auto out = wexler_raz_residuals(Domain{md}, gs, hs, policy);
    out.report.check = name;
    cplx norm = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) norm += inner_product(h[i], g[i]);
    const double origin = (norm * bump->hat_squared(0.0) / spec.scheme.volume()).real() - 1.0;
    out.report.details["origin_normalization_residual"] = origin;
    return out;
}

}  // namespace

DualityReport weighted_tight_residuals(const ModelSetSpec& spec, std::shared_ptr<const Bump> bump,
                                       const std::vector<AnalyticWindow>& g, const DualityPolicy& policy) {
    return weighted_residuals("weighted_tight", spec, std::move(bump), g, g, policy);
}

DualityReport weighted_dual_residuals(const ModelSetSpec& spec, std::shared_ptr<const Bump> bump,
                                      const std::vector<AnalyticWindow>& g, const std::vector<AnalyticWindow>& h,
                                      const DualityPolicy& policy) {
    if (g.size() != h.size()) throw std::invalid_argument("window lists must be of equal size");
    return weighted_residuals("weighted_dual", spec, std::move(bump), g, h, policy);
}

DensityDiagnostic density_diagnostic(const Domain& domain, const Signal& g, const Signal& h, double upper_bound,
                                     const DualityPolicy& policy) {
    const auto t0 = Clock::now();
    if (!(upper_bound > 0.0)) throw std::invalid_argument("upper frame bound must be positive");
    DensityDiagnostic out;
    out.density = domain_density(domain);
    out.inner_hg = inner_product(h, g).value;

    double radius = policy.primal_radius;
    if (radius <= 0.0 && !policy.nodes) {
        const auto* ga = std::get_if<AnalyticWindow>(&g);
        const auto* ha = std::get_if<AnalyticWindow>(&h);
        if (!ga || !ha) throw std::invalid_argument("sampled windows need explicit nodes or a primal radius");
        radius = ambiguity_radius(*ha, *ga);
    }
    const auto nodes = primal_nodes(domain, radius, policy);
    for (const auto& n : nodes) {
        const cplx c = stft(h, g, n.lambda).value;
        const cplx d = std::conj(stft(g, h, n.lambda).value);
        const double w2 = n.weight * n.weight;
        out.frame_sum += w2 * c * d;
        out.abs_sum += w2 * std::norm(c);
    }
    const double h_energy = std::real(inner_product(h, h).value);
    out.bessel_bound = upper_bound * h_energy;

    const auto wr = wexler_raz_residuals(domain, {g}, {h}, policy);
    for (const auto& e : wr.table) {
        if (e.origin)
            out.wr_origin = std::abs(e.value);
        else
            out.wr_offorigin_max = std::max(out.wr_offorigin_max, std::abs(e.value));
    }
    out.wr_floor = out.wr_origin > 0.0 ? out.wr_offorigin_max / (out.wr_origin + out.wr_offorigin_max) : 1.0;
    const bool bessel_ok = out.abs_sum <= out.bessel_bound * (1.0 + 1e-6) + 1e-12;
    const bool necessity_ok = out.density >= 1.0 || out.wr_floor > 1e-6;
    out.consistent = bessel_ok && necessity_ok;

    Report& rep = out.report;
    rep.check = "density_diagnostic";
    rep.set_sides(out.inner_hg, out.frame_sum);
    rep.params = domain_json(domain);
    rep.params["upper_bound"] = upper_bound;
    rep.details = {{"density", out.density},
                   {"inner_hg", complex_json(out.inner_hg)},
                   {"frame_sum", complex_json(out.frame_sum)},
                   {"abs_sum", out.abs_sum},
                   {"bessel_bound", out.bessel_bound},
                   {"wr_origin", out.wr_origin},
                   {"wr_offorigin_max", out.wr_offorigin_max},
                   {"wr_floor", out.wr_floor},
                   {"bessel_ok", bessel_ok},
                   {"necessity_ok", necessity_ok},
                   {"consistent", out.consistent},
                   {"primal_nodes", nodes.size()}};
    rep.report_only();
    rep.runtime_ms = elapsed_ms(t0);
    return out;
}

PainlessDual painless_dual(double a, double b, const SampledSignal& g) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("a and b must be positive");
    if (g.size() == 0) throw std::invalid_argument("empty window");
    const double ratio = a / g.step;
    const auto period = static_cast<long long>(std::llround(ratio));
    if (period < 1 || std::abs(ratio - static_cast<double>(period)) > 1e-9 * ratio)
        throw std::invalid_argument("a must be a multiple of the window grid step");
    const auto [lo, hi] = support(Signal{g});
    if (hi - lo > 1.0 / b * (1.0 + 1e-12)) throw std::invalid_argument("window support longer than 1/b");

    // the symbol is a-periodic: accumulate |g|^2 by residue class of the sample index
    const auto P = static_cast<std::size_t>(period);
    std::vector<double> symbol(P, 0.0);
    const long long offset = static_cast<long long>(std::llround(g.start / g.step));
    if (std::abs(g.start - static_cast<double>(offset) * g.step) > 1e-9 * g.step)
        throw std::invalid_argument("window grid must contain t = 0");
    for (std::size_t j = 0; j < g.size(); ++j) {
        const long long idx = offset + static_cast<long long>(j);
        const auto r = static_cast<std::size_t>(((idx % period) + period) % period);
        symbol[r] += std::norm(g.samples[j]);
    }
    for (auto& s : symbol) s /= b;
    PainlessDual out;
    out.symbol_min = *std::min_element(symbol.begin(), symbol.end());
    out.symbol_max = *std::max_element(symbol.begin(), symbol.end());
    if (!(out.symbol_min > 1e-12 * out.symbol_max)) throw Error("not a painless frame");
    out.h = g;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const long long idx = offset + static_cast<long long>(j);
        const auto r = static_cast<std::size_t>(((idx % period) + period) % period);
        out.h.samples[j] = g.samples[j] / symbol[r];
    }
    return out;
}

}  // namespace mgabor
