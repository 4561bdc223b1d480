#include "mgabor/appoisson.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace mgabor {

cplx APSeries::operator()(const PhasePoint& z) const {
    cplx acc = 0.0;
    for (const auto& t : terms) acc += t.coef * cis2pi(-t.freq.dot(z));
    return acc;
}

void APSeries::merge_duplicates(double tol) {
    std::vector<APTerm> sorted = terms;
    std::sort(sorted.begin(), sorted.end(), [](const APTerm& a, const APTerm& b) {
        return a.freq.x < b.freq.x || (a.freq.x == b.freq.x && a.freq.omega < b.freq.omega);
    });
    std::vector<APTerm> out;
    for (const auto& t : sorted) {
        bool merged = false;
        for (auto it = out.rbegin(); it != out.rend() && t.freq.x - it->freq.x <= tol; ++it) {
            if (std::abs(t.freq.omega - it->freq.omega) <= tol) {
                it->coef += t.coef;
                merged = true;
                break;
            }
        }
        if (!merged) out.push_back(t);
    }
    terms = std::move(out);
}

APSeries& APSeries::operator+=(const APSeries& o) {
    terms.insert(terms.end(), o.terms.begin(), o.terms.end());
    tail += o.tail;
    merge_duplicates();
    return *this;
}

double Gaussian2D::operator()(const PhasePoint& u) const { return amplitude * std::exp(-kPi * a * u.dot(u)); }
double Gaussian2D::hat(const PhasePoint& xi) const { return amplitude / a * std::exp(-kPi * xi.dot(xi) / a); }
double Gaussian2D::radius(double level) const { return std::sqrt(-std::log(level) / (kPi * a)); }
double Gaussian2D::hat_radius(double level) const { return std::sqrt(-std::log(level) * a / kPi); }

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

/// Visits dual scheme points with |p1* - center|_inf <= R and |p2*| <= T.
template <class F>
void for_each_dual(const CutProjectScheme& dual, const PhasePoint& center, double R, double T, F&& visit) {
    Box box{{center.x - R, center.omega - R, -T}, {center.x + R, center.omega + R, T}};
    dual.for_each_in_box(box, [&](const std::int64_t* c, const double* e) { visit(c, PhasePoint{e[0], e[1]}, e[2]); });
}

double linf(const PhasePoint& p) { return std::max(std::abs(p.x), std::abs(p.omega)); }

/// Upper bound on sum_{k >= T} env(k) for a non-increasing envelope, by dyadic blocks.
double envelope_sum(const std::function<double(double)>& env, double T) {
    double s = env(T);
    double len = 1.0;
    for (int j = 0; j < 200; ++j) {
        const double block = len * env(T + len);
        s += block;
        if (block < 1e-20 * s || block < 1e-300) return s;
        len *= 2.0;
    }
    return std::numeric_limits<double>::infinity();
}

/// Smallest integer T with factor * envelope_sum(env, T) below target.
double envelope_cutoff(const std::function<double(double)>& env, double factor, double target) {
    double lo = 1.0, hi = 1.0;
    while (factor * envelope_sum(env, hi) >= target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e5) return hi;
    }
    while (hi - lo > 1.0) {
        const double mid = std::floor(0.5 * (lo + hi));
        (factor * envelope_sum(env, mid) >= target ? lo : hi) = mid;
    }
    return hi;
}

nlohmann::json point_json(const PhasePoint& p) { return nlohmann::json::array({p.x, p.omega}); }

}  // namespace

Report psf_lattice_verify(const PlainLattice& lattice, const Gaussian2D& F, const PhasePoint& z, double level) {
    const auto t0 = Clock::now();
    if (!(F.a > 0.0)) throw std::invalid_argument("non-decaying F rejected");
    Report rep;
    rep.check = "psf_lattice";
    const double R = F.radius(level) + 1.0;
    cplx lhs = 0.0;
    std::size_t nl = 0;
    lattice.for_each_in_box(Box{{-R, -R}, {R, R}}, [&](const std::int64_t*, const double* e) {
        const PhasePoint l{e[0], e[1]};
        lhs += F(l) * cis2pi(-l.dot(z));
        ++nl;
    });
    const PlainLattice dual = lattice.dual();
    const double Rs = F.hat_radius(level) + 1.0;
    cplx rhs = 0.0;
    std::size_t nr = 0;
    dual.for_each_in_box(Box{{z.x - Rs, z.omega - Rs}, {z.x + Rs, z.omega + Rs}}, [&](const std::int64_t*, const double* e) {
        rhs += F.hat(PhasePoint{z.x - e[0], z.omega - e[1]});
        ++nr;
    });
    rhs /= lattice.volume();
    rep.set_sides(lhs, rhs);
    // Gaussian mass outside the truncation boxes, scaled by the point densities
    rep.tail_lhs = F.amplitude * (1.0 + 1.0 / (F.a * lattice.volume())) * std::exp(-kPi * F.a * R * R);
    rep.tail_rhs = F.amplitude / F.a / lattice.volume() * (1.0 + F.a * lattice.volume()) * std::exp(-kPi * Rs * Rs / F.a);
    rep.params = {{"basis", {{lattice.basis()(0, 0), lattice.basis()(0, 1)}, {lattice.basis()(1, 0), lattice.basis()(1, 1)}}},
                  {"F_a", F.a},
                  {"F_amplitude", F.amplitude},
                  {"z", point_json(z)}};
    rep.details = {{"primal_radius", R}, {"dual_radius", Rs}, {"primal_terms", nl}, {"dual_terms", nr}};
    rep.decide(1e-9, false);
    rep.runtime_ms = elapsed_ms(t0);
    return rep;
}

Report psf_modelset_verify(const ModelSetSpec& spec, const Bump& bump, const Gaussian2D& F, const PhasePoint& z,
                           double level) {
    const auto t0 = Clock::now();
    if (!(F.a > 0.0)) throw std::invalid_argument("non-decaying F rejected");
    if (spec.d() != 1) throw std::invalid_argument("d = 1 only");
    if (spec.shift) throw std::invalid_argument("shifted model sets are not supported here");
    Report rep;
    rep.check = "psf_modelset";
    const double R = F.radius(level) + 1.0;
    const auto pts = enumerate_model_set(spec, R, &bump);
    cplx lhs = 0.0;
    double wmax = 0.0;
    for (const auto& p : pts.points) {
        const PhasePoint l{p.lambda[0], p.lambda[1]};
        lhs += p.weight * F(l) * cis2pi(-l.dot(z));
        wmax = std::max(wmax, p.weight);
    }
    const double vol = spec.scheme.volume();
    const double density = spec.window.measure() / vol;

    const auto& bs = bump.spec();
    auto env = [&](double t) { return psi_n_hat_envelope(bs, t); };
    // sum over p1* of F_hat in a unit slab of p2* is about vol(Gamma) * F(0); the vol factors cancel
    const double Fz = F.amplitude;
    const double T = envelope_cutoff(env, 2.0 * Fz, std::max(level, 1e-12) * Fz);
    const double Rs = F.hat_radius(level) + 1.0;
    const CutProjectScheme dual = dual_scheme(spec.scheme);
    cplx rhs = 0.0;
    std::size_t nr = 0;
    for_each_dual(dual, z, Rs, T, [&](const std::int64_t*, const PhasePoint& b, double v) {
        rhs += psi_n_hat(bs, -v) * F.hat(z - b);
        ++nr;
    });
    rhs /= vol;
    rep.set_sides(lhs, rhs);
    rep.tail_lhs = wmax * F.amplitude * (1.0 + density / F.a) * std::exp(-kPi * F.a * R * R);
    rep.tail_rhs = 2.0 * Fz * envelope_sum(env, T) + F.amplitude / F.a * std::exp(-kPi * Rs * Rs / F.a);
    rep.params = {{"omega_half_width", spec.window.half_width}, {"bump_n", bs.n}, {"bump_eps", bs.eps},
                  {"s_max", bs.s_max}, {"F_a", F.a}, {"F_amplitude", F.amplitude}, {"z", point_json(z)}};
    rep.details = {{"primal_radius", R}, {"dual_radius", Rs}, {"internal_cutoff", T}, {"primal_terms", pts.size()},
                   {"dual_terms", nr}};
    rep.decide(1e-6, true);
    rep.runtime_ms = elapsed_ms(t0);
    return rep;
}

double ambiguity_radius(const AnalyticWindow& f, const AnalyticWindow& g, double level) {
    const double rt = f.essential_radius(level) + g.essential_radius(level);
    const double rf = fourier(f).essential_radius(level) + fourier(g).essential_radius(level);
    return std::max(rt, rf);
}

APSeries bracket_series(const AnalyticWindow& f, const AnalyticWindow& g, const Bump& bump, const ModelSetSpec& spec,
                        const PhasePoint& z, double radius) {
    if (radius <= 0.0) radius = ambiguity_radius(f, g);
    APSeries s;
    const auto pts = enumerate_model_set(spec, radius + linf(z), &bump);
    for (const auto& p : pts.points) {
        const PhasePoint l{p.lambda[0], p.lambda[1]};
        if (linf(l - z) > radius) continue;
        s.terms.push_back(APTerm{l, p.weight * ambiguity(f, g, l - z)});
    }
    s.note = "Lambda(Omega) nodes with |lambda - z|_inf <= " + std::to_string(radius);
    return s;
}

DualSum bracket_dual(const AnalyticWindow& f, const AnalyticWindow& g, const Bump& bump, const ModelSetSpec& spec,
                     const PhasePoint& z, const PhasePoint& z_tilde, double level) {
    if (spec.shift) throw std::invalid_argument("shifted model sets are not supported here");
    DualSum out;
    const AnalyticWindow fh = fourier(f), gh = fourier(g);
    out.physical_radius = ambiguity_radius(f, g);
    const auto& bs = bump.spec();
    auto env = [&](double t) { return psi_n_hat_envelope(bs, t); };
    const double mass = std::abs(ambiguity(f, g, {0.0, 0.0})) + 1.0;
    const double T = envelope_cutoff(env, 2.0 * mass, level);
    out.internal_cutoff = T;
    const CutProjectScheme dual = dual_scheme(spec.scheme);
    for_each_dual(dual, z_tilde, out.physical_radius, T, [&](const std::int64_t*, const PhasePoint& b, double v) {
        const PhasePoint q = z_tilde - b;
        out.value += psi_n_hat(bs, -v) * cis2pi(-z.dot(q)) * wigner(fh, gh, q);
        ++out.terms;
    });
    out.value /= spec.scheme.volume();
    out.tail = 2.0 * mass * envelope_sum(env, T);
    return out;
}

cplx bohr_mean(const APSeries& series, const PhasePoint& freq, double R) {
    if (!(R > 0.0)) throw std::invalid_argument("R must be positive");
    cplx acc = 0.0;
    for (const auto& t : series.terms)
        acc += t.coef * sinc(2.0 * R * (freq.x - t.freq.x)) * sinc(2.0 * R * (freq.omega - t.freq.omega));
    return acc;
}

std::vector<cplx> bohr_means(const std::function<cplx(const PhasePoint&)>& fn, const std::vector<PhasePoint>& freqs,
                             double R, double step, double max_frequency) {
    if (R < 16.0) throw std::invalid_argument("Bohr mean box radius must be at least 16");
    double fmax = max_frequency;
    for (const auto& q : freqs) fmax = std::max(fmax, max_frequency + linf(q));
    if (step * fmax > 0.5) throw Error("Bohr mean step too coarse for the frequencies");
    const auto n = static_cast<long long>(std::llround(2.0 * R / step));
    std::vector<cplx> acc(freqs.size(), cplx{0.0, 0.0});
    for (long long i = 0; i < n; ++i) {
        const double x = -R + (static_cast<double>(i) + 0.5) * step;
        for (long long j = 0; j < n; ++j) {
            const PhasePoint z{x, -R + (static_cast<double>(j) + 0.5) * step};
            const cplx v = fn(z);
            for (std::size_t k = 0; k < freqs.size(); ++k) acc[k] += v * cis2pi(freqs[k].dot(z));
        }
    }
    const double norm = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
    for (auto& a : acc) a *= norm;
    return acc;
}

cplx bohr_mean(const std::function<cplx(const PhasePoint&)>& fn, const PhasePoint& freq, double R, double step,
               double max_frequency) {
    return bohr_means(fn, {freq}, R, step, max_frequency)[0];
}

cplx janssen_window_coefficient(const WindowFamily& w, const PhasePoint& beta) {
    if (w.g.size() != w.h.size()) throw std::invalid_argument("window family size mismatch");
    const PhasePoint jb = apply_J(beta);
    cplx s = 0.0;
    for (std::size_t i = 0; i < w.g.size(); ++i) s += stft(w.h[i], w.g[i], jb);
    return s;
}

cplx janssen_coefficient(const WindowFamily& w, const AnalyticWindow& f1, const AnalyticWindow& f2,
                         const PhasePoint& beta) {
    const PhasePoint jb = apply_J(beta);
    return std::conj(stft(f2, f1, jb)) * janssen_window_coefficient(w, beta);
}

double kernel_scale(const ModelSetSpec& spec, const DecayKernel& kernel) {
    const double vol = spec.scheme.volume();
    return kernel.kind() == KernelKind::psi_hat_squared ? 1.0 / vol : spec.window.measure() / vol;
}

double dual_physical_radius(const std::function<double(const PhasePoint&)>& magnitude, double rel_level) {
    double peak = 0.0;
    for (double r = 0.25;; r += 0.25) {
        double ring = 0.0;
        const int n = static_cast<int>(std::ceil(8.0 * r));
        for (int k = -n; k <= n; ++k) {
            const double s = r * static_cast<double>(k) / n;
            for (const PhasePoint& p : {PhasePoint{s, r}, PhasePoint{s, -r}, PhasePoint{r, s}, PhasePoint{-r, s}})
                ring = std::max(ring, magnitude(p));
        }
        if (r == 0.25) peak = std::max(magnitude({0.0, 0.0}), ring);
        peak = std::max(peak, ring);
        if (ring * 8.0 * r <= rel_level * peak || r >= 40.0) return std::ceil(r);
    }
}

double internal_cutoff(const DecayKernel& kernel, double scale_times_mass, double target) {
    if (!kernel.envelope_summable()) throw Error("non-summable kernel tail");
    const auto prof = wiener_profile(kernel);
    for (std::size_t T = 0; T <= prof.sups.size(); ++T)
        if (scale_times_mass * prof.tail(T) < target) return static_cast<double>(T);
    throw Error("internal cutoff beyond the kernel table");
}

namespace {

/// Integral over the dual plane of |coef| estimated on the box [-R1, R1]^2 at step 1/8.
double plane_mass(const std::function<double(const PhasePoint&)>& magnitude, double R1) {
    const double h = 0.125;
    const int n = static_cast<int>(std::ceil(R1 / h));
    double s = 0.0;
    for (int i = -n; i <= n; ++i)
        for (int j = -n; j <= n; ++j) s += magnitude({i * h, j * h});
    return s * h * h;
}

}  // namespace

NSeries n_series_modelset(const ModelSetSpec& spec, const DecayKernel& kernel, const WindowFamily& w,
                          const AnalyticWindow& f1, const AnalyticWindow& f2, const NSeriesOptions& opt) {
    if (spec.d() != 1) throw std::invalid_argument("d = 1 only");
    if (spec.shift) throw std::invalid_argument("shifted model sets are not supported here");
    NSeries out;
    const double scale = kernel_scale(spec, kernel);
    auto mag = [&](const PhasePoint& b) { return std::abs(janssen_coefficient(w, f1, f2, b)); };
    out.R1 = opt.R1 > 0.0 ? opt.R1 : dual_physical_radius(mag, 1e-17);
    const double mass = plane_mass(mag, out.R1);
    // points of Gamma^* per unit of p2^* over a unit area of the dual plane: vol(Gamma)
    const double slab = spec.scheme.volume() * mass;
    if (opt.T > 0.0) {
        out.T = opt.T;
    } else {
        const double peak = std::max(mag({0.0, 0.0}), 1e-300);
        out.T = internal_cutoff(kernel, scale * slab, opt.tail_target * scale * peak * std::abs(kernel(0.0)));
    }
    if (kernel.envelope_summable()) {
        const auto prof = wiener_profile(kernel);
        out.tail = scale * slab * prof.tail(static_cast<std::size_t>(std::ceil(out.T)));
    } else {
        out.tail = std::numeric_limits<double>::infinity();
        out.conditional = true;
    }
    const CutProjectScheme dual = dual_scheme(spec.scheme);
    for_each_dual(dual, {0.0, 0.0}, out.R1, out.T, [&](const std::int64_t*, const PhasePoint& b, double v) {
        ++out.enumerated;
        const double k = kernel(-v);
        if (k == 0.0) return;
        const cplx c = scale * k * janssen_coefficient(w, f1, f2, b);
        if (c != 0.0) out.series.terms.push_back(APTerm{b, c});
    });
    out.series.tail = out.tail;
    out.series.note = std::string("Gamma* points with |p1*|_inf <= ") + std::to_string(out.R1) + ", |p2*| <= " +
                      std::to_string(out.T) + ", kernel " + kernel.name();
    return out;
}

NSeries n_series_lattice(const PlainLattice& lattice, const WindowFamily& w, const AnalyticWindow& f1,
                         const AnalyticWindow& f2, const NSeriesOptions& opt) {
    NSeries out;
    auto mag = [&](const PhasePoint& b) { return std::abs(janssen_coefficient(w, f1, f2, b)); };
    out.R1 = opt.R1 > 0.0 ? opt.R1 : dual_physical_radius(mag, 1e-17);
    const double scale = 1.0 / lattice.volume();
    const PlainLattice dual = lattice.dual();
    double shell = 0.0;
    dual.for_each_in_box(Box{{-out.R1, -out.R1}, {out.R1, out.R1}}, [&](const std::int64_t*, const double* e) {
        const PhasePoint b{e[0], e[1]};
        ++out.enumerated;
        const cplx c = scale * janssen_coefficient(w, f1, f2, b);
        if (linf(b) > out.R1 - 1.0) shell += std::abs(c);
        if (c != 0.0) out.series.terms.push_back(APTerm{b, c});
    });
    out.tail = shell;
    out.series.tail = shell;
    out.series.note = "Lambda* points with |beta|_inf <= " + std::to_string(out.R1);
    return out;
}

namespace {

double family_radius(const WindowFamily& w, const AnalyticWindow& f1, const AnalyticWindow& f2) {
    double r = 0.0;
    for (std::size_t i = 0; i < w.g.size(); ++i)
        r = std::max(r, std::min(ambiguity_radius(f1, w.g[i]), ambiguity_radius(f2, w.h[i])));
    return r;
}

}  // namespace

DirectSum n_direct_modelset(const ModelSetSpec& spec, const std::function<double(double)>& weight,
                            const WindowFamily& w, const AnalyticWindow& f1, const AnalyticWindow& f2,
                            const PhasePoint& z, double radius) {
    if (radius <= 0.0) radius = family_radius(w, f1, f2);
    DirectSum out;
    const auto pts = enumerate_model_set(spec, radius + linf(z));
    for (const auto& p : pts.points) {
        const PhasePoint l{p.lambda[0], p.lambda[1]};
        const PhasePoint u = l - z;
        if (linf(u) > radius) continue;
        const double wt = weight(p.internal);
        if (wt == 0.0) continue;
        cplx s = 0.0;
        for (std::size_t i = 0; i < w.g.size(); ++i) s += ambiguity(f1, w.g[i], u) * std::conj(ambiguity(f2, w.h[i], u));
        const cplx term = wt * wt * s;
        out.value += term;
        ++out.terms;
        if (linf(u) > radius - 1.0) out.tail += std::abs(term);
    }
    return out;
}

DirectSum n_direct_lattice(const PlainLattice& lattice, const WindowFamily& w, const AnalyticWindow& f1,
                           const AnalyticWindow& f2, const PhasePoint& z, double radius) {
    if (radius <= 0.0) radius = family_radius(w, f1, f2);
    DirectSum out;
    lattice.for_each_in_box(Box{{z.x - radius, z.omega - radius}, {z.x + radius, z.omega + radius}},
                            [&](const std::int64_t*, const double* e) {
                                const PhasePoint u = PhasePoint{e[0], e[1]} - z;
                                cplx s = 0.0;
                                for (std::size_t i = 0; i < w.g.size(); ++i)
                                    s += ambiguity(f1, w.g[i], u) * std::conj(ambiguity(f2, w.h[i], u));
                                out.value += s;
                                ++out.terms;
                                if (linf(u) > radius - 1.0) out.tail += std::abs(s);
                            });
    return out;
}

cplx bump_correlation(const Bump& bump, double v, double zeta) {
    const auto& grid = bump.grid();
    const auto& vals = bump.values();
    const double hw = bump.spec().omega.half_width;
    const std::size_t stride = 4;
    cplx acc = 0.0;
    for (std::size_t j = 0; j < grid.size; j += stride) {
        const double t = grid.at(j);
        if (std::abs(t) > hw || std::abs(t - v) > hw) continue;
        acc += vals[j] * bump.value(t - v) * cis2pi(-zeta * (t - v));
    }
    return acc * grid.step * static_cast<double>(stride);
}

cplx ambiguity_correlation(const AnalyticWindow& f1, const AnalyticWindow& g, const AnalyticWindow& f2,
                           const AnalyticWindow& h, const PhasePoint& u, const PhasePoint& zeta) {
    const double r1 = f1.essential_radius(1e-17) + g.essential_radius(1e-17);
    const double r2 = f2.essential_radius(1e-17) + h.essential_radius(1e-17);
    const double lo = std::max(-r1, u.x - r2);
    const double hi = std::min(r1, u.x + r2);
    if (hi <= lo) return 0.0;
    const double step = 1.0 / 32.0;
    const auto n0 = static_cast<long long>(std::floor(lo / step));
    const auto n1 = static_cast<long long>(std::ceil(hi / step));
    cplx acc = 0.0;
    for (long long k = n0; k <= n1; ++k) {
        const double x = static_cast<double>(k) * step;
        const double xp = x - u.x;
        const std::vector<ProductFactor> fs = {{&f1, 1.0, 0.5 * x, false},
                                               {&g, 1.0, -0.5 * x, true},
                                               {&f2, 1.0, zeta.omega + 0.5 * xp, true},
                                               {&h, 1.0, zeta.omega - 0.5 * xp, false}};
        acc += cis2pi(-zeta.x * xp) * product_integral(fs, u.omega);
    }
    return acc * step;
}

Report f_function_check(const ModelSetSpec& spec, const Bump& bump, const AnalyticWindow& f1,
                        const AnalyticWindow& f2, const AnalyticWindow& g, const AnalyticWindow& h,
                        const std::vector<FFunctionSample>& samples, int steps) {
    const auto t0 = Clock::now();
    if (samples.empty()) throw std::invalid_argument("no sample points");
    Report rep;
    rep.check = "f_function";
    const double vol = spec.scheme.volume();
    const double hw = spec.window.half_width;
    const CutProjectScheme dual = dual_scheme(spec.scheme);
    const auto& A = spec.scheme.basis();
    const auto& Ad = dual.basis();

    struct Coef {
        PhasePoint p1, p1s;
        cplx c;
    };
    std::vector<Coef> coefs;
    std::vector<std::pair<PhasePoint, double>> gammas, etas;
    for (int i = -steps; i <= steps; ++i)
        for (int j = -steps; j <= steps; ++j)
            for (int k = -steps; k <= steps; ++k) {
                const Eigen::Vector3d e = A * Eigen::Vector3d(i, j, k);
                if (std::abs(e[2]) < 2.0 * hw) gammas.push_back({PhasePoint{e[0], e[1]}, e[2]});
                const Eigen::Vector3d d = Ad * Eigen::Vector3d(i, j, k);
                etas.push_back({PhasePoint{d[0], d[1]}, d[2]});
            }
    cplx c00 = 0.0;
    for (const auto& [p1, v] : gammas)
        for (const auto& [p1s, zeta] : etas) {
            const cplx bc = bump_correlation(bump, v, zeta);
            if (std::abs(bc) < 1e-14) continue;
            const cplx ac = ambiguity_correlation(f1, g, f2, h, p1, p1s);
            const cplx c = bc * ac / vol;
            coefs.push_back(Coef{p1, p1s, c});
            if (linf(p1) == 0.0 && linf(p1s) == 0.0 && v == 0.0 && zeta == 0.0) c00 = bc * ac;
        }

    nlohmann::json table = nlohmann::json::array();
    double worst = 0.0;
    for (std::size_t s = 0; s < samples.size(); ++s) {
        const auto& smp = samples[s];
        const auto b1 = bracket_series(f1, g, bump, spec, smp.z);
        const auto b2 = bracket_series(f2, h, bump, spec, smp.z);
        const cplx lhs = b1(smp.z_tilde) * std::conj(b2(smp.z_tilde));
        cplx rhs = 0.0;
        for (const auto& c : coefs) rhs += c.c * cis2pi(-c.p1.dot(smp.z_tilde) - c.p1s.dot(smp.z));
        const double scale = std::max(std::abs(lhs), std::abs(rhs));
        const double rel = scale > 0.0 ? std::abs(lhs - rhs) / scale : 0.0;
        worst = std::max(worst, rel);
        if (s == 0) rep.set_sides(lhs, rhs);
        table.push_back({{"z", point_json(smp.z)}, {"z_tilde", point_json(smp.z_tilde)}, {"lhs", complex_json(lhs)},
                         {"rhs", complex_json(rhs)}, {"relative_gap", rel}});
    }
    rep.relative_gap = worst;
    rep.gap = worst;
    rep.tol = 5e-2;
    rep.relative = true;
    rep.verdict = worst <= 5e-2 ? Verdict::pass : Verdict::fail;
    rep.params = {{"steps", steps}, {"omega_half_width", hw}, {"bump_n", bump.spec().n}};
    rep.details = {{"samples", table}, {"coefficients", coefs.size()}, {"coefficient_origin", complex_json(c00)}};
    rep.runtime_ms = elapsed_ms(t0);
    return rep;
}

}  // namespace mgabor
