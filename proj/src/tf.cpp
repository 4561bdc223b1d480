#include "mgabor/tf.hpp"

#include <fftw3.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <stdexcept>

namespace mgabor {

double PhasePoint::norm() const { return std::hypot(x, omega); }

cplx hermite_polynomial(int k, cplx z) {
    if (k == 0) return 1.0;
    cplx h0 = 1.0, h1 = 2.0 * z;
    for (int j = 1; j < k; ++j) {
        const cplx h2 = 2.0 * z * h1 - 2.0 * static_cast<double>(j) * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

namespace {

double hermite_normalization(int k, double width) {
    return std::pow(2.0, 0.25) * std::exp(-0.5 * (k * std::log(2.0) + std::lgamma(k + 1.0))) / std::sqrt(width);
}

struct GaussHermite {
    std::vector<double> nodes, weights;
};

const GaussHermite& gauss_hermite(int n) {
    static std::mutex mu;
    static std::vector<GaussHermite> cache(129);
    if (n < 1 || n > 128) throw std::invalid_argument("Hermite degree too large");
    std::lock_guard<std::mutex> lock(mu);
    auto& rule = cache[static_cast<std::size_t>(n)];
    if (rule.nodes.empty()) {
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
        for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(0.5 * k);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
        for (int i = 0; i < n; ++i) {
            rule.nodes.push_back(es.eigenvalues()[i]);
            const double v0 = es.eigenvectors()(0, i);
            rule.weights.push_back(std::sqrt(kPi) * v0 * v0);
        }
    }
    return rule;
}

/// Atom evaluated at sigma*t + rho (optionally conjugated), as polynomial times Gaussian exponential in t.
struct Factor {
    const Atom* atom;
    double sigma;
    double rho;
    bool conj;
};

struct Exponent {
    cplx q2{0.0, 0.0}, q1{0.0, 0.0}, q0{0.0, 0.0};
};

Exponent exponent_of(const Factor& f) {
    const Atom& a = *f.atom;
    const double w2 = a.width * a.width;
    const double u0 = f.rho - a.shift.x;
    Exponent e;
    e.q2 = -kPi * f.sigma * f.sigma / w2;
    e.q1 = cplx(-2.0 * kPi * f.sigma * u0 / w2, 2.0 * kPi * a.shift.omega * f.sigma);
    // the imaginary phase of q0 is reduced mod 2 pi separately to keep precision
    e.q0 = cplx(-kPi * u0 * u0 / w2, 0.0);
    if (f.conj) {
        e.q1 = std::conj(e.q1);
    }
    return e;
}

cplx constant_phase(const Factor& f) {
    const Atom& a = *f.atom;
    const cplx ph = cis2pi(a.shift.omega * f.rho);
    return f.conj ? std::conj(ph) : ph;
}

cplx polynomial_of(const Factor& f, cplx t) {
    const Atom& a = *f.atom;
    const cplx c = f.conj ? std::conj(a.coef) : a.coef;
    const int k = a.degree();
    const double norm = hermite_normalization(k, a.width);
    if (k == 0) return c * norm;
    const double alpha = std::sqrt(2.0 * kPi) / a.width;
    return c * norm * hermite_polynomial(k, alpha * (f.sigma * t + (f.rho - a.shift.x)));
}

/// Integral over R of the product of factors times exp(extra_q1 * t) * extra_phase.
cplx integrate_factors(const Factor* fs, int nf, cplx extra_q1) {
    Exponent tot;
    tot.q1 = extra_q1;
    int degree = 0;
    cplx phase = 1.0;
    for (int i = 0; i < nf; ++i) {
        const Exponent e = exponent_of(fs[i]);
        tot.q2 += e.q2;
        tot.q1 += e.q1;
        tot.q0 += e.q0;
        degree += fs[i].atom->degree();
        phase *= constant_phase(fs[i]);
    }
    const cplx a = -tot.q2;
    if (!(a.real() > 0.0)) throw std::domain_error("non-integrable Gaussian product");
    const cplx sa = std::sqrt(a);
    const cplx mu = tot.q1 / (2.0 * a);
    const cplx pref = std::exp(tot.q0 + tot.q1 * tot.q1 / (4.0 * a)) * phase / sa;
    if (degree == 0) {
        cplx c = 1.0;
        for (int i = 0; i < nf; ++i) c *= polynomial_of(fs[i], 0.0);
        return pref * std::sqrt(kPi) * c;
    }
    const auto& rule = gauss_hermite(degree / 2 + 1);
    cplx sum = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const cplx t = rule.nodes[j] / sa + mu;
        cplx p = 1.0;
        for (int i = 0; i < nf; ++i) p *= polynomial_of(fs[i], t);
        sum += rule.weights[j] * p;
    }
    return pref * sum;
}

/// Sum over atom pairs of integral f(sf*t+rf) conj(g(sg*t+rg)) exp(extra_q1 t) dt.
cplx pair_integral(const AnalyticWindow& f, double sf, double rf, const AnalyticWindow& g, double sg, double rg,
                   cplx extra_q1) {
    cplx acc = 0.0;
    for (const auto& a : f.atoms)
        for (const auto& b : g.atoms) {
            const Factor fs[2] = {{&a, sf, rf, false}, {&b, sg, rg, true}};
            acc += integrate_factors(fs, 2, extra_q1);
        }
    return acc;
}

double grid_tail(const std::vector<double>& mags, double step) {
    if (mags.size() < 2) return mags.empty() ? 0.0 : mags[0] * step;
    auto side = [&](double last, double prev) {
        if (last == 0.0) return 0.0;
        if (prev > last) {
            const double r = last / prev;
            return step * last * r / (1.0 - r);
        }
        return last * step * static_cast<double>(mags.size());
    };
    return side(mags.front(), mags[1]) + side(mags.back(), mags[mags.size() - 2]);
}

void check_nyquist(double freq, double step) {
    if (std::abs(freq) > 0.5 / step * (1.0 + 1e-12)) throw Error("quadrature under-resolved");
}

}  // namespace

cplx Atom::operator()(double t) const {
    const int k = degree();
    const double s = (t - shift.x) / width;
    double val = hermite_normalization(k, width) * std::exp(-kPi * s * s);
    if (k > 0) val *= hermite_polynomial(k, std::sqrt(2.0 * kPi) * s).real();
    return coef * cis2pi(shift.omega * t) * val;
}

AnalyticWindow AnalyticWindow::gaussian(double width, PhasePoint shift, cplx coef) {
    return hermite(0, width, shift, coef);
}

AnalyticWindow AnalyticWindow::hermite(int order, double width, PhasePoint shift, cplx coef) {
    if (order < 0) throw std::invalid_argument("Hermite order must be nonnegative");
    if (!(width > 0.0)) throw std::invalid_argument("atom width must be positive");
    Atom a;
    a.coef = coef;
    a.kind = order == 0 ? AtomKind::gaussian : AtomKind::hermite;
    a.order = order;
    a.width = width;
    a.shift = shift;
    return AnalyticWindow{{a}, 1};
}

cplx AnalyticWindow::operator()(double t) const {
    cplx acc = 0.0;
    for (const auto& a : atoms) acc += a(t);
    return acc;
}

AnalyticWindow AnalyticWindow::scaled(cplx c) const {
    AnalyticWindow out = *this;
    for (auto& a : out.atoms) a.coef *= c;
    return out;
}

AnalyticWindow AnalyticWindow::operator+(const AnalyticWindow& o) const {
    AnalyticWindow out = *this;
    out.atoms.insert(out.atoms.end(), o.atoms.begin(), o.atoms.end());
    return out;
}

double AnalyticWindow::essential_radius(double level) const {
    double r = 0.0;
    const double base = std::sqrt(-std::log(level) / kPi);
    for (const auto& a : atoms)
        r = std::max(r, std::abs(a.shift.x) + a.width * (base + std::sqrt(static_cast<double>(a.degree()))));
    return r;
}

double SampledSignal::energy() const {
    double e = 0.0;
    for (const auto& s : samples) e += std::norm(s);
    return e * step;
}

double SampledSignal::norm() const { return std::sqrt(energy()); }

double SampledSignal::sup_norm() const {
    double m = 0.0;
    for (const auto& s : samples) m = std::max(m, std::abs(s));
    return m;
}

SampledSignal SampledSignal::zeros(double start, double step, std::size_t n) {
    if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
    return SampledSignal{start, step, std::vector<cplx>(n, cplx{0.0, 0.0})};
}

SampledSignal render(const AnalyticWindow& f, double start, double step, std::size_t n) {
    SampledSignal s = SampledSignal::zeros(start, step, n);
    for (std::size_t j = 0; j < n; ++j) s.samples[j] = f(s.t(j));
    return s;
}

SampledSignal render(const AnalyticWindow& f, const SampledSignal& grid_like) {
    return render(f, grid_like.start, grid_like.step, grid_like.size());
}

AnalyticWindow tf_shift(const AnalyticWindow& f, const PhasePoint& z) {
    AnalyticWindow out = f;
    for (auto& a : out.atoms) {
        a.coef *= cis2pi(-z.x * a.shift.omega);
        a.shift = a.shift + z;
    }
    return out;
}

SampledSignal tf_shift(const SampledSignal& f, const PhasePoint& z, double* rounding_error) {
    const double span = f.step * static_cast<double>(f.size());
    if (std::abs(z.x) > span) throw Error("shift out of range");
    const auto m = static_cast<long long>(std::llround(z.x / f.step));
    if (rounding_error) *rounding_error = std::abs(z.x - static_cast<double>(m) * f.step);
    SampledSignal out = SampledSignal::zeros(f.start, f.step, f.size());
    const auto n = static_cast<long long>(f.size());
    for (long long j = 0; j < n; ++j) {
        const long long src = j - m;
        if (src < 0 || src >= n) continue;
        out.samples[static_cast<std::size_t>(j)] = cis2pi(z.omega * out.t(static_cast<std::size_t>(j))) *
                                                   f.samples[static_cast<std::size_t>(src)];
    }
    return out;
}

Signal tf_shift(const Signal& f, const PhasePoint& z) {
    if (const auto* a = std::get_if<AnalyticWindow>(&f)) return tf_shift(*a, z);
    return tf_shift(std::get<SampledSignal>(f), z);
}

AnalyticWindow fourier(const AnalyticWindow& f) {
    AnalyticWindow out = f;
    for (auto& a : out.atoms) {
        const int k = a.degree();
        cplx mi = 1.0;
        for (int j = 0; j < k; ++j) mi *= cplx(0.0, -1.0);
        a.coef *= mi * cis2pi(a.shift.x * a.shift.omega);
        a.width = 1.0 / a.width;
        a.shift = PhasePoint{a.shift.omega, -a.shift.x};
    }
    return out;
}

SampledSignal fourier(const SampledSignal& f) {
    std::size_t P = 1;
    while (P < f.size()) P <<= 1;
    std::vector<cplx> buf(P, cplx{0.0, 0.0});
    for (std::size_t j = 0; j < f.size(); ++j) buf[j] = (j % 2 == 0 ? 1.0 : -1.0) * f.samples[j];
    auto* ptr = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(P), ptr, ptr, FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    SampledSignal out;
    out.step = 1.0 / (static_cast<double>(P) * f.step);
    out.start = -0.5 / f.step;
    out.samples.resize(P);
    for (std::size_t k = 0; k < P; ++k) out.samples[k] = f.step * cis2pi(-f.start * out.t(k)) * buf[k];
    return out;
}

cplx inner_product(const AnalyticWindow& f, const AnalyticWindow& g) { return pair_integral(f, 1.0, 0.0, g, 1.0, 0.0, 0.0); }

Quadrature inner_product(const SampledSignal& f, const SampledSignal& g) {
    if (std::abs(f.step - g.step) > 1e-12 * f.step) throw Error("incompatible grids");
    const double off = (g.start - f.start) / f.step;
    const auto m = static_cast<long long>(std::llround(off));
    if (std::abs(off - static_cast<double>(m)) > 1e-6) throw Error("incompatible grids");
    Quadrature q;
    std::vector<double> mags;
    for (std::size_t j = 0; j < f.size(); ++j) {
        const long long jg = static_cast<long long>(j) - m;
        if (jg < 0 || jg >= static_cast<long long>(g.size())) continue;
        const cplx v = f.samples[j] * std::conj(g.samples[static_cast<std::size_t>(jg)]);
        q.value += v;
        mags.push_back(std::abs(v));
    }
    q.value *= f.step;
    q.tail = grid_tail(mags, f.step);
    return q;
}

Quadrature inner_product(const SampledSignal& f, const AnalyticWindow& g) {
    Quadrature q;
    std::vector<double> mags(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
        const cplx v = f.samples[j] * std::conj(g(f.t(j)));
        q.value += v;
        mags[j] = std::abs(v);
    }
    q.value *= f.step;
    q.tail = grid_tail(mags, f.step);
    return q;
}

Quadrature inner_product(const Signal& f, const Signal& g) {
    const auto* fa = std::get_if<AnalyticWindow>(&f);
    const auto* ga = std::get_if<AnalyticWindow>(&g);
    if (fa && ga) return Quadrature{inner_product(*fa, *ga), 0.0};
    if (!fa && ga) return inner_product(std::get<SampledSignal>(f), *ga);
    if (fa && !ga) {
        Quadrature q = inner_product(std::get<SampledSignal>(g), *fa);
        q.value = std::conj(q.value);
        return q;
    }
    return inner_product(std::get<SampledSignal>(f), std::get<SampledSignal>(g));
}

cplx stft(const AnalyticWindow& f, const AnalyticWindow& g, const PhasePoint& z) {
    // integral f(t) conj(g(t - x)) e^{-2 pi i omega t} dt
    return pair_integral(f, 1.0, 0.0, g, 1.0, -z.x, cplx(0.0, -2.0 * kPi * z.omega));
}

cplx ambiguity(const AnalyticWindow& f, const AnalyticWindow& g, const PhasePoint& z) {
    return pair_integral(f, 1.0, 0.5 * z.x, g, 1.0, -0.5 * z.x, cplx(0.0, -2.0 * kPi * z.omega));
}

cplx wigner(const AnalyticWindow& f, const AnalyticWindow& g, const PhasePoint& z) {
    return pair_integral(f, 0.5, z.x, g, -0.5, z.x, cplx(0.0, -2.0 * kPi * z.omega));
}

namespace {

/// e^{pi i x omega} * step * sum f(u_j) conj(g(u_j - x)) e^{-2 pi i u_j omega}
template <class GEval>
Quadrature ambiguity_sampled(const SampledSignal& f, GEval&& g_at, const PhasePoint& z) {
    check_nyquist(z.omega, f.step);
    Quadrature q;
    std::vector<double> mags(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double u = f.t(j);
        const cplx v = f.samples[j] * std::conj(g_at(u - z.x, j));
        q.value += v * cis2pi(-u * z.omega);
        mags[j] = std::abs(v);
    }
    q.value *= f.step * cis2pi(0.5 * z.x * z.omega);
    q.tail = grid_tail(mags, f.step);
    return q;
}

Quadrature ambiguity_sampled_pair(const SampledSignal& f, const SampledSignal& g, const PhasePoint& z) {
    if (std::abs(f.step - g.step) > 1e-12 * f.step) throw Error("incompatible grids");
    const double off = (z.x + g.start - f.start) / f.step;
    const auto m = static_cast<long long>(std::llround(off));
    const double rounding = std::abs(off - static_cast<double>(m)) * f.step;
    auto g_at = [&](double, std::size_t j) -> cplx {
        const long long jg = static_cast<long long>(j) - m;
        if (jg < 0 || jg >= static_cast<long long>(g.size())) return 0.0;
        return g.samples[static_cast<std::size_t>(jg)];
    };
    Quadrature q = ambiguity_sampled(f, g_at, z);
    if (rounding > 0.0) {
        double dg = 0.0;
        for (std::size_t j = 1; j < g.size(); ++j) dg += std::norm(g.samples[j] - g.samples[j - 1]) / g.step;
        q.tail += rounding * f.norm() * std::sqrt(dg);
    }
    return q;
}

}  // namespace

Quadrature ambiguity(const Signal& f, const Signal& g, const PhasePoint& z) {
    const auto* fa = std::get_if<AnalyticWindow>(&f);
    const auto* ga = std::get_if<AnalyticWindow>(&g);
    if (fa && ga) return Quadrature{ambiguity(*fa, *ga, z), 0.0};
    if (!fa && ga)
        return ambiguity_sampled(std::get<SampledSignal>(f), [&](double t, std::size_t) { return (*ga)(t); }, z);
    if (fa && !ga) {
        Quadrature q = ambiguity(g, f, -z);
        q.value = std::conj(q.value);
        return q;
    }
    return ambiguity_sampled_pair(std::get<SampledSignal>(f), std::get<SampledSignal>(g), z);
}

Quadrature stft(const Signal& f, const Signal& g, const PhasePoint& z) {
    if (std::holds_alternative<AnalyticWindow>(f) && std::holds_alternative<AnalyticWindow>(g))
        return Quadrature{stft(std::get<AnalyticWindow>(f), std::get<AnalyticWindow>(g), z), 0.0};
    Quadrature q = ambiguity(f, g, z);
    q.value *= cis2pi(-0.5 * z.x * z.omega);
    return q;
}

Quadrature wigner(const Signal& f, const Signal& g, const PhasePoint& z) {
    const auto* fa = std::get_if<AnalyticWindow>(&f);
    const auto* ga = std::get_if<AnalyticWindow>(&g);
    if (fa && ga) return Quadrature{wigner(*fa, *ga, z), 0.0};
    if (fa && !ga) {
        Quadrature q = wigner(g, f, z);
        q.value = std::conj(q.value);
        return q;
    }
    // W(f,g)(x,w) = 2 * integral f(s) conj(g(2x - s)) e^{-4 pi i (s - x) w} ds
    const auto& fs = std::get<SampledSignal>(f);
    check_nyquist(2.0 * z.omega, fs.step);
    Quadrature q;
    std::vector<double> mags(fs.size());
    std::function<cplx(double)> g_at;
    if (ga) {
        g_at = [&](double t) { return (*ga)(t); };
    } else {
        const auto& gs = std::get<SampledSignal>(g);
        if (std::abs(fs.step - gs.step) > 1e-12 * fs.step) throw Error("incompatible grids");
        g_at = [&](double t) -> cplx {
            const auto idx = static_cast<long long>(std::llround((t - gs.start) / gs.step));
            if (idx < 0 || idx >= static_cast<long long>(gs.size())) return 0.0;
            return gs.samples[static_cast<std::size_t>(idx)];
        };
    }
    for (std::size_t j = 0; j < fs.size(); ++j) {
        const double s = fs.t(j);
        const cplx v = fs.samples[j] * std::conj(g_at(2.0 * z.x - s));
        q.value += v * cis2pi(-2.0 * (s - z.x) * z.omega);
        mags[j] = std::abs(v);
    }
    q.value *= 2.0 * fs.step;
    q.tail = 2.0 * grid_tail(mags, fs.step);
    return q;
}

cplx product_integral(const std::vector<ProductFactor>& factors, double frequency) {
    const std::size_t nf = factors.size();
    if (nf == 0) throw std::invalid_argument("empty product");
    std::vector<std::size_t> pick(nf, 0);
    std::vector<Factor> fs(nf);
    cplx acc = 0.0;
    while (true) {
        for (std::size_t i = 0; i < nf; ++i) {
            const auto& pf = factors[i];
            fs[i] = Factor{&pf.window->atoms[pick[i]], pf.sigma, pf.rho, pf.conj};
        }
        acc += integrate_factors(fs.data(), static_cast<int>(nf), cplx(0.0, -2.0 * kPi * frequency));
        std::size_t i = 0;
        while (i < nf && ++pick[i] == factors[i].window->atoms.size()) pick[i++] = 0;
        if (i == nf) break;
    }
    return acc;
}

cplx wigner_inner_product(const AnalyticWindow& f1, const AnalyticWindow& g1, const AnalyticWindow& f2,
                          const AnalyticWindow& g2, double R, double step) {
    const auto n = static_cast<long long>(std::floor(R / step));
    cplx acc = 0.0;
    for (long long i = -n; i <= n; ++i)
        for (long long j = -n; j <= n; ++j) {
            const PhasePoint z{static_cast<double>(i) * step, static_cast<double>(j) * step};
            acc += wigner(f1, g1, z) * std::conj(wigner(f2, g2, z));
        }
    return acc * step * step;
}

}  // namespace mgabor
