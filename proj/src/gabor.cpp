#include "mgabor/gabor.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace mgabor {

std::vector<Node> nodes_from(const WeightedPointSet& points) {
    if (points.d != 1) throw std::invalid_argument("Gabor systems are implemented for d = 1");
    std::vector<Node> out;
    out.reserve(points.size());
    for (const auto& p : points.points) out.push_back(Node{{p.lambda[0], p.lambda[1]}, p.weight, p.internal});
    return out;
}

std::vector<Node> nodes_from(const PlainLattice& lattice, double time_radius, double freq_radius) {
    if (lattice.d() != 1) throw std::invalid_argument("Gabor systems are implemented for d = 1");
    std::vector<Node> out;
    lattice.for_each_in_box(Box{{-time_radius, -freq_radius}, {time_radius, freq_radius}},
                            [&](const std::int64_t*, const double* e) { out.push_back(Node{{e[0], e[1]}, 1.0, 0.0}); });
    return out;
}

std::vector<Node> separable_nodes(double a, double b, long m0, long m1, long k0, long k1) {
    std::vector<Node> out;
    for (long m = m0; m < m1; ++m)
        for (long k = k0; k < k1; ++k)
            out.push_back(Node{{a * static_cast<double>(m), b * static_cast<double>(k)}, 1.0, 0.0});
    return out;
}

namespace {

struct ShiftedWindow {
    std::size_t j0 = 0;
    std::vector<cplx> values;
    double rounding = 0.0;
};

double window_radius(const Signal& h) {
    if (const auto* a = std::get_if<AnalyticWindow>(&h)) return a->essential_radius(1e-17);
    return 0.0;
}

/// pi(lambda) h on the grid, restricted to the indices where it is not negligible.
ShiftedWindow shifted_on_grid(const Signal& h, const PhasePoint& lam, const GridSpec& g, double radius) {
    ShiftedWindow out;
    const auto n = static_cast<long long>(g.size);
    if (const auto* a = std::get_if<AnalyticWindow>(&h)) {
        const long long j0 = std::max(0LL, static_cast<long long>(std::ceil((lam.x - radius - g.start) / g.step)));
        const long long j1 = std::min(n - 1, static_cast<long long>(std::floor((lam.x + radius - g.start) / g.step)));
        if (j1 < j0) return out;
        out.j0 = static_cast<std::size_t>(j0);
        out.values.resize(static_cast<std::size_t>(j1 - j0 + 1));
        for (long long j = j0; j <= j1; ++j) {
            const double t = g.t(static_cast<std::size_t>(j));
            out.values[static_cast<std::size_t>(j - j0)] = cis2pi(lam.omega * t) * (*a)(t - lam.x);
        }
        return out;
    }
    const auto& s = std::get<SampledSignal>(h);
    if (std::abs(s.step - g.step) > 1e-12 * g.step) throw Error("incompatible grids");
    const double off = (lam.x + s.start - g.start) / g.step;
    const auto m = static_cast<long long>(std::llround(off));
    out.rounding = std::abs(off - static_cast<double>(m)) * g.step;
    const long long j0 = std::max(0LL, m);
    const long long j1 = std::min(n - 1, m + static_cast<long long>(s.size()) - 1);
    if (j1 < j0) return out;
    out.j0 = static_cast<std::size_t>(j0);
    out.values.resize(static_cast<std::size_t>(j1 - j0 + 1));
    for (long long j = j0; j <= j1; ++j)
        out.values[static_cast<std::size_t>(j - j0)] =
            cis2pi(lam.omega * g.t(static_cast<std::size_t>(j))) * s.samples[static_cast<std::size_t>(j - m)];
    return out;
}

void check_nyquist(double omega, double step) {
    if (std::abs(omega) > 0.5 / step * (1.0 + 1e-12)) throw Error("quadrature under-resolved");
}

/// <f, pi(lambda) g>
cplx coefficient(const Signal& f, const Signal& g, const PhasePoint& lam, double g_radius, double* rounding) {
    const auto* fa = std::get_if<AnalyticWindow>(&f);
    const auto* ga = std::get_if<AnalyticWindow>(&g);
    if (fa && ga) return stft(*fa, *ga, lam);
    if (fa) {
        const auto& gs = std::get<SampledSignal>(g);
        check_nyquist(lam.omega, gs.step);
        cplx acc = 0.0;
        for (std::size_t i = 0; i < gs.size(); ++i) {
            const double t = lam.x + gs.t(i);
            acc += (*fa)(t) * std::conj(cis2pi(lam.omega * t) * gs.samples[i]);
        }
        return acc * gs.step;
    }
    const auto& fs = std::get<SampledSignal>(f);
    check_nyquist(lam.omega, fs.step);
    const auto sw = shifted_on_grid(g, lam, GridSpec::of(fs), g_radius);
    if (rounding) *rounding = std::max(*rounding, sw.rounding);
    cplx acc = 0.0;
    for (std::size_t j = 0; j < sw.values.size(); ++j) acc += fs.samples[sw.j0 + j] * std::conj(sw.values[j]);
    return acc * fs.step;
}

bool all_analytic(const std::vector<Signal>& ws) {
    return std::all_of(ws.begin(), ws.end(), [](const Signal& s) { return std::holds_alternative<AnalyticWindow>(s); });
}

double sup_norm(const Signal& h) {
    if (const auto* s = std::get_if<SampledSignal>(&h)) return s->sup_norm();
    const auto& a = std::get<AnalyticWindow>(h);
    double m = 0.0;
    for (const auto& atom : a.atoms) m += std::abs(atom.coef) * std::sqrt(2.0 / atom.width);
    return m;
}

std::vector<std::size_t> active_nodes(const std::vector<Node>& nodes, double radius) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (std::max(std::abs(nodes[i].lambda.x), std::abs(nodes[i].lambda.omega)) <= radius) idx.push_back(i);
    return idx;
}

/// Marks nodes in the outer unit shell of the retained node region.
std::vector<bool> shell_mask(const std::vector<Node>& nodes, const std::vector<std::size_t>& idx, bool freq_shell) {
    double rx = 0.0, rw = 0.0;
    for (auto i : idx) {
        rx = std::max(rx, std::abs(nodes[i].lambda.x));
        rw = std::max(rw, std::abs(nodes[i].lambda.omega));
    }
    std::vector<bool> shell(idx.size(), false);
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const auto& l = nodes[idx[k]].lambda;
        shell[k] = std::abs(l.x) > rx - 1.0 || (freq_shell && std::abs(l.omega) > rw - 1.0);
    }
    return shell;
}

void enforce(const TruncationPolicy& policy, double tail) {
    if (tail > policy.tail_tol) {
        std::ostringstream os;
        os << "tail bound " << tail << " exceeds tolerance " << policy.tail_tol;
        throw Error(os.str());
    }
}

}  // namespace

AnalysisResult analysis(const GaborSystem& system, const Signal& f, const TruncationPolicy& policy) {
    AnalysisResult out;
    const auto idx = active_nodes(system.nodes, policy.node_radius);
    const bool freq_shell = std::holds_alternative<AnalyticWindow>(f) && all_analytic(system.windows);
    const auto shell = shell_mask(system.nodes, idx, freq_shell);
    for (std::size_t w = 0; w < system.windows.size(); ++w) {
        const double r = window_radius(system.windows[w]);
        for (std::size_t k = 0; k < idx.size(); ++k) {
            const Node& n = system.nodes[idx[k]];
            const cplx c = n.weight * coefficient(f, system.windows[w], n.lambda, r, nullptr);
            out.coefficients.push_back(Coefficient{idx[k], static_cast<int>(w), n.lambda, c});
            if (shell[k]) out.tail += std::abs(c);
        }
    }
    enforce(policy, out.tail);
    return out;
}

FrameResult frame_apply(const GaborSystem& system, const std::vector<Signal>* dual_windows, const Signal& f,
                        const GridSpec& grid, const TruncationPolicy& policy) {
    const auto& synth = dual_windows ? *dual_windows : system.windows;
    if (synth.size() != system.windows.size()) throw std::invalid_argument("dual window count mismatch");
    FrameResult out;
    out.value = SampledSignal::zeros(grid.start, grid.step, grid.size);
    const auto idx = active_nodes(system.nodes, policy.node_radius);
    const bool freq_shell = std::holds_alternative<AnalyticWindow>(f) && all_analytic(system.windows);
    const auto shell = shell_mask(system.nodes, idx, freq_shell);
    for (std::size_t w = 0; w < system.windows.size(); ++w) {
        const double rg = window_radius(system.windows[w]);
        const double rh = window_radius(synth[w]);
        const double hsup = sup_norm(synth[w]);
        for (std::size_t k = 0; k < idx.size(); ++k) {
            const Node& n = system.nodes[idx[k]];
            check_nyquist(n.lambda.omega, grid.step);
            const cplx c = n.weight * n.weight * coefficient(f, system.windows[w], n.lambda, rg, &out.rounding);
            if (shell[k]) out.tail += std::abs(c) * hsup;
            if (c == 0.0) continue;
            const auto sw = shifted_on_grid(synth[w], n.lambda, grid, rh);
            out.rounding = std::max(out.rounding, sw.rounding);
            for (std::size_t j = 0; j < sw.values.size(); ++j) out.value.samples[sw.j0 + j] += c * sw.values[j];
        }
    }
    enforce(policy, out.tail);
    return out;
}

FrameResult frame_apply(const GaborSystem& system, const std::vector<Signal>* dual_windows, const SampledSignal& f,
                        const TruncationPolicy& policy) {
    return frame_apply(system, dual_windows, Signal{f}, GridSpec::of(f), policy);
}

double covariance_residual(const GaborSystem& system, const std::vector<Signal>* dual_windows, const PhasePoint& z,
                           const AnalyticWindow& f, const GridSpec& grid, const TruncationPolicy& policy) {
    const auto& synth = dual_windows ? *dual_windows : system.windows;
    if (!all_analytic(system.windows) || !all_analytic(synth))
        throw std::invalid_argument("covariance check requires analytic windows");
    const auto idx = active_nodes(system.nodes, policy.node_radius);
    const AnalyticWindow fz = tf_shift(f, z);
    std::vector<cplx> lhs(grid.size, cplx{0.0, 0.0}), rhs(grid.size, cplx{0.0, 0.0});
    for (std::size_t w = 0; w < system.windows.size(); ++w) {
        const auto& g = std::get<AnalyticWindow>(system.windows[w]);
        const auto& h = std::get<AnalyticWindow>(synth[w]);
        for (auto i : idx) {
            const Node& n = system.nodes[i];
            const double w2 = n.weight * n.weight;
            const PhasePoint mu = n.lambda - z;
            const cplx cl = w2 * stft(fz, g, n.lambda);
            const cplx cr = w2 * stft(f, g, mu);
            const AnalyticWindow hl = tf_shift(h, n.lambda);
            const AnalyticWindow hr = tf_shift(tf_shift(h, mu), z);
            const double r = hl.essential_radius(1e-17);
            const long long j0 = std::max(0LL, static_cast<long long>(std::ceil((n.lambda.x - r - grid.start) / grid.step)));
            const long long j1 = std::min(static_cast<long long>(grid.size) - 1,
                                          static_cast<long long>(std::floor((n.lambda.x + r - grid.start) / grid.step)));
            for (long long j = j0; j <= j1; ++j) {
                const double t = grid.t(static_cast<std::size_t>(j));
                lhs[static_cast<std::size_t>(j)] += cl * hl(t);
                rhs[static_cast<std::size_t>(j)] += cr * hr(t);
            }
        }
    }
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < grid.size; ++j) {
        num = std::max(num, std::abs(lhs[j] - rhs[j]));
        den = std::max(den, std::abs(f(grid.t(j))));
    }
    return den > 0.0 ? num / den : num;
}

namespace {

using Mat = Eigen::MatrixXcd;

struct DiscreteFrameOperator {
    GridSpec grid;
    std::vector<double> w2;
    std::vector<ShiftedWindow> windows;

    Mat apply(const Mat& X) const {
        Mat Y = Mat::Zero(X.rows(), X.cols());
        for (std::size_t k = 0; k < windows.size(); ++k) {
            const auto& sw = windows[k];
            if (sw.values.empty()) continue;
            const auto len = static_cast<Eigen::Index>(sw.values.size());
            const auto j0 = static_cast<Eigen::Index>(sw.j0);
            Eigen::Map<const Eigen::VectorXcd> v(sw.values.data(), len);
            const Eigen::RowVectorXcd c = (w2[k] * grid.step) * (v.adjoint() * X.middleRows(j0, len));
            Y.middleRows(j0, len).noalias() += v * c;
        }
        return Y;
    }
};

Mat orthonormalize(const Mat& X) {
    Eigen::HouseholderQR<Mat> qr(X);
    return qr.householderQ() * Mat::Identity(X.rows(), X.cols());
}

struct TopRitz {
    double value = 0.0;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

template <class Op>
TopRitz top_eigenvalue(const Op& op, Mat Q, int max_iterations, double tol) {
    TopRitz out;
    double prev = std::numeric_limits<double>::quiet_NaN();
    Q = orthonormalize(Q);
    for (int it = 1; it <= max_iterations; ++it) {
        const Mat Y = op(Q);
        Mat H = Q.adjoint() * Y;
        H = 0.5 * (H + H.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<Mat> es(H);
        const Eigen::Index top = H.rows() - 1;
        const double theta = es.eigenvalues()[top];
        const Eigen::VectorXcd u = es.eigenvectors().col(top);
        const double scale = std::max(std::abs(theta), 1e-300);
        out.value = theta;
        out.residual = (Y * u - theta * (Q * u)).norm() / scale;
        out.iterations = it;
        if (out.residual < tol || (std::isfinite(prev) && std::abs(theta - prev) <= tol * scale)) {
            out.converged = true;
            break;
        }
        prev = theta;
        Q = orthonormalize(Y);
    }
    return out;
}

}  // namespace

FrameBounds frame_bounds_estimate(const GaborSystem& system, const GridSpec& grid, const TruncationPolicy& policy,
                                  std::uint64_t seed, int block, int max_iterations, double tol) {
    if (grid.size == 0) throw std::invalid_argument("empty grid");
    DiscreteFrameOperator S;
    S.grid = grid;
    for (const auto& w : system.windows) {
        const double r = window_radius(w);
        for (auto i : active_nodes(system.nodes, policy.node_radius)) {
            const Node& n = system.nodes[i];
            check_nyquist(n.lambda.omega, grid.step);
            S.w2.push_back(n.weight * n.weight);
            S.windows.push_back(shifted_on_grid(w, n.lambda, grid, r));
        }
    }
    const auto n = static_cast<Eigen::Index>(grid.size);
    const Eigen::Index k = std::min<Eigen::Index>(block, n);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    auto random_block = [&] {
        Mat X(n, k);
        for (Eigen::Index j = 0; j < k; ++j)
            for (Eigen::Index i = 0; i < n; ++i) X(i, j) = cplx(nd(rng), nd(rng));
        return X;
    };
    FrameBounds fb;
    const TopRitz top = top_eigenvalue([&](const Mat& X) { return S.apply(X); }, random_block(), max_iterations, tol);
    fb.B = top.value;
    fb.residual_B = top.residual;
    fb.iterations_B = top.iterations;
    const double sigma = std::max(top.value, 0.0) * (1.0 + 1e-3) + 1e-12;
    const TopRitz low =
        top_eigenvalue([&](const Mat& X) { return Mat(sigma * X - S.apply(X)); }, random_block(), max_iterations, tol);
    fb.A = std::max(0.0, sigma - low.value);
    fb.residual_A = low.residual * std::abs(low.value) / std::max(fb.B, 1e-300);
    fb.iterations_A = low.iterations;
    fb.converged = top.converged && low.converged;
    return fb;
}

}  // namespace mgabor
