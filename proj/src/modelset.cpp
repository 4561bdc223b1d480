#include "mgabor/modelset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace mgabor {

Eigen::VectorXd ModelSetSpec::physical_shift() const {
    if (shift && shift->s.size() > 0) {
        if (shift->s.size() != 2 * d()) throw std::invalid_argument("shift dimension mismatch");
        return shift->s;
    }
    return Eigen::VectorXd::Zero(2 * d());
}

WeightedPointSet enumerate_model_set(const ModelSetSpec& spec, double radius, const Bump* weight) {
    if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
    spec.window.validate();
    const int n = spec.scheme.dim();
    const int pd = n - 1;
    const Eigen::VectorXd s = spec.physical_shift();
    const double t = spec.internal_shift();
    const double w = spec.window.half_width;
    Box box;
    box.lo.resize(static_cast<std::size_t>(n));
    box.hi.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < pd; ++i) {
        box.lo[static_cast<std::size_t>(i)] = -radius;
        box.hi[static_cast<std::size_t>(i)] = radius;
    }
    box.lo[static_cast<std::size_t>(pd)] = -w - t;
    box.hi[static_cast<std::size_t>(pd)] = w - t;

    WeightedPointSet out;
    out.d = spec.d();
    spec.scheme.for_each_in_box(box, [&](const std::int64_t* c, const double* e) {
        const double internal = e[pd] + t;
        if (!spec.window.contains(internal)) return;
        WeightedPoint p;
        p.lambda.resize(pd);
        for (int i = 0; i < pd; ++i) p.lambda[i] = e[i] + s[i];
        p.internal = internal;
        p.weight = weight ? weight->value(internal) : 1.0;
        p.coords.assign(c, c + n);
        out.points.push_back(std::move(p));
    });
    return out;
}

double ball_volume(int dim, double radius) {
    return std::pow(kPi, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0) * std::pow(radius, dim);
}

DensityEstimate density_estimate(const ModelSetSpec& spec, double radius) {
    const auto pts = enumerate_model_set(spec, radius);
    const Eigen::VectorXd s = spec.physical_shift();
    DensityEstimate out;
    for (const auto& p : pts.points)
        if ((p.lambda - s).norm() <= radius) ++out.count;
    const int pd = 2 * spec.d();
    out.estimate = static_cast<double>(out.count) / ball_volume(pd, radius);
    out.theoretical = spec.window.measure() / spec.scheme.volume();
    out.relative_gap = std::abs(out.estimate - out.theoretical) / out.theoretical;
    return out;
}

namespace {

struct KeyHash {
    std::size_t operator()(const std::vector<std::int64_t>& k) const {
        std::size_t h = 1469598103934665603ull;
        for (auto v : k) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
        return h;
    }
};

double default_spacing(int dim) { return dim <= 2 ? 0.05 : 0.1; }

/// Visits all integer vectors c with |c*spacing - p| <= r.
template <class F>
void for_each_center(const Eigen::VectorXd& p, double spacing, double r, F&& f) {
    const int k = static_cast<int>(p.size());
    std::vector<std::int64_t> lo(static_cast<std::size_t>(k)), hi(static_cast<std::size_t>(k)),
        c(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        lo[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(std::ceil((p[i] - r) / spacing));
        hi[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(std::floor((p[i] + r) / spacing));
    }
    c = lo;
    while (true) {
        double d2 = 0.0;
        for (int i = 0; i < k; ++i) {
            const double diff = static_cast<double>(c[static_cast<std::size_t>(i)]) * spacing - p[i];
            d2 += diff * diff;
        }
        if (d2 <= r * r) f(c);
        int i = k - 1;
        while (i >= 0 && ++c[static_cast<std::size_t>(i)] > hi[static_cast<std::size_t>(i)]) {
            c[static_cast<std::size_t>(i)] = lo[static_cast<std::size_t>(i)];
            --i;
        }
        if (i < 0) break;
    }
}

}  // namespace

double relative_separation(const std::vector<Eigen::VectorXd>& points, double spacing) {
    if (points.empty()) return 0.0;
    const int k = static_cast<int>(points.front().size());
    if (spacing <= 0.0) spacing = default_spacing(k);
    // every unit ball lies inside the enlarged ball around its nearest grid center
    const double r = 1.0 + spacing * std::sqrt(static_cast<double>(k)) / 2.0;
    std::unordered_map<std::vector<std::int64_t>, int, KeyHash> counts;
    int best = 0;
    for (const auto& p : points)
        for_each_center(p, spacing, r, [&](const std::vector<std::int64_t>& c) { best = std::max(best, ++counts[c]); });
    return static_cast<double>(best);
}

double relative_separation(const WeightedPointSet& points, double spacing) {
    std::vector<Eigen::VectorXd> pts;
    pts.reserve(points.size());
    for (const auto& p : points.points) pts.push_back(p.lambda);
    return relative_separation(pts, spacing);
}

double lattice_relative_separation(const LatticeBasis& lattice, double spacing) {
    const int k = lattice.dim();
    if (spacing <= 0.0) spacing = default_spacing(k);
    // centers over one fundamental cell suffice; gather lattice points around it
    double cell = 0.0;
    for (int j = 0; j < k; ++j) cell += lattice.basis().col(j).cwiseAbs().maxCoeff();
    const double reach = cell + 1.0 + spacing * std::sqrt(static_cast<double>(k));
    std::vector<Eigen::VectorXd> pts;
    for (const auto& p : lattice.enumerate_in_box(Box::cube(static_cast<std::size_t>(k), reach))) pts.push_back(p.embedded);
    const double r = 1.0 + spacing * std::sqrt(static_cast<double>(k)) / 2.0;
    std::unordered_map<std::vector<std::int64_t>, int, KeyHash> counts;
    int best = 0;
    const double limit = cell + spacing;
    for (const auto& p : pts)
        for_each_center(p, spacing, r, [&](const std::vector<std::int64_t>& c) {
            for (auto v : c)
                if (std::abs(static_cast<double>(v) * spacing) > limit) return;
            best = std::max(best, ++counts[c]);
        });
    return static_cast<double>(best);
}

double genericity_margin(const ModelSetSpec& spec, double radius) {
    ModelSetSpec wide = spec;
    wide.window.half_width = spec.window.half_width + 0.1;
    const auto pts = enumerate_model_set(wide, radius);
    const double w = spec.window.half_width;
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& p : pts.points) margin = std::min(margin, std::min(std::abs(p.internal - w), std::abs(p.internal + w)));
    return margin;
}

EpsDualModelSet eps_dual_model_set(const ModelSetSpec& spec, const DecayKernel& kernel, double eps, double C, int M,
                                   double radius) {
    if (!(eps > 0.0) || !(C > 0.0) || M < 1) throw std::invalid_argument("eps, C must be positive and M >= 1");
    EpsDualModelSet out;
    const CutProjectScheme dual = dual_scheme(spec.scheme);
    out.density = spec.window.measure() / spec.scheme.volume();
    out.rel_dual = lattice_relative_separation(dual.lattice());
    out.threshold = eps / (out.density * out.rel_dual * C * static_cast<double>(M));
    const auto prof = wiener_profile(kernel);
    std::size_t T = 0;
    bool found = false;
    for (; T <= prof.sups.size(); ++T) {
        const double tail = prof.tail(T);
        if (tail < out.threshold) {
            out.tail = tail;
            found = true;
            break;
        }
    }
    if (!found) throw Error("non-summable kernel tail");
    out.T = static_cast<double>(T);

    const int pd = dual.dim() - 1;
    Box box;
    for (int i = 0; i < pd; ++i) {
        box.lo.push_back(-radius);
        box.hi.push_back(radius);
    }
    box.lo.push_back(-out.T);
    box.hi.push_back(out.T);
    out.points.d = spec.d();
    dual.for_each_in_box(box, [&](const std::int64_t* c, const double* e) {
        WeightedPoint p;
        p.lambda = Eigen::Map<const Eigen::VectorXd>(e, pd);
        p.internal = e[pd];
        p.weight = kernel(-e[pd]);
        p.coords.assign(c, c + dual.dim());
        out.points.points.push_back(std::move(p));
    });
    return out;
}

}  // namespace mgabor
