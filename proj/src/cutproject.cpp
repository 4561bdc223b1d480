#include "mgabor/cutproject.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mgabor {

Box Box::centered(const std::vector<double>& center, const std::vector<double>& half_widths) {
    Box b;
    for (std::size_t i = 0; i < center.size(); ++i) {
        b.lo.push_back(center[i] - half_widths[i]);
        b.hi.push_back(center[i] + half_widths[i]);
    }
    return b;
}

Box Box::cube(std::size_t dim, double half_width) {
    return Box{std::vector<double>(dim, -half_width), std::vector<double>(dim, half_width)};
}

LatticeBasis::LatticeBasis(Eigen::MatrixXd basis) : basis_(std::move(basis)) {
    if (basis_.rows() == 0 || basis_.rows() != basis_.cols()) throw Error("singular basis");
    const double scale = std::max(basis_.cwiseAbs().maxCoeff(), 1e-300);
    const double det = basis_.determinant();
    if (!std::isfinite(det) || std::abs(det) <= 1e-12 * std::pow(scale, static_cast<double>(basis_.rows())))
        throw Error("singular basis");
    volume_ = std::abs(det);
    inverse_ = basis_.inverse();
}

LatticeBasis LatticeBasis::dual() const { return LatticeBasis(inverse_.transpose()); }

Eigen::VectorXd LatticeBasis::embed(const std::vector<std::int64_t>& coords) const {
    Eigen::VectorXd m(dim());
    for (int i = 0; i < dim(); ++i) m[i] = static_cast<double>(coords[i]);
    return basis_ * m;
}

void LatticeBasis::for_each_in_box(const Box& box, const LatticeVisitor& visit) const {
    const int n = dim();
    if (n == 0) throw Error("singular basis");
    if (static_cast<int>(box.lo.size()) != n || static_cast<int>(box.hi.size()) != n)
        throw std::invalid_argument("box dimension mismatch");
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(box.lo[i]) || !std::isfinite(box.hi[i]) || box.lo[i] > box.hi[i])
            throw std::invalid_argument("box must be finite and nonempty");
    }

    // Integer bounding box of the inverse image.
    std::vector<std::int64_t> mlo(n), mhi(n);
    for (int i = 0; i < n; ++i) {
        double lo = 0.0, hi = 0.0;
        for (int j = 0; j < n; ++j) {
            const double a = inverse_(i, j) * box.lo[j];
            const double b = inverse_(i, j) * box.hi[j];
            lo += std::min(a, b);
            hi += std::max(a, b);
        }
        mlo[i] = static_cast<std::int64_t>(std::floor(lo - 1e-9));
        mhi[i] = static_cast<std::int64_t>(std::ceil(hi + 1e-9));
    }

    std::vector<std::int64_t> m(mlo);
    std::vector<double> partial(n), x(n);
    const int last = n - 1;
    while (true) {
        // partial = sum of the first n-1 columns weighted by m
        for (int r = 0; r < n; ++r) {
            double s = 0.0;
            for (int k = 0; k < last; ++k) s += basis_(r, k) * static_cast<double>(m[k]);
            partial[r] = s;
        }
        double tlo = -std::numeric_limits<double>::infinity();
        double thi = std::numeric_limits<double>::infinity();
        bool feasible = true;
        for (int r = 0; r < n && feasible; ++r) {
            const double c = basis_(r, last);
            if (c == 0.0) {
                if (partial[r] < box.lo[r] || partial[r] > box.hi[r]) feasible = false;
                continue;
            }
            double a = (box.lo[r] - partial[r]) / c;
            double b = (box.hi[r] - partial[r]) / c;
            if (a > b) std::swap(a, b);
            tlo = std::max(tlo, a);
            thi = std::min(thi, b);
        }
        if (feasible && tlo <= thi + 1e-9) {
            const auto k0 = static_cast<std::int64_t>(std::ceil(tlo - 1e-9));
            const auto k1 = static_cast<std::int64_t>(std::floor(thi + 1e-9));
            for (std::int64_t k = k0; k <= k1; ++k) {
                m[last] = k;
                bool inside = true;
                for (int r = 0; r < n; ++r) {
                    x[r] = partial[r] + basis_(r, last) * static_cast<double>(k);
                    if (x[r] < box.lo[r] || x[r] > box.hi[r]) inside = false;
                }
                if (inside) visit(m.data(), x.data());
            }
        }
        // odometer over the outer coordinates
        int level = last - 1;
        while (level >= 0) {
            if (m[level] < mhi[level]) {
                ++m[level];
                break;
            }
            m[level] = mlo[level];
            --level;
        }
        if (level < 0) break;
    }
}

std::vector<LatticePoint> LatticeBasis::enumerate_in_box(const Box& box) const {
    std::vector<LatticePoint> out;
    const int n = dim();
    for_each_in_box(box, [&](const std::int64_t* c, const double* e) {
        LatticePoint p;
        p.coords.assign(c, c + n);
        p.embedded = Eigen::Map<const Eigen::VectorXd>(e, n);
        out.push_back(std::move(p));
    });
    return out;
}

CutProjectScheme::CutProjectScheme(int d, Eigen::MatrixXd basis) : d_(d) {
    if (d < 1) throw std::invalid_argument("d must be positive");
    if (basis.rows() != 2 * d + 1 || basis.cols() != 2 * d + 1)
        throw std::invalid_argument("scheme basis must be (2d+1)x(2d+1)");
    lattice_ = LatticeBasis(std::move(basis));
}

PlainLattice::PlainLattice(Eigen::MatrixXd basis) {
    if (basis.rows() % 2 != 0) throw std::invalid_argument("plain lattice basis must be 2d x 2d");
    lattice_ = LatticeBasis(std::move(basis));
}

PlainLattice PlainLattice::separable(double a, double b) {
    Eigen::MatrixXd m(2, 2);
    m << a, 0.0, 0.0, b;
    return PlainLattice(m);
}

PlainLattice PlainLattice::dual() const { return PlainLattice(dual_basis()); }

PlainLattice PlainLattice::adjoint() const { return PlainLattice(symplectic_J(d()) * dual_basis()); }

CutProjectScheme dual_scheme(const CutProjectScheme& scheme) {
    return CutProjectScheme(scheme.d(), scheme.lattice().inverse().transpose());
}

Eigen::VectorXd project(const CutProjectScheme& scheme, const LatticePoint& point, Projection which) {
    const int k = 2 * scheme.d();
    if (which == Projection::physical) return point.embedded.head(k);
    return point.embedded.tail(point.embedded.size() - k);
}

Eigen::VectorXd project(const PlainLattice&, const LatticePoint& point, Projection which) {
    if (which == Projection::internal) throw Error("no internal space");
    return point.embedded;
}

Eigen::MatrixXd symplectic_J(int d) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * d, 2 * d);
    J.topRightCorner(d, d) = Eigen::MatrixXd::Identity(d, d);
    J.bottomLeftCorner(d, d) = -Eigen::MatrixXd::Identity(d, d);
    return J;
}

namespace {

double closest_pair_distance(std::vector<Eigen::VectorXd> pts) {
    if (pts.size() < 2) return std::numeric_limits<double>::infinity();
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a[0] < b[0]; });
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            if (pts[j][0] - pts[i][0] >= best) break;
            best = std::min(best, (pts[j] - pts[i]).norm());
        }
    }
    return best;
}

std::vector<LatticePoint> points_in_ball(const LatticeBasis& lat, double radius) {
    std::vector<LatticePoint> out;
    for (auto& p : lat.enumerate_in_box(Box::cube(lat.dim(), radius)))
        if (p.embedded.norm() <= radius) out.push_back(std::move(p));
    return out;
}

std::vector<std::size_t> spread_indices(std::size_t n, std::size_t k) {
    std::vector<std::size_t> idx;
    if (n == 0) return idx;
    if (n <= k) {
        for (std::size_t i = 0; i < n; ++i) idx.push_back(i);
        return idx;
    }
    for (std::size_t i = 0; i < k; ++i) idx.push_back(i * (n - 1) / (k - 1));
    return idx;
}

}  // namespace

SchemeDiagnostics scheme_diagnostics(const CutProjectScheme& scheme, double radius, double tol) {
    if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
    SchemeDiagnostics diag;
    const auto pts = points_in_ball(scheme.lattice(), radius);
    diag.points = pts.size();

    std::vector<Eigen::VectorXd> phys;
    std::vector<double> internal;
    for (const auto& p : pts) {
        phys.push_back(project(scheme, p, Projection::physical));
        const double v = p.embedded[scheme.dim() - 1];
        if (v >= 0.0 && v <= 1.0) internal.push_back(v);
    }
    diag.injectivity_min_distance = closest_pair_distance(std::move(phys));
    diag.injectivity_pass = diag.injectivity_min_distance > tol;

    std::sort(internal.begin(), internal.end());
    if (internal.empty()) {
        diag.internal_covering_radius = 1.0;
    } else {
        double cr = std::max(internal.front(), 1.0 - internal.back());
        for (std::size_t i = 1; i < internal.size(); ++i) cr = std::max(cr, 0.5 * (internal[i] - internal[i - 1]));
        diag.internal_covering_radius = cr;
    }

    const auto dual_pts = points_in_ball(scheme.lattice().dual(), radius);
    double dev = 0.0;
    for (std::size_t i : spread_indices(pts.size(), 200))
        for (std::size_t j : spread_indices(dual_pts.size(), 200)) {
            const double dot = pts[i].embedded.dot(dual_pts[j].embedded);
            dev = std::max(dev, std::abs(dot - std::round(dot)));
        }
    diag.integrality_deviation = dev;
    diag.integrality_pass = dev < 1e-9;
    diag.pass = diag.injectivity_pass && diag.integrality_pass;
    return diag;
}

CutProjectScheme scheme_a() {
    Eigen::MatrixXd b(3, 3);
    b << 1.0, 0.0, std::sqrt(2.0), 0.0, 1.0, std::sqrt(3.0), std::sqrt(5.0), std::sqrt(7.0), 1.0;
    return CutProjectScheme(1, b);
}

}  // namespace mgabor
