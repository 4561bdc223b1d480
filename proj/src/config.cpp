#include "mgabor/config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace mgabor {

bool ConfigNode::has(const std::string& key) const { return j_->is_object() && j_->contains(key); }

ConfigNode ConfigNode::at(const std::string& key) const {
    if (!j_->is_object()) fail("expected an object");
    const auto it = j_->find(key);
    if (it == j_->end()) throw ConfigError(path_ + "." + key, "missing field");
    return ConfigNode(&*it, path_ + "." + key);
}

ConfigNode ConfigNode::at(std::size_t index) const {
    if (!j_->is_array()) fail("expected an array");
    if (index >= j_->size()) fail("index " + std::to_string(index) + " out of range");
    return ConfigNode(&(*j_)[index], path_ + "[" + std::to_string(index) + "]");
}

std::size_t ConfigNode::size() const {
    if (!j_->is_array()) fail("expected an array");
    return j_->size();
}

double ConfigNode::number() const {
    if (!j_->is_number()) fail("expected a number");
    const double v = j_->get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
}

double ConfigNode::positive() const {
    const double v = number();
    if (!(v > 0.0)) fail("expected a positive number");
    return v;
}

long long ConfigNode::integer() const {
    if (!j_->is_number_integer()) fail("expected an integer");
    return j_->get<long long>();
}

std::string ConfigNode::string() const {
    if (!j_->is_string()) fail("expected a string");
    return j_->get<std::string>();
}

bool ConfigNode::boolean() const {
    if (!j_->is_boolean()) fail("expected true or false");
    return j_->get<bool>();
}

PhasePoint ConfigNode::point() const {
    if (!j_->is_array() || j_->size() != 2) fail("expected [x, omega]");
    return {at(0).number(), at(1).number()};
}

cplx ConfigNode::complex() const {
    if (j_->is_number()) return {number(), 0.0};
    if (!j_->is_array() || j_->size() != 2) fail("expected a number or [re, im]");
    return {at(0).number(), at(1).number()};
}

double ConfigNode::number_or(const std::string& key, double fallback) const {
    return has(key) ? at(key).number() : fallback;
}
double ConfigNode::positive_or(const std::string& key, double fallback) const {
    return has(key) ? at(key).positive() : fallback;
}
long long ConfigNode::integer_or(const std::string& key, long long fallback) const {
    return has(key) ? at(key).integer() : fallback;
}
std::string ConfigNode::string_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? at(key).string() : fallback;
}
bool ConfigNode::boolean_or(const std::string& key, bool fallback) const {
    return has(key) ? at(key).boolean() : fallback;
}
PhasePoint ConfigNode::point_or(const std::string& key, PhasePoint fallback) const {
    return has(key) ? at(key).point() : fallback;
}

nlohmann::json parse_config_text(const std::string& text, const std::string& source) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // locate the byte offset as line:column
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()) && i + 1 < e.byte; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col), "malformed JSON");
    }
}

nlohmann::json load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError(file.string(), "cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), file.string());
}

CutProjectScheme scheme_from(const ConfigNode& node) {
    if (node.raw().is_string()) {
        if (node.string() == "scheme_a") return scheme_a();
        node.fail("unknown scheme name");
    }
    const auto basis = node.at("basis");
    const std::size_t n = basis.size();
    if (n != 3) basis.fail("only d = 1 schemes (3x3 bases) are supported");
    Eigen::MatrixXd B(3, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        const auto row = basis.at(i);
        if (row.size() != 3) row.fail("expected 3 entries");
        for (std::size_t j = 0; j < 3; ++j) B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row.at(j).number();
    }
    if (std::abs(B.determinant()) < 1e-12) basis.fail("singular basis");
    return CutProjectScheme(1, B);
}

PlainLattice lattice_from(const ConfigNode& node) {
    if (node.has("basis")) {
        const auto basis = node.at("basis");
        if (basis.size() != 2) basis.fail("expected a 2x2 basis");
        Eigen::MatrixXd B(2, 2);
        for (std::size_t i = 0; i < 2; ++i) {
            const auto row = basis.at(i);
            if (row.size() != 2) row.fail("expected 2 entries");
            for (std::size_t j = 0; j < 2; ++j) B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row.at(j).number();
        }
        if (std::abs(B.determinant()) < 1e-12) basis.fail("singular basis");
        return PlainLattice(B);
    }
    return PlainLattice::separable(node.positive_or("a", 1.0), node.positive_or("b", 1.0));
}

WindowInterval window_from(const ConfigNode& node) {
    WindowInterval w;
    w.half_width = node.raw().is_number() ? node.positive() : node.positive_or("half_width", 0.5);
    return w;
}

ModelSetSpec modelset_from(const ConfigNode& root) {
    ModelSetSpec spec;
    spec.scheme = root.has("scheme") ? scheme_from(root.at("scheme")) : scheme_a();
    if (root.has("window")) spec.window = window_from(root.at("window"));
    if (root.has("shift")) {
        const auto sh = root.at("shift");
        ModelSetShift s;
        const PhasePoint p = sh.point_or("s", {0.0, 0.0});
        s.s = Eigen::Vector2d(p.x, p.omega);
        s.t = sh.number_or("t", 0.0);
        spec.shift = s;
    }
    return spec;
}

BumpSpec bump_from(const ConfigNode& node, WindowInterval omega) {
    BumpSpec bs;
    bs.omega = omega;
    if (node.has("half_width")) bs.omega.half_width = node.at("half_width").positive();
    bs.eps = node.number_or("eps", bs.eps);
    if (!(bs.eps > 0.0 && bs.eps < 1.0)) node.fail("eps must lie in (0, 1)");
    bs.n = static_cast<int>(node.integer_or("n", bs.n));
    if (bs.n < 1) node.fail("n must be at least 1");
    bs.s_max = static_cast<int>(node.integer_or("s_max", bs.s_max));
    if (bs.s_max < 0) node.fail("s_max must be non-negative");
    return bs;
}

DecayKernel kernel_from(const std::string& name, const ConfigNode& root, const ModelSetSpec& spec) {
    static const nlohmann::json empty = nlohmann::json::object();
    const ConfigNode bump = root.has("bump") ? root.at("bump") : ConfigNode(&empty, root.path() + ".bump");
    if (name == "phi_limit") return DecayKernel::phi_limit(spec.window);
    const BumpSpec bs = bump_from(bump, spec.window);
    if (name == "psi2" || name == "psi_hat_squared") return DecayKernel::psi_hat_squared(bs);
    if (name == "phi_n") return DecayKernel::phi_n(bs);
    throw ConfigError(root.path() + ".kernel", "unknown kernel '" + name + "' (psi2, phi_n, phi_limit)");
}

AnalyticWindow analytic_from(const ConfigNode& node) {
    if (node.raw().is_string()) {
        if (node.string() == "g0") return AnalyticWindow::gaussian();
        node.fail("unknown window name");
    }
    const std::string type = node.string_or("type", "gaussian");
    if (type == "sum") {
        const auto terms = node.at("terms");
        if (terms.size() == 0) terms.fail("empty sum");
        AnalyticWindow w = analytic_from(terms.at(0));
        for (std::size_t i = 1; i < terms.size(); ++i) w = w + analytic_from(terms.at(i));
        return w;
    }
    const double width = node.positive_or("width", 1.0);
    const PhasePoint shift = node.point_or("shift", {0.0, 0.0});
    const cplx coef = node.has("coef") ? node.at("coef").complex() : cplx{1.0, 0.0};
    if (type == "gaussian") return AnalyticWindow::gaussian(width, shift, coef);
    if (type == "hermite") {
        const long long k = node.integer_or("order", 0);
        if (k < 0 || k > 40) node.at("order").fail("order must lie in [0, 40]");
        return AnalyticWindow::hermite(static_cast<int>(k), width, shift, coef);
    }
    throw ConfigError(node.path() + ".type", "unknown analytic window type '" + type + "'");
}

SampledSignal bump_window(double half_width, double step) {
    BumpSpec bs;
    bs.omega.half_width = half_width;
    const Bump bump(bs);
    const auto n = static_cast<std::size_t>(std::llround(2.0 * half_width / step)) + 1;
    SampledSignal g = SampledSignal::zeros(-half_width, step, n);
    for (std::size_t j = 0; j < n; ++j) g.samples[j] = bump.value(g.t(j));
    return g;
}

Signal signal_from(const ConfigNode& node) {
    if (node.raw().is_string()) return analytic_from(node);
    const std::string type = node.string_or("type", "gaussian");
    if (type == "bump" || type == "painless_dual") {
        const double hw = node.positive_or("half_width", 1.0);
        const double step = node.positive_or("step", 1.0 / 32.0);
        auto g = bump_window(hw, step);
        if (type == "bump") return g;
        return painless_dual(node.positive_or("a", 0.5), node.positive_or("b", 0.5), g).h;
    }
    if (type == "samples") {
        SampledSignal s;
        s.start = node.number_or("start", 0.0);
        s.step = node.at("step").positive();
        const auto values = node.at("values");
        for (std::size_t i = 0; i < values.size(); ++i) s.samples.push_back(values.at(i).complex());
        return s;
    }
    if (type == "render") {
        const auto g = grid_from(node.at("grid"));
        return render(analytic_from(node.at("window")), g.start, g.step, g.size);
    }
    return analytic_from(node);
}

std::vector<Signal> signals_from(const ConfigNode& node) {
    std::vector<Signal> out;
    if (!node.raw().is_array()) {
        out.push_back(signal_from(node));
        return out;
    }
    for (std::size_t i = 0; i < node.size(); ++i) out.push_back(signal_from(node.at(i)));
    if (out.empty()) node.fail("empty window list");
    return out;
}

Gaussian2D gaussian2d_from(const ConfigNode& node) {
    Gaussian2D F;
    F.amplitude = node.number_or("amplitude", 1.0);
    F.a = node.positive_or("a", 1.0);
    return F;
}

GridSpec grid_from(const ConfigNode& node) {
    GridSpec g;
    g.start = node.number_or("start", -4.0);
    g.step = node.positive_or("step", 1.0 / 32.0);
    const long long n = node.integer_or("size", 256);
    if (n < 1) node.at("size").fail("size must be positive");
    g.size = static_cast<std::size_t>(n);
    return g;
}

DualityPolicy duality_policy_from(const ConfigNode& node) {
    DualityPolicy p;
    p.primal_radius = node.positive_or("primal_radius", 0.0);
    p.dual_radius = node.positive_or("dual_radius", 0.0);
    p.T = node.positive_or("T", 0.0);
    p.tail_target = node.positive_or("tail_target", p.tail_target);
    p.tol = node.positive_or("tol", 0.0);
    if (node.has("separable_nodes")) {
        const auto s = node.at("separable_nodes");
        p.nodes = separable_nodes(s.at("a").positive(), s.at("b").positive(), static_cast<long>(s.at("m0").integer()),
                                  static_cast<long>(s.at("m1").integer()), static_cast<long>(s.at("k0").integer()),
                                  static_cast<long>(s.at("k1").integer()));
    }
    return p;
}

TruncationPolicy truncation_policy_from(const ConfigNode& node) {
    TruncationPolicy p;
    p.node_radius = node.positive_or("node_radius", p.node_radius);
    p.tail_tol = node.positive_or("tail_tol", p.tail_tol);
    p.report_tails = node.boolean_or("report_tails", p.report_tails);
    return p;
}

void write_csv(const std::filesystem::path& file, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file);
    if (!out) throw Error("cannot write " + file.string());
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n' << std::setprecision(17);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
}

}  // namespace mgabor
