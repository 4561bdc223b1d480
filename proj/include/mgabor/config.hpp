#pragma once

#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgabor/duality.hpp"

namespace mgabor {

/// Invalid configuration; the message starts with the offending field path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& path, const std::string& message)
        : std::runtime_error(path + ": " + message), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

/// Typed accessors over a JSON object that remember the field path.
class ConfigNode {
public:
    ConfigNode(const nlohmann::json* j, std::string path) : j_(j), path_(std::move(path)) {}

    const std::string& path() const { return path_; }
    bool has(const std::string& key) const;
    ConfigNode at(const std::string& key) const;
    ConfigNode at(std::size_t index) const;
    std::size_t size() const;
    const nlohmann::json& raw() const { return *j_; }

    double number() const;
    double positive() const;
    long long integer() const;
    std::string string() const;
    bool boolean() const;
    PhasePoint point() const;
    cplx complex() const;

    double number_or(const std::string& key, double fallback) const;
    double positive_or(const std::string& key, double fallback) const;
    long long integer_or(const std::string& key, long long fallback) const;
    std::string string_or(const std::string& key, const std::string& fallback) const;
    bool boolean_or(const std::string& key, bool fallback) const;
    PhasePoint point_or(const std::string& key, PhasePoint fallback) const;

    [[noreturn]] void fail(const std::string& message) const { throw ConfigError(path_, message); }

private:
    const nlohmann::json* j_;
    std::string path_;
};

/// Parses a JSON document; syntax errors become ConfigError with the line and column.
nlohmann::json parse_config_text(const std::string& text, const std::string& source);
nlohmann::json load_config(const std::filesystem::path& file);

CutProjectScheme scheme_from(const ConfigNode& node);
PlainLattice lattice_from(const ConfigNode& node);
WindowInterval window_from(const ConfigNode& node);
ModelSetSpec modelset_from(const ConfigNode& root);
BumpSpec bump_from(const ConfigNode& node, WindowInterval omega);
DecayKernel kernel_from(const std::string& name, const ConfigNode& root, const ModelSetSpec& spec);
AnalyticWindow analytic_from(const ConfigNode& node);
Signal signal_from(const ConfigNode& node);
std::vector<Signal> signals_from(const ConfigNode& node);
Gaussian2D gaussian2d_from(const ConfigNode& node);
GridSpec grid_from(const ConfigNode& node);
DualityPolicy duality_policy_from(const ConfigNode& node);
TruncationPolicy truncation_policy_from(const ConfigNode& node);

/// Fixture windows: the bump on [-w, w] sampled at `step`, and its painless dual.
SampledSignal bump_window(double half_width, double step);

/// Writes rows of numbers as CSV with a header line.
void write_csv(const std::filesystem::path& file, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace mgabor
