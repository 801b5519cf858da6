#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stablevol/csv.hpp"
#include "stablevol/lattice.hpp"
#include "stablevol/model.hpp"
#include "stablevol/stable_law.hpp"

namespace stablevol {

/// Everything a convergence experiment needs, resolvable from a key=value
/// config file, command-line flags, or both (flags win). No environment
/// variables are consulted, so a run is reproducible from its artifacts.
struct ExperimentConfig {
    std::vector<double> alphas{1.8, 1.6, 1.4, 1.1};
    double beta = 0.0;
    double mu = 1.5;
    double lambda = 2.0;
    double kappa = 0.5;
    double x0 = 1.0;
    double horizon = 1.0;
    double q = 1.0;
    std::int64_t m = 500;
    std::vector<double> deltas = default_desk_deltas();
    double delta_ref = 0x1.0p-15;
    std::uint64_t master_seed = 20240101;
    std::string out_dir = "results";
    int threads = 1;
    bool sup_over_grid = false;

    static std::vector<double> default_desk_deltas() {
        return {0x1.0p-13, 0x1.0p-12, 0x1.0p-11, 0x1.0p-10, 0x1.0p-9};
    }
    static std::vector<double> paper_scale_deltas() {
        return {0x1.0p-14, 0x1.0p-13, 0x1.0p-12, 0x1.0p-11, 0x1.0p-10};
    }

    /// Switch grid/trajectory counts between the quick desk defaults and the
    /// full-size experiment grid (finer reference, more trajectories).
    void apply_paper_scale() {
        deltas = paper_scale_deltas();
        delta_ref = 0x1.0p-16;
        m = 1000;
    }

    ModelParams model_for(double alpha) const { return {mu, lambda, kappa, x0, alpha}; }
    StableLaw law_for(double alpha) const { return StableLaw(alpha, beta, 1.0); }
};

/// Named parameter sets for the three benchmark tables.
inline ExperimentConfig preset_config(const std::string& name) {
    ExperimentConfig cfg;
    if (name == "table1") {
        cfg.mu = 1.5;
        cfg.lambda = 2.0;
        cfg.kappa = 0.5;
    } else if (name == "table2") {
        cfg.mu = 2.0;
        cfg.lambda = 3.0;
        cfg.kappa = 0.5;
    } else if (name == "table3") {
        cfg.mu = 2.0;
        cfg.lambda = 3.0;
        cfg.kappa = 0.2;
    } else {
        throw std::domain_error("unknown preset '" + name +
                                "'; valid presets: table1, table2, table3");
    }
    cfg.x0 = 1.0;
    return cfg;
}

namespace detail {

inline const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "alphas", "beta",      "mu",   "lambda",  "kappa",   "x0",      "horizon", "q",
        "m",      "deltas",    "ref",  "seed",    "out",     "threads", "sup"};
    return keys;
}

/// Parse one real; "2^-10" style dyadic notation is accepted alongside
/// ordinary decimal literals.
inline double parse_real_token(std::string_view tok) {
    const auto caret = tok.find('^');
    if (caret != std::string_view::npos) {
        const double base = parse_double(tok.substr(0, caret));
        const double expo = parse_double(tok.substr(caret + 1));
        return std::pow(base, expo);
    }
    return parse_double(tok);
}

inline std::vector<double> parse_real_list(std::string_view text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto end = (comma == std::string_view::npos) ? text.size() : comma;
        auto piece = text.substr(start, end - start);
        while (!piece.empty() && piece.front() == ' ') piece.remove_prefix(1);
        while (!piece.empty() && piece.back() == ' ') piece.remove_suffix(1);
        if (!piece.empty()) out.push_back(parse_real_token(piece));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline std::string format_real_list(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ',';
        out += format_double(values[i]);
    }
    return out;
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Apply one key=value setting. Unknown keys report the full valid key list.
inline void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                               const std::string& value) {
    using detail::parse_real_list;
    using detail::parse_real_token;
    if (key == "alphas") {
        cfg.alphas = parse_real_list(value);
    } else if (key == "beta") {
        cfg.beta = parse_real_token(value);
    } else if (key == "mu") {
        cfg.mu = parse_real_token(value);
    } else if (key == "lambda") {
        cfg.lambda = parse_real_token(value);
    } else if (key == "kappa") {
        cfg.kappa = parse_real_token(value);
    } else if (key == "x0") {
        cfg.x0 = parse_real_token(value);
    } else if (key == "horizon") {
        cfg.horizon = parse_real_token(value);
    } else if (key == "q") {
        cfg.q = parse_real_token(value);
    } else if (key == "m") {
        cfg.m = static_cast<std::int64_t>(parse_real_token(value));
    } else if (key == "deltas") {
        cfg.deltas = parse_real_list(value);
    } else if (key == "ref") {
        cfg.delta_ref = parse_real_token(value);
    } else if (key == "seed") {
        cfg.master_seed = static_cast<std::uint64_t>(std::stoull(value));
    } else if (key == "out") {
        cfg.out_dir = value;
    } else if (key == "threads") {
        cfg.threads = static_cast<int>(parse_real_token(value));
    } else if (key == "sup") {
        cfg.sup_over_grid = (value == "1" || value == "true");
    } else {
        std::string msg = "unknown config key '" + key + "'; valid keys:";
        for (const auto& k : detail::config_keys()) msg += " " + k;
        throw std::domain_error(msg);
    }
}

/// Read a key=value config file ('#' starts a comment). Keys not present
/// keep the defaults already in cfg.
inline void load_config_file(ExperimentConfig& cfg, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_config_file: cannot open '" + path.string() + "'");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const std::string text = detail::trim(line);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw std::domain_error("config line " + std::to_string(line_no) +
                                    ": expected key=value, got '" + text + "'");
        }
        apply_config_entry(cfg, detail::trim(text.substr(0, eq)),
                           detail::trim(text.substr(eq + 1)));
    }
}

/// Serialise so that parse(serialise(cfg)) reproduces cfg exactly; reals use
/// the shortest round-trip representation.
inline std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "alphas = " << detail::format_real_list(cfg.alphas) << '\n';
    out << "beta = " << format_double(cfg.beta) << '\n';
    out << "mu = " << format_double(cfg.mu) << '\n';
    out << "lambda = " << format_double(cfg.lambda) << '\n';
    out << "kappa = " << format_double(cfg.kappa) << '\n';
    out << "x0 = " << format_double(cfg.x0) << '\n';
    out << "horizon = " << format_double(cfg.horizon) << '\n';
    out << "q = " << format_double(cfg.q) << '\n';
    out << "m = " << format_int(cfg.m) << '\n';
    out << "deltas = " << detail::format_real_list(cfg.deltas) << '\n';
    out << "ref = " << format_double(cfg.delta_ref) << '\n';
    out << "seed = " << std::to_string(cfg.master_seed) << '\n';
    out << "out = " << cfg.out_dir << '\n';
    out << "threads = " << format_int(cfg.threads) << '\n';
    out << "sup = " << (cfg.sup_over_grid ? "1" : "0") << '\n';
    return out.str();
}

/// Validate every cross-field invariant; throws std::domain_error naming the
/// violated condition. Called after flags and files are merged.
inline void validate_config(const ExperimentConfig& cfg) {
    if (cfg.alphas.empty()) throw std::domain_error("config: alphas must be non-empty");
    for (const double a : cfg.alphas) {
        static_cast<void>(StableLaw(a, cfg.beta, 1.0));  // throws with the violated bound named
        const ModelParams params = cfg.model_for(a);
        require_admissible(params);
        const double window = delta_max(params);
        for (const double d : cfg.deltas) {
            if (!(d < window)) {
                throw std::domain_error(
                    "config: delta " + format_double(d) + " outside the admissible window (0, " +
                    format_double(window) + ") = (0, min((mu-1)/lambda, 1/lambda)) for alpha " +
                    format_double(a));
            }
        }
        if (!(cfg.q >= 1.0) || !(cfg.q < a)) {
            throw std::domain_error("config: q must lie in [1, alpha) for every alpha; alpha " +
                                    format_double(a) + " violates it");
        }
    }
    if (cfg.deltas.empty()) throw std::domain_error("config: deltas must be non-empty");
    for (const double d : cfg.deltas) {
        if (!detail::is_power_of_two_value(d)) {
            throw std::domain_error("config: delta " + format_double(d) +
                                    " is not a power of two");
        }
    }
    if (!detail::is_power_of_two_value(cfg.delta_ref)) {
        throw std::domain_error("config: ref must be a power of two");
    }
    const double min_delta = *std::min_element(cfg.deltas.begin(), cfg.deltas.end());
    if (!(cfg.delta_ref <= min_delta)) {
        throw std::domain_error("config: ref must not exceed the smallest delta");
    }
    if (!(cfg.horizon > 0.0)) throw std::domain_error("config: horizon must be positive");
    if (cfg.m < 2) throw std::domain_error("config: m must be at least 2");
}

}  // namespace stablevol
