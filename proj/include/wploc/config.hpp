#pragma once

// Experiment configuration: JSON round trip, named presets, validation
// against the module preconditions. All I/O is in units sigma_c = 1
// (lengths in sigma_c, energies in sigma_c^-2, hbar = 2m = 1); a config may
// set sigma_c != 1 and every formula carries it explicitly.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wploc/lyapunov.hpp"
#include "wploc/spectral.hpp"

namespace wploc {

struct ExperimentConfig {
    DisorderModel model;                       // v0, sigma_c
    std::vector<double> v0_list;               // multi-strength runs (Fig.-2 style)
    WavePacketSpec wavepacket;                 // a
    double box_length = 200.0;
    std::uint64_t n_grid = 3200;
    std::uint64_t seed = 20240817;
    std::uint64_t n_real = 200;
    std::vector<std::pair<double, double>> windows;
    std::string out_dir = ".";
    unsigned threads = 2;

    PotentialSpec potential_spec() const {
        PotentialSpec s;
        s.v0 = model.v0;
        s.sigma_c = model.sigma_c;
        s.box_length = box_length;
        s.n_grid = n_grid;
        s.seed = seed;
        return s;
    }

    void validate() const {
        model.validate();
        wavepacket.validate();
        potential_spec().validate();
        for (const auto& w : windows)
            if (!(w.first < w.second))
                throw std::invalid_argument("config: windows must be ordered");
        if (n_real < 2) throw std::invalid_argument("config: n_real must be at least 2");
    }
};

// The six spectral windows used by the windowed-profile comparison,
// boundaries in units sigma_c^-2.
inline std::vector<std::pair<double, double>> standard_windows() {
    const double inf = std::numeric_limits<double>::infinity();
    return {{-inf, 0.0}, {0.0, 0.103}, {0.103, 0.178},
            {0.178, 0.278}, {0.278, 0.403}, {0.403, inf}};
}

inline ExperimentConfig preset_config(const std::string& name) {
    ExperimentConfig c;
    c.v0_list = {0.0165, 0.0325};
    c.model.v0 = 0.0325;
    c.windows = standard_windows();
    if (name == "desk") {
        c.box_length = 200.0;
        c.n_grid = 3200;
        c.n_real = 200;
    } else if (name == "paper") {
        // full-size run: large box, big ensemble, same code path
        c.box_length = 800.0;
        c.n_grid = 12800;
        c.n_real = 2000;
    } else {
        throw std::invalid_argument("unknown preset: " + name);
    }
    return c;
}

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j,
                                const std::vector<std::string>& allowed,
                                const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const auto& k : allowed) ok = ok || it.key() == k;
        if (!ok) throw std::invalid_argument("config: unknown field '" + it.key() + "' in " + where);
    }
}

} // namespace detail

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["model"] = {{"v0", c.model.v0}, {"sigma_c", c.model.sigma_c}};
    if (!c.v0_list.empty()) j["model"]["v0_list"] = c.v0_list;
    j["wavepacket"] = {{"a", c.wavepacket.a}};
    j["box"] = {{"length", c.box_length}, {"n_grid", c.n_grid}};
    j["ensemble"] = {{"seed", c.seed}, {"n_real", c.n_real}};
    nlohmann::json w = nlohmann::json::array();
    for (const auto& win : c.windows) {
        nlohmann::json pair = nlohmann::json::array();
        pair.push_back(std::isfinite(win.first) ? nlohmann::json(win.first) : nlohmann::json(nullptr));
        pair.push_back(std::isfinite(win.second) ? nlohmann::json(win.second) : nlohmann::json(nullptr));
        w.push_back(pair);
    }
    j["windows"] = w;
    j["outputs"] = {{"directory", c.out_dir}};
    j["threads"] = c.threads;
    return j;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    c.windows.clear();
    detail::reject_unknown_keys(j, {"model", "wavepacket", "box", "ensemble",
                                    "windows", "outputs", "threads"}, "config");
    if (j.contains("model")) {
        const auto& m = j.at("model");
        detail::reject_unknown_keys(m, {"v0", "sigma_c", "v0_list"}, "model");
        if (m.contains("v0")) c.model.v0 = m.at("v0").get<double>();
        if (m.contains("sigma_c")) c.model.sigma_c = m.at("sigma_c").get<double>();
        if (m.contains("v0_list")) c.v0_list = m.at("v0_list").get<std::vector<double>>();
    }
    if (j.contains("wavepacket")) {
        const auto& w = j.at("wavepacket");
        detail::reject_unknown_keys(w, {"a"}, "wavepacket");
        if (w.contains("a")) c.wavepacket.a = w.at("a").get<double>();
    }
    if (j.contains("box")) {
        const auto& b = j.at("box");
        detail::reject_unknown_keys(b, {"length", "n_grid"}, "box");
        if (b.contains("length")) c.box_length = b.at("length").get<double>();
        if (b.contains("n_grid")) c.n_grid = b.at("n_grid").get<std::uint64_t>();
    }
    if (j.contains("ensemble")) {
        const auto& e = j.at("ensemble");
        detail::reject_unknown_keys(e, {"seed", "n_real"}, "ensemble");
        if (e.contains("seed")) c.seed = e.at("seed").get<std::uint64_t>();
        if (e.contains("n_real")) c.n_real = e.at("n_real").get<std::uint64_t>();
    }
    if (j.contains("windows")) {
        const double inf = std::numeric_limits<double>::infinity();
        for (const auto& pair : j.at("windows")) {
            if (!pair.is_array() || pair.size() != 2)
                throw std::invalid_argument("config: window entries must be [lo, hi]");
            const double lo = pair[0].is_null() ? -inf : pair[0].get<double>();
            const double hi = pair[1].is_null() ? inf : pair[1].get<double>();
            c.windows.emplace_back(lo, hi);
        }
    }
    if (j.contains("outputs")) {
        const auto& o = j.at("outputs");
        detail::reject_unknown_keys(o, {"directory", "formats"}, "outputs");
        if (o.contains("directory")) c.out_dir = o.at("directory").get<std::string>();
    }
    if (j.contains("threads")) c.threads = j.at("threads").get<unsigned>();
    return c;
}

} // namespace wploc
