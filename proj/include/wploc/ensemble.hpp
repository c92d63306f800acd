#pragma once

// Ensemble averaging over disorder realizations: sample -> build ->
// diagonalize -> observables, folded in realization order so results are
// bit-reproducible for any worker count, with a resumable checkpoint.

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "wploc/eigensolver.hpp"

extern "C" void openblas_set_num_threads(int) __attribute__((weak));

namespace wploc {

struct ObservableRequest {
    bool density = true;
    std::vector<std::pair<double, double>> windows;  // windowed densities
    std::vector<double> energy_bin_edges;            // energy histogram, empty = off
    double smoothing = 0.007;

    std::size_t flat_size(std::size_t n_grid) const {
        std::size_t s = 0;
        if (density) s += n_grid;
        s += windows.size() * n_grid;
        if (energy_bin_edges.size() > 1) s += energy_bin_edges.size() - 1;
        return s;
    }
};

struct EnsembleAccumulator {
    std::uint64_t count = 0;
    std::vector<double> sum;
    std::vector<double> sum_sq;

    void init(std::size_t n) {
        count = 0;
        sum.assign(n, 0.0);
        sum_sq.assign(n, 0.0);
    }
    void add(const std::vector<double>& v) {
        if (v.size() != sum.size()) throw std::logic_error("EnsembleAccumulator: size mismatch");
        for (std::size_t i = 0; i < v.size(); ++i) {
            sum[i] += v[i];
            sum_sq[i] += v[i] * v[i];
        }
        ++count;
    }
    void merge(const EnsembleAccumulator& o) {
        if (o.sum.size() != sum.size()) throw std::logic_error("EnsembleAccumulator: size mismatch");
        for (std::size_t i = 0; i < sum.size(); ++i) {
            sum[i] += o.sum[i];
            sum_sq[i] += o.sum_sq[i];
        }
        count += o.count;
    }
    double mean(std::size_t i) const { return sum[i] / double(count); }
    double stderr_of_mean(std::size_t i) const {
        if (count < 2) return 0.0;
        const double m = mean(i);
        double var = (sum_sq[i] - double(count) * m * m) / double(count - 1);
        if (var < 0.0) var = 0.0;
        return std::sqrt(var / double(count));
    }
};

struct EnsembleResult {
    EnsembleAccumulator acc;
    std::vector<double> x_grid;
    std::vector<std::uint64_t> failed;   // realization indices that threw
    // layout offsets into the flat observable vector
    std::size_t off_density = 0;
    std::vector<std::size_t> off_windows;
    std::size_t off_hist = 0;
    std::size_t n_grid = 0;
    std::size_t n_bins = 0;
};

namespace detail {

inline std::string ensemble_header(const PotentialSpec& spec, const WavePacketSpec& wp,
                                   const ObservableRequest& req, std::uint64_t n_folded,
                                   std::uint64_t n_ok) {
    std::ostringstream os;
    os.precision(17);
    os << "{\"v0\":" << spec.v0 << ",\"sigma_c\":" << spec.sigma_c
       << ",\"box_length\":" << spec.box_length << ",\"n_grid\":" << spec.n_grid
       << ",\"seed\":" << spec.seed << ",\"a\":" << wp.a
       << ",\"n_windows\":" << req.windows.size()
       << ",\"n_bins\":" << (req.energy_bin_edges.empty() ? 0 : req.energy_bin_edges.size() - 1)
       << ",\"n_folded\":" << n_folded << ",\"n_ok\":" << n_ok << "}";
    return os.str();
}

inline void write_checkpoint(const std::string& path, const PotentialSpec& spec,
                             const WavePacketSpec& wp, const ObservableRequest& req,
                             std::uint64_t n_folded, const EnsembleAccumulator& acc) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("ensemble checkpoint: cannot write " + path);
    f << ensemble_header(spec, wp, req, n_folded, acc.count) << "\n";
    auto put = [&f](const std::vector<double>& v) {
        f.write(reinterpret_cast<const char*>(v.data()),
                std::streamsize(v.size() * sizeof(double)));   // little-endian host
    };
    put(acc.sum);
    put(acc.sum_sq);
}

inline std::uint64_t parse_u64_field(const std::string& header, const std::string& key) {
    const auto pos = header.find(key);
    if (pos == std::string::npos) return std::uint64_t(-1);
    return std::strtoull(header.c_str() + pos + key.size(), nullptr, 10);
}

inline bool read_checkpoint(const std::string& path, const PotentialSpec& spec,
                            const WavePacketSpec& wp, const ObservableRequest& req,
                            std::size_t flat, EnsembleAccumulator& acc,
                            std::uint64_t& n_folded) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return false;
    std::string header;
    std::getline(f, header);
    n_folded = parse_u64_field(header, "\"n_folded\":");
    const std::uint64_t n_ok = parse_u64_field(header, "\"n_ok\":");
    if (n_folded == std::uint64_t(-1) || n_ok == std::uint64_t(-1)) return false;
    if (header != ensemble_header(spec, wp, req, n_folded, n_ok)) return false;
    acc.init(flat);
    acc.count = n_ok;
    auto get = [&f](std::vector<double>& v) {
        f.read(reinterpret_cast<char*>(v.data()), std::streamsize(v.size() * sizeof(double)));
        return bool(f);
    };
    if (!get(acc.sum) || !get(acc.sum_sq)) return false;
    return true;
}

} // namespace detail

// Per-realization pipeline producing the flat observable vector.
inline std::vector<double> realization_observables(const PotentialSpec& spec,
                                                   const WavePacketSpec& wp,
                                                   const ObservableRequest& req,
                                                   std::uint64_t index) {
    const PotentialSample sample = sample_potential(spec, index);
    EigenSolution sol = diagonalize(build_hamiltonian(sample));
    std::vector<double> flat;
    flat.reserve(req.flat_size(spec.n_grid));
    if (req.density) {
        NumericDensity nd = numeric_density(sol, wp);
        if (std::abs(nd.profile.mass - 1.0) > 1e-6)
            throw std::runtime_error("realization_observables: density mass off unity");
        flat.insert(flat.end(), nd.profile.values.begin(), nd.profile.values.end());
    }
    for (const auto& w : req.windows) {
        DensityProfile p = numeric_windowed_density(sol, wp, w);
        flat.insert(flat.end(), p.values.begin(), p.values.end());
    }
    if (req.energy_bin_edges.size() > 1) {
        // accumulate raw (unnormalized-by-realization) weights so the
        // ensemble average stays a density after the shared normalization
        const std::vector<double> psi = initial_packet_on_grid(wp, sol.n, sol.h, sol.box_length);
        const std::vector<double> c = sol.overlaps(psi);
        std::vector<double> w(req.energy_bin_edges.size() - 1, 0.0);
        for (std::size_t m = 0; m < sol.n; ++m) {
            const auto it = std::upper_bound(req.energy_bin_edges.begin(),
                                             req.energy_bin_edges.end(), sol.energies[m]);
            if (it == req.energy_bin_edges.begin() || it == req.energy_bin_edges.end()) continue;
            w[std::size_t(it - req.energy_bin_edges.begin()) - 1] += c[m] * c[m];
        }
        flat.insert(flat.end(), w.begin(), w.end());
    }
    return flat;
}

// Deterministic ensemble run. Realizations are computed by a worker pool but
// folded strictly in index order; a rerun (or a resumed run) reproduces the
// same accumulator bit for bit.
inline EnsembleResult run_ensemble(const PotentialSpec& spec, const WavePacketSpec& wp,
                                   const ObservableRequest& req, std::uint64_t n_real,
                                   unsigned n_threads = 1,
                                   const std::string& checkpoint_path = {},
                                   std::uint64_t checkpoint_every = 25,
                                   bool verbose = false) {
    spec.validate();
    wp.validate();
    if (n_real < 2) throw std::invalid_argument("run_ensemble: need n_real >= 2");
    if (openblas_set_num_threads) openblas_set_num_threads(1);

    const std::size_t flat = req.flat_size(spec.n_grid);
    EnsembleResult res;
    res.n_grid = spec.n_grid;
    res.n_bins = req.energy_bin_edges.empty() ? 0 : req.energy_bin_edges.size() - 1;
    std::size_t off = 0;
    if (req.density) { res.off_density = off; off += spec.n_grid; }
    for (std::size_t w = 0; w < req.windows.size(); ++w) {
        res.off_windows.push_back(off);
        off += spec.n_grid;
    }
    res.off_hist = off;
    res.x_grid.resize(spec.n_grid);
    for (std::size_t i = 0; i < spec.n_grid; ++i)
        res.x_grid[i] = -0.5 * spec.box_length + double(i) * spec.grid_step();

    EnsembleAccumulator& acc = res.acc;
    std::uint64_t start = 0;
    bool resumed = false;
    if (!checkpoint_path.empty() &&
        detail::read_checkpoint(checkpoint_path, spec, wp, req, flat, acc, start)) {
        resumed = true;
    }
    if (!resumed) { acc.init(flat); start = 0; }
    if (start >= n_real) return res;

    std::mutex mu;
    std::condition_variable cv;
    std::map<std::uint64_t, std::optional<std::vector<double>>> ready;  // nullopt = failed
    std::atomic<std::uint64_t> next{start};

    auto worker = [&] {
        for (;;) {
            const std::uint64_t r = next.fetch_add(1);
            if (r >= n_real) break;
            std::optional<std::vector<double>> obs;
            try {
                obs = realization_observables(spec, wp, req, r);
            } catch (const std::exception&) {
                obs = std::nullopt;
            }
            {
                std::lock_guard<std::mutex> lock(mu);
                ready[r] = std::move(obs);
            }
            cv.notify_one();
        }
    };
    std::vector<std::thread> pool;
    const unsigned nw = std::max(1u, n_threads);
    for (unsigned t = 0; t < nw; ++t) pool.emplace_back(worker);

    std::uint64_t fold_next = start;
    std::uint64_t since_ckpt = 0;
    {
        std::unique_lock<std::mutex> lock(mu);
        while (fold_next < n_real) {
            cv.wait(lock, [&] { return ready.count(fold_next) > 0; });
            auto node = ready.extract(fold_next);
            lock.unlock();
            if (node.mapped().has_value())
                acc.add(*node.mapped());
            else
                res.failed.push_back(fold_next);
            ++fold_next;
            ++since_ckpt;
            if (!checkpoint_path.empty() && (since_ckpt >= checkpoint_every || fold_next == n_real)) {
                detail::write_checkpoint(checkpoint_path, spec, wp, req, fold_next, acc);
                since_ckpt = 0;
            }
            if (verbose && fold_next % 10 == 0)
                std::fprintf(stderr, "ensemble: %llu/%llu\n",
                             (unsigned long long)fold_next, (unsigned long long)n_real);
            lock.lock();
        }
    }
    for (auto& t : pool) t.join();
    return res;
}

} // namespace wploc
