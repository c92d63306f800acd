#pragma once

// Philox4x32-10 counter-based generator. One stream per (seed, stream_id)
// pair, so ensemble members draw identical numbers no matter how work is
// scheduled across threads.

#include <array>
#include <cmath>
#include <cstdint>

namespace wploc {

namespace detail {

struct Philox4x32 {
    std::array<std::uint32_t, 4> ctr{};
    std::array<std::uint32_t, 2> key{};

    static void round(std::array<std::uint32_t, 4>& x, const std::array<std::uint32_t, 2>& k) {
        const std::uint64_t p0 = 0xD2511F53ull * x[0];
        const std::uint64_t p1 = 0xCD9E8D57ull * x[2];
        const std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
        const std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
        x = {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
    }

    std::array<std::uint32_t, 4> operator()() {
        std::array<std::uint32_t, 4> x = ctr;
        std::array<std::uint32_t, 2> k = key;
        for (int r = 0; r < 10; ++r) {
            round(x, k);
            k[0] += 0x9E3779B9u;
            k[1] += 0xBB67AE85u;
        }
        if (++ctr[0] == 0 && ++ctr[1] == 0) ++ctr[2];
        return x;
    }
};

} // namespace detail

// Deterministic Gaussian stream: standard normals via Box-Muller on top of
// Philox blocks. Pure function of (seed, stream_id, draw index).
class GaussianStream {
public:
    GaussianStream(std::uint64_t seed, std::uint64_t stream_id) {
        eng_.key = {std::uint32_t(seed), std::uint32_t(seed >> 32)};
        eng_.ctr = {0, 0, std::uint32_t(stream_id), std::uint32_t(stream_id >> 32)};
    }

    double uniform() {   // (0, 1), never exactly 0 or 1
        if (u_pos_ == 0) {
            block_ = eng_();
            u_pos_ = 2;
        }
        --u_pos_;
        const std::uint32_t a = block_[2 * u_pos_], b = block_[2 * u_pos_ + 1];
        const std::uint64_t bits = ((std::uint64_t(a) << 32) | b) >> 11;   // 53 bits
        return (double(bits) + 0.5) * 0x1.0p-53;
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform(), u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 2.0 * M_PI * u2;
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

private:
    detail::Philox4x32 eng_;
    std::array<std::uint32_t, 4> block_{};
    int u_pos_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace wploc
