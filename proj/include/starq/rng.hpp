#pragma once

#include <cmath>
#include <cstdint>

namespace starq {

// Counter-based 64-bit generator built on the splitmix64 mixing function.
// A stream is identified by a key; successive outputs are mix(key + n*phi).
// Streams with distinct keys are independent for all practical purposes,
// which lets us index them by (seed, realization, qubit) and draw from any
// of them concurrently.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Hash a small tuple of integers into a stream key.
inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t a = 0,
                                std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t k = splitmix64(seed);
    k = splitmix64(k ^ (a + 0x100000001b3ULL));
    k = splitmix64(k ^ (b + 0xcbf29ce484222325ULL));
    k = splitmix64(k ^ (c + 0x9ddfea08eb382d69ULL));
    return k;
}

class RngStream {
  public:
    explicit RngStream(std::uint64_t key) : key_(key) {}
    RngStream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
              std::uint64_t c = 0)
        : key_(stream_key(seed, a, b, c)) {}

    std::uint64_t next_u64() { return splitmix64(key_ + (counter_++) * 0x9e3779b97f4a7c15ULL); }

    // Uniform in (0, 1]; never returns 0 so it is safe under log().
    double next_uniform() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller (implementation-pinned so traces are
    // bit-identical across platforms, unlike std::normal_distribution).
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = next_uniform();
        double v = next_uniform();
        double r = std::sqrt(-2.0 * std::log(u));
        double phi = 2.0 * M_PI * v;
        spare_ = r * std::sin(phi);
        have_spare_ = true;
        return r * std::cos(phi);
    }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace starq
