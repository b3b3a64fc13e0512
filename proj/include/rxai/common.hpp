#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rxai {

// Error categories aligned with CLI exit codes: config -> 2, data -> 3,
// numeric -> 4.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Deterministic RNG. std::mt19937_64 output is pinned by the standard; the
// std distributions are not, so all draws are derived from raw engine words.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; the spare draw is cached.
    double normal();

    // Uniform integer in [0, n). Modulo bias is irrelevant here; the draws
    // only need to be deterministic and well spread.
    std::size_t below(std::size_t n) {
        return static_cast<std::size_t>(engine_() % n);
    }

    // Fisher-Yates with explicit index draws (std::shuffle is
    // implementation-defined).
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Derives an independent stream seed from (seed, stream); splitmix64 finalizer.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// FNV-1a 64-bit, used for artifact/content hashes in manifests and checkpoints.
std::uint64_t fnv1a64(std::string_view data);
std::string to_hex(std::uint64_t value);

// Shortest round-trip decimal form of a double (std::to_chars), so CSV and
// report values re-parse bit-exactly.
std::string format_double(double value);

// Linear-interpolation quantile between order statistics on an ascending
// sorted range (the common "type 7" estimator). q in [0, 1].
double quantile_sorted(const std::vector<double>& sorted, double q);

}  // namespace rxai
