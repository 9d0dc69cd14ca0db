#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace vmp {

/// Thrown when an input is too degenerate to produce a meaningful result
/// (singular normal equations, empty regression regime, ...).
class degenerate_input_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Kahan-Babuska (Neumaier) compensated accumulator. All long reductions go
/// through this so results are stable to ~1 ulp regardless of term order.
class NeumaierSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) {
    NeumaierSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// FNV-1a over raw bytes; used for manifest digests and stable name hashing
/// (std::hash is implementation-defined).
inline std::uint64_t fnv1a64(const void* data, std::size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Seed for repetition `rep` of a run with master seed `master`. splitmix64
/// is a bijection, so distinct reps get distinct seeds.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t rep) {
    return splitmix64(splitmix64(master) ^ (rep + 1));
}

/// mt19937_64 wrapped with explicit transforms. std::*_distribution output
/// is implementation-defined, which would break bit-reproducibility of
/// simulations across standard libraries; these transforms are pinned.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform on (0, 1].
    double uniform() { return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (no caching, fixed draw order).
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace vmp
