#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "lrfs/core.hpp"
#include "lrfs/gaussian.hpp"

namespace lrfs {

/// Counter-based deterministic generator. Draw i is the SplitMix64
/// finalizer applied to seed + (i+1) * 0x9E3779B97F4A7C15; outputs are a
/// pure function of (seed, counter), so runs reproduce bit-for-bit across
/// platforms and the stream can be split by offsetting the counter.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0)
        : seed_(seed), counter_(counter) {}

    std::uint64_t next_u64() {
        std::uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 significant bits.
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal via the Box-Muller transform (two draws per value).
    double normal() {
        double u1 = uniform(), u2 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// N(mean, cov) sample via the Cholesky factor.
    Vector normal_vec(const Vector& mean, const Matrix& cov) {
        Eigen::LLT<Matrix> llt(cov);
        Vector z(mean.size());
        for (int i = 0; i < z.size(); ++i) z(i) = normal();
        return mean + Matrix(llt.matrixL()) * z;
    }

    /// Poisson count by CDF inversion; adequate for desk-scale rates.
    int poisson(double rate) {
        if (!(rate > 0.0)) return 0;
        double u = uniform();
        double p = std::exp(-rate), cdf = p;
        int k = 0;
        while (u > cdf && k < 10000) {
            ++k;
            p *= rate / double(k);
            cdf += p;
        }
        return k;
    }

    /// Index draw from a (not necessarily normalized) weight vector.
    std::size_t categorical(const std::vector<double>& weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        double u = uniform() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) return i;
        }
        return weights.empty() ? 0 : weights.size() - 1;
    }

    [[nodiscard]] std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_;
};

}  // namespace lrfs
