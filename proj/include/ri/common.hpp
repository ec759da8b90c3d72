#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ri {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
// Row-major so row slices (neighbor lists) are contiguous.
using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Raised on malformed input files and contract violations of the data model.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised on numerical failures: non-convergence, line-search abort, overflow.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/**
 * Splittable deterministic generator (splitmix64 core).
 *
 * Every random choice in the project flows from one seed through splits,
 * so runs are reproducible bit-for-bit across platforms. std::shuffle and
 * std::uniform_int_distribution are implementation-defined and are not used.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Unbiased uniform integer in [0, bound) via rejection.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    /// Standard normal via Box-Muller.
    double next_gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = next_double();
        } while (u1 <= 0.0);
        const double u2 = next_double();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * std::numbers::pi * u2;
        spare_ = mag * std::sin(ang);
        has_spare_ = true;
        return mag * std::cos(ang);
    }

    /// Independent child stream; does not advance this generator.
    Rng split(std::uint64_t tag) const {
        Rng child(state_ ^ (0x632be59bd9b4e019ULL * (tag + 1) + 0x9e3779b97f4a7c15ULL));
        child.next_u64();
        return child;
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// log(1 + exp(t)) without overflow for large |t|.
inline double log1p_exp(double t) {
    return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

/// Logistic sigmoid 1 / (1 + exp(-t)).
inline double sigmoid(double t) {
    return t >= 0.0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
}

}  // namespace ri
