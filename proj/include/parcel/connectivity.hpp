#ifndef PARCEL_CONNECTIVITY_HPP
#define PARCEL_CONNECTIVITY_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace parcel {

enum class Space : uint8_t { Probability = 0, Logit = 1 };

// Dense row-major matrix of per-seed connection values. Rows are seeds,
// columns are target sites. The space tag tracks whether entries are
// probabilities in [0,1] or finite logits.
struct ConnectivityMatrix {
    std::size_t n_seeds = 0;
    std::size_t n_targets = 0;
    Space space = Space::Probability;
    std::vector<double> values; // n_seeds * n_targets, row-major

    double& at(std::size_t seed, std::size_t target) {
        return values[seed * n_targets + target];
    }
    double at(std::size_t seed, std::size_t target) const {
        return values[seed * n_targets + target];
    }
    const double* row(std::size_t seed) const { return values.data() + seed * n_targets; }
    double* row(std::size_t seed) { return values.data() + seed * n_targets; }

    static ConnectivityMatrix zeros(std::size_t n_seeds, std::size_t n_targets, Space space);
};

struct StreamlineCounts {
    std::size_t n_seeds = 0;
    std::size_t n_targets = 0;
    uint32_t trials_per_seed = 0; // N, streamlines launched per seed
    std::vector<uint32_t> successes; // row-major, each <= trials_per_seed

    uint32_t at(std::size_t seed, std::size_t target) const {
        return successes[seed * n_targets + target];
    }
};

// successes / N, entrywise.
ConnectivityMatrix estimate_tractogram(const StreamlineCounts& counts);

// logit(clip(p, eps, 1-eps)). Requires probability space and 0 < eps < 0.5.
ConnectivityMatrix logit_transform(const ConnectivityMatrix& m, double clamp_eps);

// Logistic function entrywise. Requires logit space.
ConnectivityMatrix inverse_logit(const ConnectivityMatrix& m);

double logit(double p);
double logistic(double x);

// Default clamp when the streamline count N is known: half the smallest
// observable nonzero proportion.
inline double default_clamp_eps(uint32_t trials_per_seed) {
    return trials_per_seed > 0 ? 1.0 / (2.0 * trials_per_seed) : 1e-4;
}

// Entrywise arithmetic mean over subjects. Accumulates in long double with a
// fixed left-to-right order so a given subject ordering is bit-reproducible.
ConnectivityMatrix groupwise_average(const std::vector<ConnectivityMatrix>& per_subject);

} // namespace parcel

#endif
