#include "parcel/synth.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "parcel/baselines.hpp"
#include "parcel/errors.hpp"
#include "parcel/rng.hpp"

namespace parcel {

SurfaceMesh grid_mesh(uint32_t rows, uint32_t cols, double spacing) {
    if (rows < 2 || cols < 2)
        throw parameter_error("grid mesh needs at least 2x2 vertices");
    SurfaceMesh mesh;
    mesh.vertex_positions.reserve(static_cast<std::size_t>(rows) * cols);
    for (uint32_t r = 0; r < rows; ++r)
        for (uint32_t c = 0; c < cols; ++c)
            mesh.vertex_positions.push_back({c * spacing, r * spacing, 0.0});
    auto vid = [cols](uint32_t r, uint32_t c) { return r * cols + c; };
    for (uint32_t r = 0; r + 1 < rows; ++r) {
        for (uint32_t c = 0; c + 1 < cols; ++c) {
            uint32_t v00 = vid(r, c), v01 = vid(r, c + 1);
            uint32_t v10 = vid(r + 1, c), v11 = vid(r + 1, c + 1);
            // Consistent diagonal: interior vertices touch six triangles and
            // share the same lumped area.
            mesh.triangles.push_back({v00, v01, v11});
            mesh.triangles.push_back({v00, v11, v10});
        }
    }
    return mesh;
}

SyntheticCohort sample_cohort(const GroundTruthModel& model, uint64_t seed) {
    if (model.sigma_c < 0.0 || model.sigma_s < 0.0)
        throw parameter_error("sigma_c and sigma_s must be non-negative");
    if (model.n_subjects < 1)
        throw parameter_error("cohort needs at least one subject");
    if (model.betas.size() != model.partition.n_parcels)
        throw parameter_error("model has " + std::to_string(model.betas.size()) +
                              " fingerprints for " +
                              std::to_string(model.partition.n_parcels) + " clusters");
    const std::size_t n_seeds = model.partition.labels.size();
    const std::size_t n_targets = model.n_targets();

    SyntheticCohort cohort;
    cohort.model = model;

    // eps_c: one draw per seed, shared across subjects.
    cohort.epsilon_c = ConnectivityMatrix::zeros(n_seeds, n_targets, Space::Logit);
    {
        Rng rng(derive_seed(seed, 0));
        std::normal_distribution<double> noise(0.0, 1.0);
        if (model.sigma_c > 0.0)
            for (double& v : cohort.epsilon_c.values) v = model.sigma_c * noise(rng);
    }

    for (uint32_t s = 0; s < model.n_subjects; ++s) {
        ConnectivityMatrix logits =
            ConnectivityMatrix::zeros(n_seeds, n_targets, Space::Logit);
        Rng rng(derive_seed(seed, 1 + s));
        std::normal_distribution<double> noise(0.0, 1.0);
        for (std::size_t p = 0; p < n_seeds; ++p) {
            const auto& beta = model.betas[model.partition.labels[p]];
            double* row = logits.row(p);
            const double* eps_c = cohort.epsilon_c.row(p);
            for (std::size_t t = 0; t < n_targets; ++t) {
                double eps_s = model.sigma_s > 0.0 ? model.sigma_s * noise(rng) : 0.0;
                row[t] = beta[t] + eps_c[t] + eps_s;
            }
        }

        if (model.streamlines_per_seed) {
            const uint32_t n = *model.streamlines_per_seed;
            if (n == 0) throw parameter_error("streamlines_per_seed must be positive");
            StreamlineCounts counts;
            counts.n_seeds = n_seeds;
            counts.n_targets = n_targets;
            counts.trials_per_seed = n;
            counts.successes.resize(n_seeds * n_targets);
            Rng obs_rng(derive_seed(seed, 0x10000 + s));
            for (std::size_t i = 0; i < logits.values.size(); ++i) {
                double theta = logistic(logits.values[i]);
                std::binomial_distribution<uint32_t> binom(n, theta);
                counts.successes[i] = binom(obs_rng);
            }
            cohort.subject_observed.push_back(estimate_tractogram(counts));
            cohort.subject_counts.push_back(std::move(counts));
        }
        cohort.subject_logits.push_back(std::move(logits));
    }
    return cohort;
}

GroundTruthModel planted_partition(const SurfaceMesh& mesh, uint32_t k,
                                   uint32_t n_targets, double separation,
                                   uint64_t seed) {
    if (k < 1) throw parameter_error("planted partition needs k >= 1");
    if (separation <= 0.0) throw parameter_error("separation must be positive");
    AdjacencyGraph graph = build_adjacency(mesh);

    GroundTruthModel model;
    model.partition = homogeneous_random_parcellation(graph, k, derive_seed(seed, 0));

    // Fingerprints uniform in [-6, 6]^n, rescaled so the closest pair is at
    // least `separation` apart.
    Rng rng(derive_seed(seed, 1));
    std::uniform_real_distribution<double> uni(-6.0, 6.0);
    model.betas.assign(k, std::vector<double>(n_targets));
    for (auto& beta : model.betas)
        for (double& v : beta) v = uni(rng);

    if (k > 1) {
        double min_dist = std::numeric_limits<double>::infinity();
        for (uint32_t i = 0; i < k; ++i) {
            for (uint32_t j = i + 1; j < k; ++j) {
                double sq = 0.0;
                for (uint32_t t = 0; t < n_targets; ++t) {
                    double diff = model.betas[i][t] - model.betas[j][t];
                    sq += diff * diff;
                }
                min_dist = std::min(min_dist, std::sqrt(sq));
            }
        }
        if (min_dist <= 0.0)
            throw constraint_error("drawn fingerprints coincide; cannot separate");
        if (min_dist < separation) {
            double scale = separation / min_dist;
            for (auto& beta : model.betas)
                for (double& v : beta) v *= scale;
        }
    }
    return model;
}

} // namespace parcel
