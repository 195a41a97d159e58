#ifndef PARCEL_SYNTH_HPP
#define PARCEL_SYNTH_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "parcel/cluster.hpp"
#include "parcel/connectivity.hpp"
#include "parcel/mesh.hpp"

namespace parcel {

// Planted ground truth for the logistic random-effects observation model.
struct GroundTruthModel {
    Parcellation partition;            // cluster of each seed vertex
    std::vector<std::vector<double>> betas; // per-cluster logit fingerprint
    double sigma_c = 0.0;              // intra-cluster std, logit units
    double sigma_s = 0.0;              // across-subject std, logit units
    uint32_t n_subjects = 1;
    std::optional<uint32_t> streamlines_per_seed; // N; enables the count layer

    std::size_t n_targets() const { return betas.empty() ? 0 : betas[0].size(); }
};

struct SyntheticCohort {
    GroundTruthModel model;
    // Intra-cluster deviation, drawn once per seed and shared across subjects.
    ConnectivityMatrix epsilon_c; // logit space, n_seeds x n_targets
    // Exact logit matrices: beta_{c(p)} + eps_c(p) + eps_s(s,p).
    std::vector<ConnectivityMatrix> subject_logits;
    // Observation layer, present when streamlines_per_seed is set: Binomial
    // success counts and the observed proportion matrices.
    std::vector<StreamlineCounts> subject_counts;
    std::vector<ConnectivityMatrix> subject_observed; // probability space
};

// Planar triangulated grid; each unit cell split into two triangles.
SurfaceMesh grid_mesh(uint32_t rows, uint32_t cols, double spacing);

SyntheticCohort sample_cohort(const GroundTruthModel& model, uint64_t seed);

// Random connected partition plus well-separated per-cluster fingerprints.
// sigma_c/sigma_s/n_subjects are left at defaults for the caller to fill.
GroundTruthModel planted_partition(const SurfaceMesh& mesh, uint32_t k,
                                   uint32_t n_targets, double separation,
                                   uint64_t seed);

} // namespace parcel

#endif
