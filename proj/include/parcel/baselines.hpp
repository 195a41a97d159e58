#ifndef PARCEL_BASELINES_HPP
#define PARCEL_BASELINES_HPP

#include <cstdint>
#include <vector>

#include "parcel/cluster.hpp"
#include "parcel/mesh.hpp"

namespace parcel {

// Seeded region growing: n_parcels uniformly chosen start vertices, then
// repeated uniform draws over (parcel, unassigned frontier vertex) adjacency
// pairs until the graph is covered. Every parcel is connected and non-empty.
Parcellation homogeneous_random_parcellation(const AdjacencyGraph& graph,
                                             uint32_t n_parcels, uint64_t seed);

// Random agglomeration over the parcels of `initial` as leaves. Merge heights
// are ordinal (1,2,3,...); only cut_by_count is meaningful. When
// adjacency_constrained, only spatially adjacent parcel pairs may merge.
Dendrogram random_hierarchical_merge(const Parcellation& initial,
                                     const AdjacencyGraph& graph, uint64_t seed,
                                     bool adjacency_constrained);

// Re-expands a cut of a parcel-level dendrogram to per-vertex labels.
Parcellation expand_to_vertices(const Parcellation& initial,
                                const Parcellation& parcel_labels);

enum class BaselineMode { Homogeneous, Hierarchical };

struct BaselineRow {
    uint32_t k = 0;
    BaselineMode mode = BaselineMode::Homogeneous;
    double mean_ari = 0.0;
    double std_ari = 0.0;
    uint32_t n_trials = 0;
};

struct BaselineOptions {
    BaselineMode mode = BaselineMode::Homogeneous;
    uint32_t n_trials = 1000;
    uint32_t initial_parcels = 300; // leaves of the hierarchical baseline
    uint64_t seed = 0;
};

// Chance-level ARI per granularity: n_trials random parcellations compared in
// disjoint pairs (trial 2i vs 2i+1), mean and sample std of the resulting
// ARI values.
std::vector<BaselineRow> baseline_curve(const AdjacencyGraph& graph,
                                        const std::vector<uint32_t>& k_values,
                                        const BaselineOptions& options);

} // namespace parcel

#endif
