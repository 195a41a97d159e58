#ifndef PARCEL_CLUSTER_HPP
#define PARCEL_CLUSTER_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "parcel/connectivity.hpp"
#include "parcel/mesh.hpp"

namespace parcel {

// One agglomeration step. Node ids: leaves are 0..n_leaves-1, the k-th merge
// creates node n_leaves+k. left < right by node id.
struct MergeRecord {
    uint32_t left = 0;
    uint32_t right = 0;
    double height = 0.0;      // Ward cost of the merge (variance increase)
    uint32_t member_count = 0; // leaves under the new node
};

// Full merge tree; encodes every granularity of one parcellation.
// The first n_size_constrained merges come from the minimum-size phase and
// may have non-monotone heights; the remainder is unconstrained Ward and is
// non-decreasing in height.
struct Dendrogram {
    uint32_t n_leaves = 0;
    std::size_t n_size_constrained = 0;
    std::vector<MergeRecord> merges;

    // Parcel count after the minimum-size phase only.
    uint32_t finest_granularity() const {
        return n_leaves - static_cast<uint32_t>(n_size_constrained);
    }
};

// Flat partition: labels are 0..n_parcels-1 with every value present,
// assigned by increasing smallest-member index.
struct Parcellation {
    std::vector<uint32_t> labels;
    uint32_t n_parcels = 0;

    std::size_t n_seeds() const { return labels.size(); }
};

// Canonicalizes arbitrary label values into the 0..k-1 smallest-member-first
// convention.
Parcellation make_parcellation(const std::vector<uint32_t>& raw_labels);

// Ward linkage cost: (n_a*n_b)/(n_a+n_b) * ||c_a - c_b||^2, the increase in
// total within-cluster sum of squares caused by the merge.
double ward_distance(std::span<const double> centroid_a, std::size_t size_a,
                     std::span<const double> centroid_b, std::size_t size_b);

// Ward distance from cluster K to the merge A∪B in constant time.
double lance_williams_update(double d_ak, double d_bk, double d_ab,
                             std::size_t n_a, std::size_t n_b, std::size_t n_k);

struct BuildOptions {
    double min_area = 0.0;
    bool allow_disconnected = false; // permit a disconnected adjacency graph
};

// Phase 1: greedy spatially-constrained merging until every cluster reaches
// min_area. Phase 2: unconstrained Ward over the survivors with
// Lance-Williams updates. Areas are per-seed (mm², or 1.0 each for
// vertex-count mode).
Dendrogram build_dendrogram(const ConnectivityMatrix& features,
                            const AdjacencyGraph& graph,
                            const std::vector<double>& areas,
                            const BuildOptions& options);

// Result of running only the minimum-size phase.
struct SizeConstraintResult {
    std::vector<MergeRecord> merges;
    Parcellation clusters; // finest partition satisfying the constraint
};

SizeConstraintResult enforce_min_size(const ConnectivityMatrix& features,
                                      const AdjacencyGraph& graph,
                                      const std::vector<double>& areas,
                                      double min_area,
                                      bool allow_disconnected = false);

// Undo the last k-1 merges; exactly k parcels.
Parcellation cut_by_count(const Dendrogram& d, uint32_t k);

// Apply the leading merges with height <= h.
Parcellation cut_by_height(const Dendrogram& d, double h);

// Inverse-logit of the mean logit row over the parcel's seeds.
std::vector<double> parcel_fingerprint(const ConnectivityMatrix& features,
                                       const Parcellation& p, uint32_t label);

} // namespace parcel

#endif
