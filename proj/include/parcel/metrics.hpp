#ifndef PARCEL_METRICS_HPP
#define PARCEL_METRICS_HPP

#include <cstdint>
#include <vector>

#include "parcel/cluster.hpp"

namespace parcel {

struct ContingencyTable {
    std::vector<std::vector<uint64_t>> counts; // parcels of p x parcels of q
    std::vector<uint64_t> row_sums;            // a_i
    std::vector<uint64_t> col_sums;            // b_j
    uint64_t total = 0;                        // n
};

ContingencyTable contingency(const Parcellation& p, const Parcellation& q);

// Hubert-Arabie adjusted Rand index. Degenerate denominators (both partitions
// all-singletons or both single-parcel) return 1 when the partitions are
// equal and 0 otherwise.
double adjusted_rand_index(const Parcellation& p, const Parcellation& q);

struct ConsistencyRow {
    uint32_t k = 0;
    uint32_t pair_a = 0; // dendrogram indices
    uint32_t pair_b = 0;
    double ari = 0.0;
};

// Cuts every dendrogram at each k and scores all pairs.
std::vector<ConsistencyRow> consistency_curve(const std::vector<Dendrogram>& dendros,
                                              const std::vector<uint32_t>& k_values);

} // namespace parcel

#endif
