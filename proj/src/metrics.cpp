#include "parcel/metrics.hpp"

#include <string>

#include "parcel/errors.hpp"

namespace parcel {

namespace {

inline uint64_t choose2(uint64_t n) { return n * (n - 1) / 2; }

bool partitions_equal(const ContingencyTable& t) {
    // Equal up to relabeling: every row and column holds exactly one nonzero
    // cell and it accounts for the whole row/column.
    for (std::size_t i = 0; i < t.counts.size(); ++i) {
        uint64_t nonzero = 0, value = 0;
        for (uint64_t c : t.counts[i]) {
            if (c > 0) {
                ++nonzero;
                value = c;
            }
        }
        if (nonzero != 1 || value != t.row_sums[i]) return false;
    }
    for (std::size_t j = 0; j < t.col_sums.size(); ++j) {
        uint64_t nonzero = 0, value = 0;
        for (std::size_t i = 0; i < t.counts.size(); ++i) {
            if (t.counts[i][j] > 0) {
                ++nonzero;
                value = t.counts[i][j];
            }
        }
        if (nonzero != 1 || value != t.col_sums[j]) return false;
    }
    return true;
}

} // namespace

ContingencyTable contingency(const Parcellation& p, const Parcellation& q) {
    if (p.labels.size() != q.labels.size())
        throw parameter_error("partitions cover different seed counts: " +
                              std::to_string(p.labels.size()) + " vs " +
                              std::to_string(q.labels.size()));
    ContingencyTable t;
    t.counts.assign(p.n_parcels, std::vector<uint64_t>(q.n_parcels, 0));
    t.row_sums.assign(p.n_parcels, 0);
    t.col_sums.assign(q.n_parcels, 0);
    t.total = p.labels.size();
    for (std::size_t v = 0; v < p.labels.size(); ++v) {
        ++t.counts[p.labels[v]][q.labels[v]];
        ++t.row_sums[p.labels[v]];
        ++t.col_sums[q.labels[v]];
    }
    return t;
}

double adjusted_rand_index(const Parcellation& p, const Parcellation& q) {
    ContingencyTable t = contingency(p, q);
    if (t.total < 2) return partitions_equal(t) ? 1.0 : 0.0;

    // Exact integer pair counts; converted to floating point once at the end.
    uint64_t sum_cells = 0;
    for (const auto& row : t.counts)
        for (uint64_t c : row) sum_cells += choose2(c);
    uint64_t sum_rows = 0;
    for (uint64_t a : t.row_sums) sum_rows += choose2(a);
    uint64_t sum_cols = 0;
    for (uint64_t b : t.col_sums) sum_cols += choose2(b);
    const uint64_t pairs = choose2(t.total);

    const double expected =
        static_cast<double>(sum_rows) * static_cast<double>(sum_cols) /
        static_cast<double>(pairs);
    const double max_index = 0.5 * (static_cast<double>(sum_rows) +
                                    static_cast<double>(sum_cols));
    if (max_index == expected) return partitions_equal(t) ? 1.0 : 0.0;
    return (static_cast<double>(sum_cells) - expected) / (max_index - expected);
}

std::vector<ConsistencyRow> consistency_curve(const std::vector<Dendrogram>& dendros,
                                              const std::vector<uint32_t>& k_values) {
    for (std::size_t i = 1; i < dendros.size(); ++i)
        if (dendros[i].n_leaves != dendros[0].n_leaves)
            throw parameter_error("dendrogram " + std::to_string(i) + " has " +
                                  std::to_string(dendros[i].n_leaves) +
                                  " leaves, expected " +
                                  std::to_string(dendros[0].n_leaves));
    std::vector<ConsistencyRow> rows;
    for (uint32_t k : k_values) {
        std::vector<Parcellation> cuts;
        cuts.reserve(dendros.size());
        for (const auto& d : dendros) cuts.push_back(cut_by_count(d, k));
        for (std::size_t a = 0; a < cuts.size(); ++a)
            for (std::size_t b = a + 1; b < cuts.size(); ++b)
                rows.push_back({k, static_cast<uint32_t>(a), static_cast<uint32_t>(b),
                                adjusted_rand_index(cuts[a], cuts[b])});
    }
    return rows;
}

} // namespace parcel
