#include "parcel/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

#include "parcel/errors.hpp"
#include "parcel/metrics.hpp"
#include "parcel/rng.hpp"

namespace parcel {

namespace {

inline uint64_t pair_key(uint32_t a, uint32_t b) {
    if (a > b) std::swap(a, b);
    return (static_cast<uint64_t>(a) << 32) | b;
}

// Parcel-level adjacency induced by the vertex graph.
std::vector<std::unordered_set<uint32_t>> parcel_adjacency(const Parcellation& p,
                                                           const AdjacencyGraph& graph) {
    std::vector<std::unordered_set<uint32_t>> adj(p.n_parcels);
    for (uint32_t v = 0; v < graph.n_vertices(); ++v) {
        for (uint32_t w : graph.neighbors[v]) {
            uint32_t a = p.labels[v], b = p.labels[w];
            if (a != b) {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
    }
    return adj;
}

} // namespace

Parcellation homogeneous_random_parcellation(const AdjacencyGraph& graph,
                                             uint32_t n_parcels, uint64_t seed) {
    const uint32_t n = static_cast<uint32_t>(graph.n_vertices());
    if (n_parcels < 1 || n_parcels > n)
        throw parameter_error("parcel count " + std::to_string(n_parcels) +
                              " out of range [1," + std::to_string(n) + "]");
    Rng rng(seed);

    // Distinct start vertices by partial Fisher-Yates.
    std::vector<uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    for (uint32_t i = 0; i < n_parcels; ++i) {
        std::uniform_int_distribution<uint32_t> pick(i, n - 1);
        std::swap(order[i], order[pick(rng)]);
    }

    constexpr uint32_t kUnassigned = 0xFFFFFFFFu;
    std::vector<uint32_t> labels(n, kUnassigned);
    uint32_t assigned = 0;

    // Candidate (parcel, frontier vertex) pairs. Deduplicated at insertion;
    // stale entries (vertex already assigned) are discarded lazily, which
    // keeps the draw uniform over the still-valid pairs.
    std::vector<std::pair<uint32_t, uint32_t>> frontier;
    std::unordered_set<uint64_t> seen;
    auto push_frontier = [&](uint32_t parcel, uint32_t v) {
        if (labels[v] != kUnassigned) return;
        if (seen.insert((static_cast<uint64_t>(parcel) << 32) | v).second)
            frontier.emplace_back(parcel, v);
    };

    for (uint32_t parcel = 0; parcel < n_parcels; ++parcel) {
        labels[order[parcel]] = parcel;
        ++assigned;
    }
    for (uint32_t parcel = 0; parcel < n_parcels; ++parcel)
        for (uint32_t w : graph.neighbors[order[parcel]]) push_frontier(parcel, w);

    while (assigned < n) {
        if (frontier.empty())
            throw constraint_error("graph has vertices unreachable from the start points"
                                   " (disconnected graph)");
        std::uniform_int_distribution<std::size_t> pick(0, frontier.size() - 1);
        std::size_t idx = pick(rng);
        auto [parcel, v] = frontier[idx];
        if (labels[v] != kUnassigned) {
            frontier[idx] = frontier.back();
            frontier.pop_back();
            continue;
        }
        labels[v] = parcel;
        ++assigned;
        for (uint32_t w : graph.neighbors[v]) push_frontier(parcel, w);
    }
    return make_parcellation(labels);
}

Dendrogram random_hierarchical_merge(const Parcellation& initial,
                                     const AdjacencyGraph& graph, uint64_t seed,
                                     bool adjacency_constrained) {
    const uint32_t p = initial.n_parcels;
    Rng rng(seed);
    Dendrogram d;
    d.n_leaves = p;
    d.n_size_constrained = 0;

    std::vector<bool> active(p, true);
    std::vector<uint32_t> counts(p, 1);
    std::vector<uint32_t> active_ids(p);
    std::iota(active_ids.begin(), active_ids.end(), 0u);

    std::vector<std::unordered_set<uint32_t>> adj;
    std::vector<std::pair<uint32_t, uint32_t>> candidates;
    std::unordered_set<uint64_t> seen;
    if (adjacency_constrained) {
        adj = parcel_adjacency(initial, graph);
        for (uint32_t a = 0; a < p; ++a)
            for (uint32_t b : adj[a])
                if (a < b && seen.insert(pair_key(a, b)).second)
                    candidates.emplace_back(a, b);
    }

    auto do_merge = [&](uint32_t a, uint32_t b) {
        uint32_t m = p + static_cast<uint32_t>(d.merges.size());
        active.push_back(true);
        counts.push_back(counts[a] + counts[b]);
        active[a] = active[b] = false;
        std::erase(active_ids, a);
        std::erase(active_ids, b);
        active_ids.push_back(m);
        d.merges.push_back({std::min(a, b), std::max(a, b),
                            static_cast<double>(d.merges.size() + 1), counts[m]});
        if (adjacency_constrained) {
            std::unordered_set<uint32_t> merged;
            for (uint32_t nb : adj[a])
                if (nb != b && active[nb]) merged.insert(nb);
            for (uint32_t nb : adj[b])
                if (nb != a && active[nb]) merged.insert(nb);
            for (uint32_t nb : merged) {
                adj[nb].insert(m);
                if (seen.insert(pair_key(m, nb)).second)
                    candidates.emplace_back(std::min(m, nb), std::max(m, nb));
            }
            adj.push_back(std::move(merged));
        }
        return m;
    };

    while (active_ids.size() > 1) {
        if (adjacency_constrained) {
            // Rejection sampling over the candidate list: stale pairs are
            // removed as they are drawn.
            uint32_t a = 0, b = 0;
            for (;;) {
                if (candidates.empty())
                    throw constraint_error(
                        "no spatially adjacent parcel pair available to merge"
                        " (disconnected parcel graph)");
                std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
                std::size_t idx = pick(rng);
                auto [x, y] = candidates[idx];
                if (!active[x] || !active[y]) {
                    candidates[idx] = candidates.back();
                    candidates.pop_back();
                    continue;
                }
                a = x;
                b = y;
                break;
            }
            do_merge(a, b);
        } else {
            std::uniform_int_distribution<std::size_t> pick_i(0, active_ids.size() - 1);
            std::size_t i = pick_i(rng);
            std::uniform_int_distribution<std::size_t> pick_j(0, active_ids.size() - 2);
            std::size_t j = pick_j(rng);
            if (j >= i) ++j;
            do_merge(active_ids[i], active_ids[j]);
        }
    }
    return d;
}

Parcellation expand_to_vertices(const Parcellation& initial,
                                const Parcellation& parcel_labels) {
    if (parcel_labels.labels.size() != initial.n_parcels)
        throw parameter_error("parcel-level labeling covers " +
                              std::to_string(parcel_labels.labels.size()) +
                              " parcels, initial partition has " +
                              std::to_string(initial.n_parcels));
    std::vector<uint32_t> raw(initial.labels.size());
    for (std::size_t v = 0; v < raw.size(); ++v)
        raw[v] = parcel_labels.labels[initial.labels[v]];
    return make_parcellation(raw);
}

std::vector<BaselineRow> baseline_curve(const AdjacencyGraph& graph,
                                        const std::vector<uint32_t>& k_values,
                                        const BaselineOptions& options) {
    if (options.n_trials < 2)
        throw parameter_error("baseline_curve needs at least 2 trials");

    // Hierarchical trials are k-independent: one dendrogram per trial, cut at
    // every requested k.
    std::vector<Parcellation> initials;
    std::vector<Dendrogram> dendros;
    if (options.mode == BaselineMode::Hierarchical) {
        initials.reserve(options.n_trials);
        dendros.reserve(options.n_trials);
        for (uint32_t t = 0; t < options.n_trials; ++t) {
            uint64_t s = derive_seed(options.seed, t);
            Parcellation init = homogeneous_random_parcellation(
                graph, options.initial_parcels, s);
            dendros.push_back(random_hierarchical_merge(init, graph,
                                                        derive_seed(s, 1), true));
            initials.push_back(std::move(init));
        }
    }

    std::vector<BaselineRow> rows;
    for (uint32_t k : k_values) {
        std::vector<double> aris;
        for (uint32_t t = 0; t + 1 < options.n_trials; t += 2) {
            Parcellation pa, pb;
            if (options.mode == BaselineMode::Homogeneous) {
                pa = homogeneous_random_parcellation(
                    graph, k, derive_seed(options.seed, (static_cast<uint64_t>(k) << 32) | t));
                pb = homogeneous_random_parcellation(
                    graph, k,
                    derive_seed(options.seed, (static_cast<uint64_t>(k) << 32) | (t + 1)));
            } else {
                pa = expand_to_vertices(initials[t], cut_by_count(dendros[t], k));
                pb = expand_to_vertices(initials[t + 1], cut_by_count(dendros[t + 1], k));
            }
            aris.push_back(adjusted_rand_index(pa, pb));
        }
        double mean = 0.0;
        for (double a : aris) mean += a;
        mean /= static_cast<double>(aris.size());
        double var = 0.0;
        for (double a : aris) var += (a - mean) * (a - mean);
        double sd = aris.size() > 1 ? std::sqrt(var / (aris.size() - 1)) : 0.0;
        rows.push_back({k, options.mode, mean, sd, options.n_trials});
    }
    return rows;
}

} // namespace parcel
