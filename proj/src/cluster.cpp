#include "parcel/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>

#include "parcel/errors.hpp"

namespace parcel {

namespace {

constexpr uint32_t kNone = std::numeric_limits<uint32_t>::max();

inline uint64_t pair_key(uint32_t a, uint32_t b) {
    if (a > b) std::swap(a, b);
    return (static_cast<uint64_t>(a) << 32) | b;
}

struct Cluster {
    bool active = false;
    uint32_t count = 0; // leaves under this node
    double area = 0.0;
    std::vector<double> centroid;
    std::set<uint32_t> neighbors; // node ids of spatially adjacent clusters
};

// Shared merge bookkeeping for both phases. Node ids grow past n_leaves as
// merges are recorded.
struct Agglomeration {
    uint32_t n_leaves;
    std::vector<Cluster> clusters; // indexed by node id
    std::vector<MergeRecord> merges;

    Agglomeration(const ConnectivityMatrix& features, const AdjacencyGraph& graph,
                  const std::vector<double>& areas)
        : n_leaves(static_cast<uint32_t>(features.n_seeds)) {
        clusters.resize(n_leaves);
        for (uint32_t v = 0; v < n_leaves; ++v) {
            Cluster& c = clusters[v];
            c.active = true;
            c.count = 1;
            c.area = areas[v];
            c.centroid.assign(features.row(v), features.row(v) + features.n_targets);
            for (uint32_t w : graph.neighbors[v]) c.neighbors.insert(w);
        }
    }

    // Merges nodes a and b, records the step at the given height, and returns
    // the new node id.
    uint32_t merge(uint32_t a, uint32_t b, double height) {
        Cluster& ca = clusters[a];
        Cluster& cb = clusters[b];
        uint32_t m = n_leaves + static_cast<uint32_t>(merges.size());
        Cluster merged;
        merged.active = true;
        merged.count = ca.count + cb.count;
        merged.area = ca.area + cb.area;
        merged.centroid.resize(ca.centroid.size());
        const double wa = static_cast<double>(ca.count) / merged.count;
        const double wb = static_cast<double>(cb.count) / merged.count;
        for (std::size_t i = 0; i < merged.centroid.size(); ++i)
            merged.centroid[i] = wa * ca.centroid[i] + wb * cb.centroid[i];
        for (uint32_t nb : ca.neighbors)
            if (nb != b) merged.neighbors.insert(nb);
        for (uint32_t nb : cb.neighbors)
            if (nb != a) merged.neighbors.insert(nb);
        for (uint32_t nb : merged.neighbors) {
            clusters[nb].neighbors.erase(a);
            clusters[nb].neighbors.erase(b);
            clusters[nb].neighbors.insert(m);
        }
        ca.active = false;
        cb.active = false;
        ca.centroid.clear();
        cb.centroid.clear();
        merges.push_back({std::min(a, b), std::max(a, b), height, merged.count});
        clusters.push_back(std::move(merged));
        return m;
    }

    std::vector<uint32_t> active_ids() const {
        std::vector<uint32_t> ids;
        for (uint32_t id = 0; id < clusters.size(); ++id)
            if (clusters[id].active) ids.push_back(id);
        return ids;
    }

    double ward(uint32_t a, uint32_t b) const {
        return ward_distance(clusters[a].centroid, clusters[a].count,
                             clusters[b].centroid, clusters[b].count);
    }
};

// Leaves under each node id of a partial agglomeration, for error messages.
std::vector<uint32_t> leaves_under(const std::vector<MergeRecord>& merges,
                                   uint32_t n_leaves, uint32_t node) {
    if (node < n_leaves) return {node};
    const MergeRecord& rec = merges[node - n_leaves];
    auto left = leaves_under(merges, n_leaves, rec.left);
    auto right = leaves_under(merges, n_leaves, rec.right);
    left.insert(left.end(), right.begin(), right.end());
    std::sort(left.begin(), left.end());
    return left;
}

// Greedy minimum-size pass. Smallest undersized cluster first (ties: lowest
// id), absorbed by its spatial neighbor of minimum Ward distance (ties:
// lowest id).
void run_size_phase(Agglomeration& agg, double min_area) {
    for (;;) {
        uint32_t victim = kNone;
        double victim_area = 0.0;
        uint32_t n_active = 0;
        for (uint32_t id = 0; id < agg.clusters.size(); ++id) {
            const Cluster& c = agg.clusters[id];
            if (!c.active) continue;
            ++n_active;
            if (c.area < min_area && (victim == kNone || c.area < victim_area)) {
                victim = id;
                victim_area = c.area;
            }
        }
        if (victim == kNone) return;
        const Cluster& vc = agg.clusters[victim];
        if (vc.neighbors.empty()) {
            if (n_active == 1) return; // whole domain collapsed to one cluster
            auto members = leaves_under(agg.merges, agg.n_leaves, victim);
            std::string names;
            for (std::size_t i = 0; i < members.size() && i < 16; ++i)
                names += (i ? "," : "") + std::to_string(members[i]);
            if (members.size() > 16) names += ",...";
            throw constraint_error(
                "cluster of area " + std::to_string(vc.area) +
                " is below the minimum size but has no spatial neighbors"
                " (component seeds: " + names + ")");
        }
        uint32_t best = kNone;
        double best_d = 0.0;
        for (uint32_t nb : vc.neighbors) { // std::set iterates in increasing id
            double d = agg.ward(victim, nb);
            if (best == kNone || d < best_d) {
                best = nb;
                best_d = d;
            }
        }
        agg.merge(victim, best, best_d);
    }
}

// Unconstrained Ward over the surviving clusters: globally closest pair,
// Lance-Williams distance updates, priority queue with lazy invalidation.
void run_ward_phase(Agglomeration& agg) {
    std::vector<uint32_t> active = agg.active_ids();
    if (active.size() < 2) return;

    std::unordered_map<uint64_t, double> dist;
    dist.reserve(active.size() * active.size() / 2);
    using Entry = std::tuple<double, uint32_t, uint32_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
    for (std::size_t i = 0; i < active.size(); ++i) {
        for (std::size_t j = i + 1; j < active.size(); ++j) {
            double d = agg.ward(active[i], active[j]);
            dist[pair_key(active[i], active[j])] = d;
            heap.emplace(d, active[i], active[j]);
        }
    }

    while (active.size() > 1) {
        auto [d, a, b] = heap.top();
        heap.pop();
        if (!agg.clusters[a].active || !agg.clusters[b].active) continue;
        const uint32_t n_a = agg.clusters[a].count;
        const uint32_t n_b = agg.clusters[b].count;
        uint32_t m = agg.merge(a, b, d);
        std::erase(active, a);
        std::erase(active, b);
        for (uint32_t k : active) {
            double d_ak = dist.at(pair_key(a, k));
            double d_bk = dist.at(pair_key(b, k));
            double d_mk =
                lance_williams_update(d_ak, d_bk, d, n_a, n_b, agg.clusters[k].count);
            dist[pair_key(m, k)] = d_mk;
            heap.emplace(d_mk, std::min(m, k), std::max(m, k));
            dist.erase(pair_key(a, k));
            dist.erase(pair_key(b, k));
        }
        active.push_back(m);
    }
}

void check_inputs(const ConnectivityMatrix& features, const AdjacencyGraph& graph,
                  const std::vector<double>& areas, bool allow_disconnected) {
    if (features.space != Space::Logit)
        throw format_error("clustering requires logit-space features");
    if (features.n_seeds == 0)
        throw parameter_error("clustering requires at least one seed");
    if (graph.n_vertices() != features.n_seeds)
        throw parameter_error("adjacency graph has " +
                              std::to_string(graph.n_vertices()) +
                              " vertices, features have " +
                              std::to_string(features.n_seeds) + " seeds");
    if (areas.size() != features.n_seeds)
        throw parameter_error("area vector length " + std::to_string(areas.size()) +
                              " does not match seed count " +
                              std::to_string(features.n_seeds));
    if (!allow_disconnected && !is_connected(graph))
        throw constraint_error(
            "adjacency graph is disconnected; pass the permissive flag to cluster anyway");
}

Parcellation labels_from_merges(const std::vector<MergeRecord>& merges,
                                uint32_t n_leaves, std::size_t n_applied) {
    // Union-find over node ids, path-halving.
    std::vector<uint32_t> parent(n_leaves + n_applied);
    for (uint32_t i = 0; i < parent.size(); ++i) parent[i] = i;
    auto find = [&](uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (std::size_t i = 0; i < n_applied; ++i) {
        uint32_t m = n_leaves + static_cast<uint32_t>(i);
        parent[find(merges[i].left)] = m;
        parent[find(merges[i].right)] = m;
    }
    std::vector<uint32_t> roots(n_leaves);
    for (uint32_t v = 0; v < n_leaves; ++v) roots[v] = find(v);
    return make_parcellation(roots);
}

} // namespace

Parcellation make_parcellation(const std::vector<uint32_t>& raw_labels) {
    Parcellation p;
    p.labels.resize(raw_labels.size());
    std::unordered_map<uint32_t, uint32_t> remap;
    for (std::size_t i = 0; i < raw_labels.size(); ++i) {
        auto [it, inserted] =
            remap.emplace(raw_labels[i], static_cast<uint32_t>(remap.size()));
        p.labels[i] = it->second;
    }
    p.n_parcels = static_cast<uint32_t>(remap.size());
    return p;
}

double ward_distance(std::span<const double> centroid_a, std::size_t size_a,
                     std::span<const double> centroid_b, std::size_t size_b) {
    if (centroid_a.size() != centroid_b.size())
        throw parameter_error("centroid dimension mismatch: " +
                              std::to_string(centroid_a.size()) + " vs " +
                              std::to_string(centroid_b.size()));
    double sq = 0.0;
    for (std::size_t i = 0; i < centroid_a.size(); ++i) {
        double diff = centroid_a[i] - centroid_b[i];
        sq += diff * diff;
    }
    double na = static_cast<double>(size_a), nb = static_cast<double>(size_b);
    return na * nb / (na + nb) * sq;
}

double lance_williams_update(double d_ak, double d_bk, double d_ab,
                             std::size_t n_a, std::size_t n_b, std::size_t n_k) {
    double na = static_cast<double>(n_a), nb = static_cast<double>(n_b),
           nk = static_cast<double>(n_k);
    return ((na + nk) * d_ak + (nb + nk) * d_bk - nk * d_ab) / (na + nb + nk);
}

Dendrogram build_dendrogram(const ConnectivityMatrix& features,
                            const AdjacencyGraph& graph,
                            const std::vector<double>& areas,
                            const BuildOptions& options) {
    check_inputs(features, graph, areas, options.allow_disconnected);
    Agglomeration agg(features, graph, areas);
    run_size_phase(agg, options.min_area);
    Dendrogram d;
    d.n_leaves = agg.n_leaves;
    d.n_size_constrained = agg.merges.size();
    run_ward_phase(agg);
    d.merges = std::move(agg.merges);
    return d;
}

SizeConstraintResult enforce_min_size(const ConnectivityMatrix& features,
                                      const AdjacencyGraph& graph,
                                      const std::vector<double>& areas,
                                      double min_area, bool allow_disconnected) {
    check_inputs(features, graph, areas, allow_disconnected);
    Agglomeration agg(features, graph, areas);
    run_size_phase(agg, min_area);
    SizeConstraintResult result;
    result.clusters = labels_from_merges(agg.merges, agg.n_leaves, agg.merges.size());
    result.merges = std::move(agg.merges);
    return result;
}

Parcellation cut_by_count(const Dendrogram& d, uint32_t k) {
    if (k < 1 || k > d.n_leaves)
        throw parameter_error("cut granularity " + std::to_string(k) +
                              " out of range [1," + std::to_string(d.n_leaves) + "]");
    std::size_t n_applied = d.n_leaves - k;
    if (n_applied > d.merges.size())
        throw parameter_error("dendrogram has only " + std::to_string(d.merges.size()) +
                              " merges; cannot cut at k=" + std::to_string(k));
    return labels_from_merges(d.merges, d.n_leaves, n_applied);
}

Parcellation cut_by_height(const Dendrogram& d, double h) {
    std::size_t n_applied = 0;
    while (n_applied < d.merges.size() && d.merges[n_applied].height <= h) ++n_applied;
    return labels_from_merges(d.merges, d.n_leaves, n_applied);
}

std::vector<double> parcel_fingerprint(const ConnectivityMatrix& features,
                                       const Parcellation& p, uint32_t label) {
    if (features.space != Space::Logit)
        throw format_error("parcel_fingerprint requires logit-space features");
    if (p.labels.size() != features.n_seeds)
        throw parameter_error("parcellation covers " + std::to_string(p.labels.size()) +
                              " seeds, features have " +
                              std::to_string(features.n_seeds));
    if (label >= p.n_parcels)
        throw parameter_error("unknown parcel label " + std::to_string(label));
    std::vector<long double> acc(features.n_targets, 0.0L);
    std::size_t count = 0;
    for (std::size_t v = 0; v < p.labels.size(); ++v) {
        if (p.labels[v] != label) continue;
        const double* row = features.row(v);
        for (std::size_t t = 0; t < features.n_targets; ++t) acc[t] += row[t];
        ++count;
    }
    std::vector<double> fingerprint(features.n_targets);
    for (std::size_t t = 0; t < features.n_targets; ++t)
        fingerprint[t] = logistic(static_cast<double>(acc[t] / count));
    return fingerprint;
}

} // namespace parcel
