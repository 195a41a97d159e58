// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. argv[1] must be the path to the parcel CLI binary (used by the
// determinism criterion).
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "parcel/baselines.hpp"
#include "parcel/cluster.hpp"
#include "parcel/connectivity.hpp"
#include "parcel/io.hpp"
#include "parcel/mesh.hpp"
#include "parcel/metrics.hpp"
#include "parcel/rng.hpp"
#include "parcel/synth.hpp"

using namespace parcel;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass,
            const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion,
                name.c_str(), detail.c_str());
    if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// cut at k must refine cut at k-1 for every k.
bool hierarchy_holds(const Dendrogram& d) {
    Parcellation coarse = cut_by_count(d, 1);
    for (uint32_t k = 2; k <= d.n_leaves; ++k) {
        Parcellation fine = cut_by_count(d, k);
        std::vector<int64_t> owner(fine.n_parcels, -1);
        for (std::size_t v = 0; v < fine.labels.size(); ++v) {
            int64_t& o = owner[fine.labels[v]];
            if (o < 0) o = coarse.labels[v];
            if (o != coarse.labels[v]) return false;
        }
        coarse = std::move(fine);
    }
    return true;
}

struct CohortRun {
    double groupwise_ari = 0.0;
    double mean_single_ari = 0.0;
};

// Criterion 4/5 pipeline: binomial observations -> clamped logit ->
// groupwise mean -> Ward -> cut at the true k, for the groupwise matrix and
// each single subject.
CohortRun run_cohort(uint64_t seed, int* hierarchy_violations) {
    SurfaceMesh mesh = grid_mesh(20, 20, 1.0);
    AdjacencyGraph graph = build_adjacency(mesh);
    std::vector<double> areas(mesh.n_vertices(), 1.0);

    GroundTruthModel model = planted_partition(mesh, 6, 50, 8.0, derive_seed(seed, 1));
    model.sigma_c = 0.5;
    model.sigma_s = 2.0;
    model.n_subjects = 20;
    model.streamlines_per_seed = 5000;
    SyntheticCohort cohort = sample_cohort(model, derive_seed(seed, 2));

    const double clamp = default_clamp_eps(5000);
    std::vector<ConnectivityMatrix> logits;
    for (const auto& observed : cohort.subject_observed)
        logits.push_back(logit_transform(observed, clamp));

    CohortRun result;
    ConnectivityMatrix mean = groupwise_average(logits);
    Dendrogram d = build_dendrogram(mean, graph, areas, {});
    if (!hierarchy_holds(d)) ++*hierarchy_violations;
    result.groupwise_ari =
        adjusted_rand_index(cut_by_count(d, 6), model.partition);

    double sum = 0.0;
    for (const auto& subject : logits) {
        Dendrogram ds = build_dendrogram(subject, graph, areas, {});
        sum += adjusted_rand_index(cut_by_count(ds, 6), model.partition);
    }
    result.mean_single_ari = sum / static_cast<double>(logits.size());
    return result;
}

bool same_bytes(const fs::path& a, const fs::path& b) {
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    if (!fa || !fb) return false;
    std::ostringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    return sa.str() == sb.str();
}

int run_cmd(const std::string& cmd) { return std::system(cmd.c_str()); }

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <path-to-parcel-cli>\n";
        return 2;
    }
    const std::string cli = argv[1];
    int hierarchy_violations = 0;
    int hierarchy_checked = 0;

    // 1: Lance-Williams implementation vs naive recompute-everything Ward.
    {
        auto start = Clock::now();
        Rng rng(1001);
        std::uniform_int_distribution<std::size_t> n_pick(2, 64);
        std::uniform_int_distribution<std::size_t> d_pick(1, 16);
        int mismatches = 0;
        for (int trial = 0; trial < 200; ++trial) {
            std::size_t n = n_pick(rng), dim = d_pick(rng);
            auto features = oracles::random_features(n, dim, rng());
            Dendrogram fast = build_dendrogram(features, oracles::complete_graph(n),
                                               std::vector<double>(n, 1.0), {});
            Dendrogram naive = oracles::naive_ward(features);
            bool ok = fast.merges.size() == naive.merges.size();
            for (std::size_t i = 0; ok && i < fast.merges.size(); ++i) {
                const auto& f = fast.merges[i];
                const auto& o = naive.merges[i];
                double scale = std::max({std::abs(f.height), std::abs(o.height), 1e-30});
                ok = f.left == o.left && f.right == o.right &&
                     std::abs(f.height - o.height) <= 1e-9 * scale;
            }
            if (!ok) ++mismatches;
            ++hierarchy_checked;
            if (!hierarchy_holds(fast)) ++hierarchy_violations;
        }
        double elapsed = seconds_since(start);
        report(1, "Ward oracle equivalence", mismatches == 0 && elapsed < 10.0,
               std::to_string(mismatches) + " mismatches in 200 instances, " +
                   std::to_string(elapsed) + " s");
    }

    // 2: no dendrogram inversions in the unconstrained Ward phase.
    {
        Rng rng(2002);
        std::uniform_int_distribution<std::size_t> n_pick(2, 40);
        std::uniform_int_distribution<std::size_t> d_pick(1, 8);
        int inversions = 0;
        for (int trial = 0; trial < 1000; ++trial) {
            std::size_t n = n_pick(rng);
            auto features = oracles::random_features(n, d_pick(rng), rng());
            Dendrogram d = build_dendrogram(features, oracles::complete_graph(n),
                                            std::vector<double>(n, 1.0), {});
            for (std::size_t i = d.n_size_constrained + 1; i < d.merges.size(); ++i)
                if (d.merges[i].height < d.merges[i - 1].height) ++inversions;
            if (trial < 100) {
                ++hierarchy_checked;
                if (!hierarchy_holds(d)) ++hierarchy_violations;
            }
        }
        report(2, "no-inversion invariant", inversions == 0,
               std::to_string(inversions) + " violations in 1000 instances");
    }

    // 3: ARI against the brute-force pair-counting oracle + chance level.
    {
        Rng rng(3003);
        std::uniform_int_distribution<std::size_t> n_pick(2, 12);
        std::uniform_int_distribution<uint32_t> k_pick(1, 6);
        int mismatches = 0;
        for (int trial = 0; trial < 10000; ++trial) {
            std::size_t n = n_pick(rng);
            Parcellation p = oracles::random_partition(n, k_pick(rng), rng());
            Parcellation q = oracles::random_partition(n, k_pick(rng), rng());
            double fast = adjusted_rand_index(p, q);
            double slow = oracles::pair_counting_ari(p, q);
            if (std::abs(fast - slow) > 1e-12) ++mismatches;
            if (adjusted_rand_index(p, p) != 1.0) ++mismatches;
        }
        double sum = 0.0;
        for (int t = 0; t < 1000; ++t) {
            Parcellation p = oracles::random_partition(200, 5, rng());
            Parcellation q = oracles::random_partition(200, 5, rng());
            sum += adjusted_rand_index(p, q);
        }
        double mean = sum / 1000.0;
        bool pass = mismatches == 0 && std::abs(mean) < 0.02;
        report(3, "ARI correctness", pass,
               std::to_string(mismatches) + " oracle mismatches, random-labeling mean " +
                   std::to_string(mean));
    }

    // 4 + 5: planted-partition recovery and the groupwise benefit, 20 cohorts.
    {
        auto start = Clock::now();
        double ari_sum = 0.0;
        int groupwise_wins = 0;
        for (int cohort = 0; cohort < 20; ++cohort) {
            CohortRun run = run_cohort(4000 + cohort, &hierarchy_violations);
            ++hierarchy_checked;
            ari_sum += run.groupwise_ari;
            if (run.groupwise_ari >= run.mean_single_ari) ++groupwise_wins;
        }
        double mean_ari = ari_sum / 20.0;
        double elapsed = seconds_since(start);
        report(4, "planted-partition recovery", mean_ari >= 0.9 && elapsed < 120.0,
               "mean groupwise ARI " + std::to_string(mean_ari) + ", " +
                   std::to_string(elapsed) + " s");
        report(5, "groupwise benefit", groupwise_wins >= 18,
               "groupwise >= single-subject mean in " +
                   std::to_string(groupwise_wins) + "/20 cohorts");
    }

    // 6: consistency of disjoint sub-cohorts vs the 1000-trial chance baseline.
    {
        SurfaceMesh mesh = grid_mesh(20, 20, 1.0);
        AdjacencyGraph graph = build_adjacency(mesh);
        std::vector<double> areas(mesh.n_vertices(), 1.0);

        GroundTruthModel model = planted_partition(mesh, 6, 50, 8.0, 6001);
        model.sigma_c = 0.5;
        model.sigma_s = 2.0;
        model.n_subjects = 30; // split into 3 disjoint groups of 10
        model.streamlines_per_seed = 5000;
        SyntheticCohort cohort = sample_cohort(model, 6002);
        const double clamp = default_clamp_eps(5000);

        std::vector<Dendrogram> dendros;
        for (int group = 0; group < 3; ++group) {
            std::vector<ConnectivityMatrix> logits;
            for (int s = group * 10; s < (group + 1) * 10; ++s)
                logits.push_back(logit_transform(cohort.subject_observed[s], clamp));
            dendros.push_back(
                build_dendrogram(groupwise_average(logits), graph, areas, {}));
            ++hierarchy_checked;
            if (!hierarchy_holds(dendros.back())) ++hierarchy_violations;
        }

        std::vector<uint32_t> ks;
        for (uint32_t k = 2; k <= 12; ++k) ks.push_back(k);
        auto rows = consistency_curve(dendros, ks);

        BaselineOptions options;
        options.mode = BaselineMode::Homogeneous;
        options.n_trials = 1000;
        options.seed = 6003;
        auto baseline = baseline_curve(graph, ks, options);

        bool pass = true;
        double worst_margin = 1e30;
        for (const auto& row : rows) {
            const BaselineRow* base = nullptr;
            for (const auto& b : baseline)
                if (b.k == row.k) base = &b;
            double threshold = base->mean_ari + 3.0 * base->std_ari;
            worst_margin = std::min(worst_margin, row.ari - threshold);
            if (row.ari < threshold) pass = false;
        }
        report(6, "consistency exceeds chance by 3 std", pass,
               "worst margin over baseline mean+3std: " + std::to_string(worst_margin));
    }

    // 7: minimum-size phase yields connected clusters of area >= 3 mm^2.
    {
        Rng rng(7007);
        std::uniform_int_distribution<uint32_t> dim_pick(6, 14);
        int violations = 0;
        for (int trial = 0; trial < 50; ++trial) {
            SurfaceMesh mesh = grid_mesh(dim_pick(rng), dim_pick(rng), 1.0);
            AdjacencyGraph graph = build_adjacency(mesh);
            std::vector<double> areas = vertex_areas(mesh);
            auto features =
                oracles::random_features(mesh.n_vertices(), 6, rng());
            auto result = enforce_min_size(features, graph, areas, 3.0);
            std::vector<double> parcel_area(result.clusters.n_parcels, 0.0);
            for (std::size_t v = 0; v < areas.size(); ++v)
                parcel_area[result.clusters.labels[v]] += areas[v];
            for (double a : parcel_area)
                if (a < 3.0) ++violations;
            // Connectivity by traversal.
            for (uint32_t label = 0; label < result.clusters.n_parcels; ++label) {
                std::vector<uint32_t> members;
                for (uint32_t v = 0; v < graph.n_vertices(); ++v)
                    if (result.clusters.labels[v] == label) members.push_back(v);
                std::vector<bool> seen(graph.n_vertices(), false);
                std::vector<uint32_t> stack{members[0]};
                seen[members[0]] = true;
                std::size_t reached = 0;
                while (!stack.empty()) {
                    uint32_t v = stack.back();
                    stack.pop_back();
                    ++reached;
                    for (uint32_t w : graph.neighbors[v])
                        if (!seen[w] && result.clusters.labels[w] == label) {
                            seen[w] = true;
                            stack.push_back(w);
                        }
                }
                if (reached != members.size()) ++violations;
            }
        }
        report(7, "minimum-size constraint", violations == 0,
               std::to_string(violations) + " violations in 50 instances");
    }

    // 8: hierarchy property over every dendrogram produced above.
    report(8, "hierarchy property", hierarchy_violations == 0,
           std::to_string(hierarchy_violations) + " violations in " +
               std::to_string(hierarchy_checked) + " dendrograms");

    // 9: byte-identical CLI reruns under identical configs and seeds.
    {
        fs::path work = fs::temp_directory_path() / "parcel_acceptance_determinism";
        fs::remove_all(work);
        fs::create_directories(work);
        auto dir = [&](const std::string& name) { return (work / name).string(); };
        bool pass = true;
        std::string synth_args =
            " synth --rows 8 --cols 8 --clusters 3 --targets 12 --separation 6"
            " --sigma-c 0.3 --sigma-s 1.0 --subjects 3 --streamlines 2000 --seed 99"
            " --out ";
        pass &= run_cmd(cli + synth_args + dir("s1")) == 0;
        pass &= run_cmd(cli + synth_args + dir("s2")) == 0;
        std::string gw_args = " groupwise --mesh " + dir("s1") + "/mesh.off";
        for (int s = 0; s < 3; ++s)
            gw_args += " --matrix " + dir("s1") +
                       "/subject_00" + std::to_string(s) + ".cmat";
        gw_args += " --min-area 0 --k 3,5 --out ";
        pass &= run_cmd(cli + gw_args + dir("g1") + " 2>/dev/null") == 0;
        pass &= run_cmd(cli + gw_args + dir("g2") + " 2>/dev/null") == 0;
        std::string base_args = " baseline --mesh " + dir("s1") +
                                "/mesh.off --mode hierarchical --initial-parcels 20"
                                " --trials 10 --k 4,8 --seed 5 --out ";
        pass &= run_cmd(cli + base_args + dir("b1.csv")) == 0;
        pass &= run_cmd(cli + base_args + dir("b2.csv")) == 0;

        if (pass) {
            for (const auto& entry : fs::directory_iterator(work / "s1"))
                pass &= same_bytes(entry.path(), work / "s2" / entry.path().filename());
            for (const auto& entry : fs::directory_iterator(work / "g1"))
                pass &= same_bytes(entry.path(), work / "g2" / entry.path().filename());
            pass &= same_bytes(work / "b1.csv", work / "b2.csv");
        }
        fs::remove_all(work);
        report(9, "CLI determinism", pass,
               pass ? "all rerun outputs byte-identical" : "outputs differ or command failed");
    }

    std::printf("%d of 9 criteria passed\n", 9 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
