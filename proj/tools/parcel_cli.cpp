// Command-line front end for the parcellation pipeline: clustering of
// logit-transformed connectivity matrices on a surface mesh, granularity
// cuts, fingerprints, ARI scoring, chance baselines and synthetic cohorts.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "parcel/baselines.hpp"
#include "parcel/cluster.hpp"
#include "parcel/connectivity.hpp"
#include "parcel/errors.hpp"
#include "parcel/io.hpp"
#include "parcel/mesh.hpp"
#include "parcel/metrics.hpp"
#include "parcel/rng.hpp"
#include "parcel/synth.hpp"

namespace fs = std::filesystem;
using namespace parcel;

namespace {

std::vector<uint32_t> parse_k_list(const std::string& list) {
    std::vector<uint32_t> ks;
    std::string token;
    std::istringstream in(list);
    while (std::getline(in, token, ',')) {
        if (token.empty()) continue;
        try {
            ks.push_back(static_cast<uint32_t>(std::stoul(token)));
        } catch (const std::exception&) {
            throw parameter_error("invalid granularity '" + token + "' in --k list");
        }
    }
    return ks;
}

// CMAT carries its own space tag; CSV needs the --space override.
ConnectivityMatrix load_matrix(const std::string& path, const std::string& csv_space) {
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".cmat")
        return read_cmat(path);
    if (csv_space == "probability") return read_matrix_csv(path, Space::Probability);
    if (csv_space == "logit") return read_matrix_csv(path, Space::Logit);
    throw parameter_error("CSV matrices carry no space tag; pass --space "
                          "probability|logit for " + path);
}

ConnectivityMatrix to_logit(ConnectivityMatrix m, double clamp_eps) {
    if (m.space == Space::Logit) return m;
    return logit_transform(m, clamp_eps);
}

ConnectivityMatrix mask_rows(const ConnectivityMatrix& m,
                             const std::vector<uint32_t>& kept) {
    ConnectivityMatrix out = ConnectivityMatrix::zeros(kept.size(), m.n_targets, m.space);
    for (std::size_t r = 0; r < kept.size(); ++r)
        std::copy(m.row(kept[r]), m.row(kept[r]) + m.n_targets, out.row(r));
    return out;
}

bool is_planar(const SurfaceMesh& mesh) {
    for (const auto& p : mesh.vertex_positions)
        if (p[2] != mesh.vertex_positions[0][2]) return false;
    return true;
}

struct PipelineConfig {
    std::string mesh_path;
    std::vector<std::string> matrix_paths;
    std::string mask_path;
    std::string csv_space;
    double clamp_eps = 1e-4;
    double min_area = 3.0;
    std::string k_list;
    std::string area_mode = "auto"; // area | count | auto
    std::string out_dir = ".";
};

// Shared core of parcellate/groupwise: mask, transform, (average,) cluster,
// write dendrogram and requested cuts.
int run_pipeline(const PipelineConfig& config, bool groupwise) {
    SurfaceMesh mesh = read_off(config.mesh_path);

    std::vector<ConnectivityMatrix> logits;
    for (const auto& path : config.matrix_paths) {
        ConnectivityMatrix m = load_matrix(path, config.csv_space);
        if (m.n_seeds != mesh.n_vertices())
            throw parameter_error(path + ": matrix has " + std::to_string(m.n_seeds) +
                                  " seed rows, mesh has " +
                                  std::to_string(mesh.n_vertices()) + " vertices");
        logits.push_back(to_logit(std::move(m), config.clamp_eps));
    }

    std::vector<uint32_t> kept;
    if (!config.mask_path.empty()) {
        VertexMask mask = read_mask(config.mask_path, mesh.n_vertices());
        SubmeshResult sub = induced_submesh(mesh, mask);
        kept = sub.new_to_old;
        mesh = std::move(sub.mesh);
        for (auto& m : logits) m = mask_rows(m, kept);
    }

    ConnectivityMatrix features =
        groupwise ? groupwise_average(logits) : std::move(logits.front());

    AdjacencyGraph graph = build_adjacency(mesh);
    std::vector<double> areas;
    bool count_mode = config.area_mode == "count" ||
                      (config.area_mode == "auto" && is_planar(mesh));
    if (count_mode) {
        if (config.area_mode == "auto")
            std::cerr << "warning: planar synthetic mesh detected; interpreting"
                         " --min-area in vertex-count units\n";
        areas.assign(mesh.n_vertices(), 1.0);
    } else {
        areas = vertex_areas(mesh);
    }

    BuildOptions options;
    options.min_area = config.min_area;
    Dendrogram d = build_dendrogram(features, graph, areas, options);

    fs::create_directories(config.out_dir);
    fs::path out(config.out_dir);
    if (groupwise) write_cmat(features, (out / "groupwise_mean.cmat").string());
    write_dendrogram_csv(d, (out / "dendrogram.csv").string());
    for (uint32_t k : parse_k_list(config.k_list))
        write_parcellation_csv(cut_by_count(d, k),
                               (out / ("parcellation_k" + std::to_string(k) + ".csv"))
                                   .string());
    return 0;
}

std::string manifest_text(const GroundTruthModel& model, uint64_t seed) {
    std::ostringstream out;
    out << "k=" << model.partition.n_parcels << '\n'
        << "n_targets=" << model.n_targets() << '\n'
        << "sigma_c=" << format_full(model.sigma_c) << '\n'
        << "sigma_s=" << format_full(model.sigma_s) << '\n'
        << "n_subjects=" << model.n_subjects << '\n'
        << "streamlines_per_seed="
        << (model.streamlines_per_seed ? std::to_string(*model.streamlines_per_seed)
                                       : std::string("none"))
        << '\n'
        << "seed=" << seed << '\n'
        << "eps_c=per-seed-shared\n"
        << "eps_s=per-subject-seed\n";
    return out.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Connectivity-driven surface parcellation toolkit"};
    app.require_subcommand(1);

    PipelineConfig config;
    uint64_t seed = 0;

    auto add_matrix_opts = [&](CLI::App* cmd, bool repeatable) {
        cmd->add_option("--mesh", config.mesh_path, "surface mesh (OFF)")->required();
        auto* m = cmd->add_option("--matrix", config.matrix_paths,
                                  "connectivity matrix (.cmat or CSV)");
        m->required();
        if (!repeatable) m->expected(1);
        cmd->add_option("--mask", config.mask_path, "vertex mask file (0/1 per line)");
        cmd->add_option("--space", config.csv_space,
                        "space of CSV matrices: probability|logit");
        cmd->add_option("--clamp-eps", config.clamp_eps,
                        "probability clamp before the logit transform");
        cmd->add_option("--min-area", config.min_area,
                        "minimum cluster size (mm^2, or vertices in count mode)");
        cmd->add_option("--area-mode", config.area_mode,
                        "cluster size units: area|count|auto")
            ->check(CLI::IsMember({"area", "count", "auto"}));
        cmd->add_option("--k", config.k_list, "comma-separated granularities to cut");
        cmd->add_option("--out", config.out_dir, "output directory")->required();
    };

    auto* cmd_parcellate =
        app.add_subcommand("parcellate", "cluster one subject's tractograms");
    add_matrix_opts(cmd_parcellate, false);

    auto* cmd_groupwise = app.add_subcommand(
        "groupwise", "average subjects in logit space, then cluster");
    add_matrix_opts(cmd_groupwise, true);

    std::string dendro_path, parc_path_a, parc_path_b, out_file, mode = "homogeneous";
    std::vector<std::string> dendro_paths;
    uint32_t trials = 1000, initial_parcels = 300, label = 0;

    auto* cmd_cut = app.add_subcommand("cut", "extract parcellations from a dendrogram");
    cmd_cut->add_option("--dendrogram", dendro_path, "dendrogram CSV")->required();
    cmd_cut->add_option("--k", config.k_list, "comma-separated granularities")
        ->required();
    cmd_cut->add_option("--out", config.out_dir, "output directory")->required();

    auto* cmd_fingerprint =
        app.add_subcommand("fingerprint", "connection-probability profile of a parcel");
    cmd_fingerprint->add_option("--matrix", config.matrix_paths, "connectivity matrix")
        ->required()
        ->expected(1);
    cmd_fingerprint->add_option("--parcellation", parc_path_a, "parcellation CSV")
        ->required();
    cmd_fingerprint->add_option("--label", label, "parcel label")->required();
    cmd_fingerprint->add_option("--space", config.csv_space,
                                "space of CSV matrices: probability|logit");
    cmd_fingerprint->add_option("--clamp-eps", config.clamp_eps, "probability clamp");
    cmd_fingerprint->add_option("--out", out_file,
                                "output CSV (one row); stdout when omitted");

    auto* cmd_ari = app.add_subcommand("ari", "adjusted Rand index of two parcellations");
    cmd_ari->add_option("first", parc_path_a, "parcellation CSV")->required();
    cmd_ari->add_option("second", parc_path_b, "parcellation CSV")->required();

    auto* cmd_consistency =
        app.add_subcommand("consistency", "pairwise ARI of dendrogram cuts per k");
    cmd_consistency->add_option("--dendrogram", dendro_paths, "dendrogram CSVs")
        ->required();
    cmd_consistency->add_option("--k", config.k_list, "comma-separated granularities")
        ->required();
    cmd_consistency->add_option("--out", out_file, "output CSV")->required();

    auto* cmd_baseline =
        app.add_subcommand("baseline", "chance-level ARI of random parcellations");
    cmd_baseline->add_option("--mesh", config.mesh_path, "surface mesh (OFF)")
        ->required();
    cmd_baseline->add_option("--mode", mode, "homogeneous|hierarchical")
        ->check(CLI::IsMember({"homogeneous", "hierarchical"}));
    cmd_baseline->add_option("--trials", trials, "random parcellations per k");
    cmd_baseline->add_option("--initial-parcels", initial_parcels,
                             "leaves of the hierarchical baseline");
    cmd_baseline->add_option("--k", config.k_list, "comma-separated granularities")
        ->required();
    cmd_baseline->add_option("--seed", seed, "RNG seed");
    cmd_baseline->add_option("--out", out_file, "output CSV")->required();

    uint32_t rows = 20, cols = 20, synth_k = 6, n_targets = 50, n_subjects = 1;
    double spacing = 1.0, separation = 8.0, sigma_c = 0.0, sigma_s = 0.0;
    uint32_t streamlines = 0;
    auto* cmd_synth =
        app.add_subcommand("synth", "sample a ground-truth cohort on a grid mesh");
    cmd_synth->add_option("--rows", rows, "grid rows");
    cmd_synth->add_option("--cols", cols, "grid columns");
    cmd_synth->add_option("--spacing", spacing, "grid spacing (mm)");
    cmd_synth->add_option("--clusters", synth_k, "planted cluster count");
    cmd_synth->add_option("--targets", n_targets, "fingerprint length");
    cmd_synth->add_option("--separation", separation,
                          "minimum fingerprint distance (logit units)");
    cmd_synth->add_option("--sigma-c", sigma_c, "intra-cluster std (logit units)");
    cmd_synth->add_option("--sigma-s", sigma_s, "across-subject std (logit units)");
    cmd_synth->add_option("--subjects", n_subjects, "cohort size");
    cmd_synth->add_option("--streamlines", streamlines,
                          "Bernoulli trials per seed (0 = exact probabilities)");
    cmd_synth->add_option("--seed", seed, "RNG seed");
    cmd_synth->add_option("--out", config.out_dir, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_parcellate->parsed()) return run_pipeline(config, false);
        if (cmd_groupwise->parsed()) return run_pipeline(config, true);

        if (cmd_cut->parsed()) {
            Dendrogram d = read_dendrogram_csv(dendro_path);
            fs::create_directories(config.out_dir);
            for (uint32_t k : parse_k_list(config.k_list))
                write_parcellation_csv(
                    cut_by_count(d, k),
                    (fs::path(config.out_dir) /
                     ("parcellation_k" + std::to_string(k) + ".csv"))
                        .string());
            return 0;
        }

        if (cmd_fingerprint->parsed()) {
            ConnectivityMatrix features = to_logit(
                load_matrix(config.matrix_paths.front(), config.csv_space),
                config.clamp_eps);
            Parcellation p = read_parcellation_csv(parc_path_a);
            auto fp = parcel_fingerprint(features, p, label);
            std::ostringstream line;
            for (std::size_t t = 0; t < fp.size(); ++t)
                line << (t ? "," : "") << format_full(fp[t]);
            line << '\n';
            if (out_file.empty()) {
                std::cout << line.str();
            } else {
                std::ofstream out(out_file);
                if (!out) throw io_error("cannot open " + out_file + " for writing");
                out << line.str();
            }
            return 0;
        }

        if (cmd_ari->parsed()) {
            Parcellation a = read_parcellation_csv(parc_path_a);
            Parcellation b = read_parcellation_csv(parc_path_b);
            if (a.labels.size() != b.labels.size())
                throw parameter_error("parcellations cover different seed counts: " +
                                      std::to_string(a.labels.size()) + " vs " +
                                      std::to_string(b.labels.size()));
            std::printf("%.6f\n", adjusted_rand_index(a, b));
            return 0;
        }

        if (cmd_consistency->parsed()) {
            std::vector<Dendrogram> dendros;
            for (const auto& path : dendro_paths)
                dendros.push_back(read_dendrogram_csv(path));
            write_consistency_csv(
                consistency_curve(dendros, parse_k_list(config.k_list)), out_file);
            return 0;
        }

        if (cmd_baseline->parsed()) {
            SurfaceMesh mesh = read_off(config.mesh_path);
            BaselineOptions options;
            options.mode = mode == "homogeneous" ? BaselineMode::Homogeneous
                                                 : BaselineMode::Hierarchical;
            options.n_trials = trials;
            options.initial_parcels = initial_parcels;
            options.seed = seed;
            write_baseline_csv(
                baseline_curve(build_adjacency(mesh), parse_k_list(config.k_list),
                               options),
                out_file);
            return 0;
        }

        if (cmd_synth->parsed()) {
            SurfaceMesh mesh = grid_mesh(rows, cols, spacing);
            GroundTruthModel model =
                planted_partition(mesh, synth_k, n_targets, separation, seed);
            model.sigma_c = sigma_c;
            model.sigma_s = sigma_s;
            model.n_subjects = n_subjects;
            if (streamlines > 0) model.streamlines_per_seed = streamlines;
            SyntheticCohort cohort = sample_cohort(model, derive_seed(seed, 0xC0));

            fs::create_directories(config.out_dir);
            fs::path out(config.out_dir);
            write_off(mesh, (out / "mesh.off").string());
            {
                std::ofstream manifest(out / "manifest.txt");
                manifest << manifest_text(model, seed);
            }
            write_parcellation_csv(model.partition,
                                   (out / "truth_partition.csv").string());
            ConnectivityMatrix betas = ConnectivityMatrix::zeros(
                model.betas.size(), model.n_targets(), Space::Logit);
            for (std::size_t c = 0; c < model.betas.size(); ++c)
                std::copy(model.betas[c].begin(), model.betas[c].end(), betas.row(c));
            write_cmat(betas, (out / "betas.cmat").string());
            for (uint32_t s = 0; s < model.n_subjects; ++s) {
                char name[32];
                std::snprintf(name, sizeof(name), "subject_%03u.cmat", s);
                const ConnectivityMatrix& m = streamlines > 0
                                                  ? cohort.subject_observed[s]
                                                  : cohort.subject_logits[s];
                write_cmat(m, (out / name).string());
            }
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
