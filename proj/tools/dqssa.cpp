// Command-line front end: benchmark grids and single-stage utilities.

#include "dqssa/bench.hpp"
#include "dqssa/centrality.hpp"
#include "dqssa/community.hpp"
#include "dqssa/diffusion.hpp"
#include "dqssa/simd.hpp"
#include "dqssa/swarm.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace dqssa;

std::vector<std::string> split_list(const std::vector<std::string> &items) {
    std::vector<std::string> out;
    for (const auto &item : items) {
        std::stringstream ss(item);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty())
                out.push_back(tok);
    }
    return out;
}

DatasetDescriptor dataset_from_arg(const std::string &arg, int id_base) {
    DatasetDescriptor d;
    auto eq = arg.find('=');
    if (eq != std::string::npos) {
        d.name = arg.substr(0, eq);
        d.path = arg.substr(eq + 1);
    } else {
        d.path = arg;
        d.name = d.path.stem().string();
    }
    d.id_base = id_base;
    return d;
}

struct GraphInput {
    std::string path;
    int id_base = 1;

    void add(CLI::App *cmd) {
        cmd->add_option("graph", path, "Edge-list file")->required()->check(CLI::ExistingFile);
        cmd->add_option("--id-base", id_base, "Smallest node id in the file (0 or 1)")
            ->check(CLI::IsMember({0, 1}));
    }
    Graph load() const {
        DatasetDescriptor d;
        d.path = path;
        d.id_base = id_base;
        return load_edge_list(d);
    }
};

std::ostream &output_or_stdout(const std::string &path, std::ofstream &file) {
    if (path.empty() || path == "-")
        return std::cout;
    file.open(path);
    if (!file)
        throw std::runtime_error("cannot write " + path);
    return file;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Community-guided swarm influence maximization benchmark"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(dqssa::kVersion));

    // bench
    auto *bench = app.add_subcommand("bench", "Run an algorithm x dataset x fraction grid");
    std::string config_path, out_dir;
    std::vector<std::string> datasets, algorithms, fractions;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> reps, simulations;
    std::optional<unsigned> workers;
    int bench_id_base = 1;
    bench->add_option("--config", config_path, "JSON experiment config")
        ->check(CLI::ExistingFile);
    bench->add_option("--dataset", datasets, "Edge list, as path or name=path (repeatable)");
    bench->add_option("--algorithm", algorithms,
                      "DQSSA DQPSO DQBA DPSO DBA HI GLR PR ENC (repeatable or comma list)");
    bench->add_option("--fractions", fractions, "Spreader fractions, comma separated");
    bench->add_option("--seed", seed, "Master seed");
    bench->add_option("--out", out_dir, "Output directory");
    bench->add_option("--reps", reps, "Repetitions per cell");
    bench->add_option("--simulations", simulations, "IC simulations per FIS estimate");
    bench->add_option("--workers", workers, "Concurrent cells");
    bench->add_option("--id-base", bench_id_base, "Id base for --dataset files")
        ->check(CLI::IsMember({0, 1}));

    // louvain
    auto *louv = app.add_subcommand("louvain", "Community detection; writes 'original_id label'");
    GraphInput louv_in;
    louv_in.add(louv);
    double resolution = 1.0;
    std::uint64_t louv_seed = 0;
    std::string louv_out;
    louv->add_option("--resolution", resolution);
    louv->add_option("--seed", louv_seed);
    louv->add_option("--out", louv_out, "Partition dump (default stdout)");

    // scores
    auto *scores_cmd = app.add_subcommand("scores", "Centrality scores as 'original_id,score'");
    GraphInput scores_in;
    scores_in.add(scores_cmd);
    std::string method = "PR", scores_out;
    double glr_gamma = 2.0;
    scores_cmd->add_option("--method", method)->check(CLI::IsMember({"PR", "HI", "ENC", "GLR"}));
    scores_cmd->add_option("--gamma", glr_gamma, "GLR bridge weight");
    scores_cmd->add_option("--out", scores_out);

    // optimize
    auto *opt = app.add_subcommand("optimize", "Single swarm run with trace export");
    GraphInput opt_in;
    opt_in.add(opt);
    std::string opt_alg = "DQSSA", trace_out;
    double opt_fraction = 0.05, opt_p = 0.1, pool_factor = 5.0;
    std::optional<std::size_t> opt_k;
    SwarmConfig sc;
    std::size_t opt_sims = 10000;
    opt->add_option("--algorithm", opt_alg)
        ->check(CLI::IsMember({"DQSSA", "DQPSO", "DQBA", "DPSO", "DBA"}));
    opt->add_option("--k", opt_k, "Seed-set size (overrides --fraction)");
    opt->add_option("--fraction", opt_fraction);
    opt->add_option("--p", opt_p, "Infection probability");
    opt->add_option("--population", sc.population);
    opt->add_option("--iterations", sc.iterations);
    opt->add_option("--sigma", sc.sigma);
    opt->add_option("--pool-factor", pool_factor);
    opt->add_option("--seed", sc.rng_seed);
    opt->add_option("--simulations", opt_sims);
    opt->add_option("--trace", trace_out, "CSV: iteration,best_lie,elapsed_ms");

    // fis
    auto *fis_cmd = app.add_subcommand("fis", "Monte Carlo FIS of a seed set");
    GraphInput fis_in;
    fis_in.add(fis_cmd);
    std::vector<std::int64_t> seed_ids;
    DiffusionConfig dc;
    fis_cmd->add_option("--seeds", seed_ids, "Original node ids")->required()->delimiter(',');
    fis_cmd->add_option("--p", dc.p);
    fis_cmd->add_option("--simulations", dc.num_simulations);
    fis_cmd->add_option("--seed", dc.rng_seed);
    fis_cmd->add_option("--threads", dc.threads);

    // convert
    auto *conv = app.add_subcommand("convert", "Write the canonical 0-based edge list");
    GraphInput conv_in;
    conv_in.add(conv);
    std::string conv_out;
    conv->add_option("--out", conv_out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*bench) {
            ExperimentConfig cfg;
            if (!config_path.empty())
                cfg = load_experiment_config(config_path);
            for (const auto &d : datasets)
                cfg.datasets.push_back(dataset_from_arg(d, bench_id_base));
            if (!algorithms.empty())
                cfg.algorithms = split_list(algorithms);
            if (!fractions.empty()) {
                cfg.spreader_fractions.clear();
                for (const auto &f : split_list(fractions))
                    cfg.spreader_fractions.push_back(std::stod(f));
            }
            if (seed)
                cfg.seed = *seed;
            if (reps)
                cfg.repetitions = *reps;
            if (simulations)
                cfg.num_simulations = *simulations;
            if (workers)
                cfg.workers = *workers;
            if (!out_dir.empty())
                cfg.output_dir = out_dir;
            cfg.validate();

            std::filesystem::create_directories(cfg.output_dir);
            write_manifest(cfg, cfg.output_dir);
            ResultsFile results(cfg.output_dir / "results.csv");
            std::size_t errors = 0;
            auto rows = run_experiment(cfg, [&](const ResultRow &row) {
                results(row);
                if (!row.ok()) {
                    ++errors;
                    std::cerr << "error: " << row.dataset << '/' << row.algorithm << ": "
                              << row.error << '\n';
                }
                std::cerr << row.dataset << ' ' << row.algorithm << " f=" << row.fraction
                          << " rep=" << row.repetition << " FIS=" << row.fis_mean
                          << " LIE=" << row.lie_value << " t=" << row.wall_clock_seconds << "s\n";
            });
            emit_tables(rows, cfg.algorithms, cfg.output_dir, false);
            std::cerr << rows.size() << " rows (" << errors << " errors) written to "
                      << cfg.output_dir << " [kernels: " << simd::kernels().name << "]\n";
            return errors == 0 ? 0 : 2;
        }
        if (*louv) {
            Graph g = louv_in.load();
            auto part = louvain(g, resolution, louv_seed);
            std::ofstream file;
            write_partition(g, part, output_or_stdout(louv_out, file));
            std::cerr << part.num_communities << " communities, modularity " << part.modularity
                      << '\n';
            return 0;
        }
        if (*scores_cmd) {
            Graph g = scores_in.load();
            ScoreVector s;
            switch (*parse_centrality(method)) {
            case CentralityMethod::PR: s = pagerank(g); break;
            case CentralityMethod::HI: s = h_index(g); break;
            case CentralityMethod::ENC: s = enc(g); break;
            case CentralityMethod::GLR: s = glr(g, louvain(g), glr_gamma); break;
            }
            std::ofstream file;
            write_scores_csv(g, s, output_or_stdout(scores_out, file));
            return 0;
        }
        if (*opt) {
            Graph g = opt_in.load();
            sc.algorithm = *parse_algorithm(opt_alg);
            sc.k = opt_k ? *opt_k : seeds_for_fraction(opt_fraction, g.num_nodes());
            sc.infection_probability = opt_p;
            auto part = louvain(g, 1.0, sc.rng_seed);
            auto pool = build_candidate_pool(g, part, sc.k, pool_factor);
            auto result = optimize(g, pool, sc);
            if (!trace_out.empty()) {
                std::ofstream file(trace_out);
                write_trace_csv(result.trace, file);
            }
            DiffusionConfig fc;
            fc.p = opt_p;
            fc.num_simulations = opt_sims;
            fc.rng_seed = sc.rng_seed;
            auto spread = fis(g, result.seeds, fc);
            std::cout << "algorithm " << opt_alg << "\nk " << sc.k << "\nseeds";
            for (auto v : result.seeds.nodes())
                std::cout << ' ' << g.original_id(v);
            std::cout << "\nlie " << result.fitness << "\nfis " << spread.fis_mean
                      << "\nevaluations " << result.evaluations << '\n';
            return 0;
        }
        if (*fis_cmd) {
            Graph g = fis_in.load();
            std::vector<NodeId> nodes;
            for (auto id : seed_ids) {
                auto ids = g.original_ids();
                auto it = std::lower_bound(ids.begin(), ids.end(), id);
                if (it == ids.end() || *it != id)
                    throw GraphError("unknown node id " + std::to_string(id));
                nodes.push_back(static_cast<NodeId>(it - ids.begin()));
            }
            auto result = fis(g, SeedSet(nodes), dc);
            std::cout << "fis_mean " << result.fis_mean << "\nfis_variance " << result.fis_variance
                      << "\nsamples " << result.samples << "\nelapsed_s "
                      << result.elapsed.count() << '\n';
            return 0;
        }
        if (*conv) {
            Graph g = conv_in.load();
            std::ofstream file;
            write_canonical_edge_list(g, output_or_stdout(conv_out, file));
            return 0;
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
