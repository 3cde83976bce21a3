#include "support.hpp"

#include "dqssa/bench.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sstream>

using namespace dqssa;
using namespace testing;

namespace {

std::string edge_list_text(const Graph &g) {
    std::ostringstream out;
    for (auto [u, v] : g.edges())
        out << u + 1 << ' ' << v + 1 << '\n';
    return out.str();
}

ExperimentConfig small_config(const TempDir &dir) {
    ExperimentConfig cfg;
    DatasetDescriptor a, b;
    a.name = "alpha";
    a.path = dir.write("alpha.txt", edge_list_text(random_graph(40, 0.1, 1)));
    b.name = "beta";
    b.path = dir.write("beta.txt", edge_list_text(random_graph(30, 0.15, 2)));
    cfg.datasets = {a, b};
    cfg.algorithms = {"DQSSA", "DPSO", "PR", "HI"};
    cfg.spreader_fractions = {0.05, 0.1};
    cfg.repetitions = 2;
    cfg.num_simulations = 200;
    cfg.swarm.population = 6;
    cfg.swarm.iterations = 5;
    cfg.output_dir = dir.path / "out";
    return cfg;
}

std::vector<std::string> read_lines(const std::filesystem::path &p) {
    std::ifstream in(p);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);)
        lines.push_back(line);
    return lines;
}

} // namespace

TEST_CASE("seed count per fraction") {
    CHECK(seeds_for_fraction(0.01, 198) == 2);
    CHECK(seeds_for_fraction(0.05, 198) == 10);
    CHECK(seeds_for_fraction(0.001, 50) == 1);
    CHECK(seeds_for_fraction(0.5, 3) == 2);
}

TEST_CASE("selector names") {
    CHECK(all_selectors().size() == 9);
    for (const auto &s : all_selectors())
        CHECK(is_known_selector(s));
    CHECK_FALSE(is_known_selector("SSA"));
}

TEST_CASE("config validation") {
    ExperimentConfig cfg;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.datasets.push_back(DatasetDescriptor{});
    CHECK_NOTHROW(cfg.validate());
    cfg.spreader_fractions = {0.05, 0.01};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.spreader_fractions = {0.0};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.spreader_fractions = {0.01};
    cfg.algorithms = {"DQSSA", "SSA"};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("grid produces one row per cell in cell order, deterministically") {
    TempDir dir("grid");
    auto cfg = small_config(dir);
    std::vector<ResultRow> streamed;
    auto rows = run_experiment(cfg, [&](const ResultRow &r) { streamed.push_back(r); });
    REQUIRE(rows.size() == 2 * 4 * 2 * 2);
    CHECK(streamed.size() == rows.size());
    for (const auto &r : rows)
        CHECK(r.ok());
    CHECK(rows.front().dataset == "alpha");
    CHECK(rows.front().algorithm == "DQSSA");
    CHECK(rows.back().dataset == "beta");
    CHECK(rows.back().algorithm == "HI");
    CHECK(rows[0].k == 2);
    CHECK(rows[2].k == 4);

    cfg.workers = 3;
    auto parallel = run_experiment(cfg);
    REQUIRE(parallel.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(parallel[i].dataset == rows[i].dataset);
        CHECK(parallel[i].algorithm == rows[i].algorithm);
        CHECK(parallel[i].seed == rows[i].seed);
        CHECK(parallel[i].lie_value == rows[i].lie_value);
        CHECK(parallel[i].fis_mean == rows[i].fis_mean);
        CHECK(parallel[i].wall_clock_seconds > 0.0);
    }
    // Repetitions see distinct seeds.
    CHECK(rows[0].seed != rows[1].seed);
}

TEST_CASE("a missing dataset yields error rows and the rest still runs") {
    TempDir dir("missing");
    auto cfg = small_config(dir);
    DatasetDescriptor ghost;
    ghost.name = "ghost";
    ghost.path = dir.path / "ghost.txt";
    cfg.datasets.insert(cfg.datasets.begin() + 1, ghost);
    auto rows = run_experiment(cfg);
    std::size_t errors = 0, ok = 0;
    for (const auto &r : rows) {
        if (r.dataset == "ghost") {
            CHECK_FALSE(r.ok());
            ++errors;
        } else {
            CHECK(r.ok());
            ++ok;
        }
    }
    CHECK(errors == 16);
    CHECK(ok == 32);
}

TEST_CASE("results csv round trip and truncated tail") {
    TempDir dir("csv");
    ResultRow a{"d,1", "DQSSA", 0.05, 3, 0, 17, 4.5, 0.25, 0.01, 0.002, ""};
    ResultRow b{"d2", "PR", 0.01, 1, 1, 18, 1.0, 0.1, 0.0, 0.001, "bad \"thing\""};
    {
        ResultsFile f(dir.path / "results.csv");
        f(a);
        f(b);
    }
    auto back = read_results_csv(dir.path / "results.csv");
    REQUIRE(back.size() == 2);
    CHECK(back[0].dataset == "d,1");
    CHECK(back[0].lie_value == 4.5);
    CHECK(back[0].seed == 17);
    CHECK(back[0].ok());
    CHECK(back[1].error == "bad \"thing\"");

    std::ofstream(dir.path / "results.csv", std::ios::app) << "d3,PR,0.01,1,0,19,1.";
    CHECK(read_results_csv(dir.path / "results.csv").size() == 2);
}

TEST_CASE("summary tables") {
    TempDir dir("tables");
    std::vector<std::string> algs{"DQSSA", "DPSO", "DBA", "PR", "HI"};
    std::vector<ResultRow> rows;
    for (std::string d : {"a", "b", "c", "e"})
        for (const auto &alg : algs)
            for (double f : {0.01, 0.05})
                for (std::size_t r = 0; r < 2; ++r) {
                    ResultRow row;
                    row.dataset = d;
                    row.algorithm = alg;
                    row.fraction = f;
                    row.repetition = r;
                    row.fis_mean = f + 0.1 * static_cast<double>(r);
                    row.lie_value = 10.0 * f;
                    row.wall_clock_seconds = f == 0.05 ? 1.0 + static_cast<double>(r) : 100.0;
                    rows.push_back(row);
                }
    emit_tables(rows, algs, dir.path);

    auto table = read_lines(dir.path / "time_table.csv");
    REQUIRE(table.size() == 5);
    CHECK(table[0] == "dataset,DQSSA,DPSO,DBA,PR,HI");
    // Mean wall clock at the largest fraction only.
    CHECK(table[1] == "a,1.5,1.5,1.5,1.5,1.5");

    auto curve = read_lines(dir.path / "a" / "fis_curve.csv");
    REQUIRE(curve.size() == 3);
    CHECK(curve[0] == "fraction,DQSSA,DPSO,DBA,PR,HI");
    CHECK(curve[1] == "0.01,0.06,0.06,0.06,0.06,0.06");
    CHECK(read_lines(dir.path / "e" / "lie_curve.csv")[2] == "0.05,0.5,0.5,0.5,0.5,0.5");
    CHECK(read_results_csv(dir.path / "results.csv").size() == rows.size());
}

TEST_CASE("config file loading") {
    TempDir dir("config");
    dir.write("g.txt", "1 2\n2 3\n");
    auto path = dir.write("cfg.json", R"({
        // comments are allowed
        "datasets": [{"name": "tiny", "path": "g.txt", "id_base": 1}],
        "algorithms": ["DQSSA", "GLR"],
        "spreader_fractions": [0.1, 0.2],
        "repetitions": 3,
        "swarm": {"population": 8, "sigma": 0.2, "pso": {"inertia": 0.5}},
        "diffusion": {"simulations": 500},
        "seed": 7
    })");
    auto cfg = load_experiment_config(path);
    REQUIRE(cfg.datasets.size() == 1);
    CHECK(cfg.datasets[0].path == dir.path / "g.txt");
    CHECK(cfg.algorithms == std::vector<std::string>{"DQSSA", "GLR"});
    CHECK(cfg.repetitions == 3);
    CHECK(cfg.swarm.population == 8);
    CHECK(cfg.swarm.pso.inertia == 0.5);
    CHECK(cfg.num_simulations == 500);
    CHECK(cfg.seed == 7);
    CHECK(cfg.p == 0.1);

    auto round = nlohmann::json::parse(config_to_json(cfg));
    CHECK(round["swarm"]["sigma"] == 0.2);

    auto bad = dir.write("bad.json", R"({"swarm": {"populaton": 8}})");
    CHECK_THROWS_AS(load_experiment_config(bad), std::invalid_argument);
    CHECK_THROWS_AS(load_experiment_config(dir.path / "none.json"), std::invalid_argument);
}

TEST_CASE("manifest records version, config and seeds") {
    TempDir dir("manifest");
    auto cfg = small_config(dir);
    write_manifest(cfg, dir.path);
    std::ifstream in(dir.path / "manifest.json");
    auto doc = nlohmann::json::parse(in);
    CHECK(doc["version"] == std::string(kVersion));
    CHECK(doc["master_seed"] == 42);
    CHECK(doc["dataset_seeds"].size() == 2);
    CHECK(doc["config"]["repetitions"] == 2);
}

TEST_CASE("selectors in one cell share cascade randomness") {
    // On a star every centrality picks the centre, so FIS must match exactly.
    TempDir dir("paired");
    ExperimentConfig cfg;
    DatasetDescriptor d;
    d.name = "star";
    d.path = dir.write("star.txt", edge_list_text(star_graph(30)));
    cfg.datasets = {d};
    cfg.algorithms = {"PR", "HI", "ENC", "GLR"};
    cfg.spreader_fractions = {0.01};
    cfg.repetitions = 3;
    cfg.num_simulations = 100;
    auto rows = run_experiment(cfg);
    REQUIRE(rows.size() == 12);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t a = 1; a < 4; ++a)
            CHECK(rows[a * 3 + r].fis_mean == rows[r].fis_mean);
    CHECK(rows[0].fis_mean != rows[1].fis_mean);
}
