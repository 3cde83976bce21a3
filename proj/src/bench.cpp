#include "dqssa/bench.hpp"

#include "dqssa/centrality.hpp"
#include "dqssa/community.hpp"
#include "dqssa/diffusion.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

namespace dqssa {

using nlohmann::json;

const std::vector<std::string> &all_selectors() {
    static const std::vector<std::string> names = {"DQSSA", "DQPSO", "DQBA", "DPSO", "DBA",
                                                   "HI",    "GLR",   "PR",   "ENC"};
    return names;
}

bool is_known_selector(std::string_view name) {
    return parse_algorithm(name).has_value() || parse_centrality(name).has_value();
}

void ExperimentConfig::validate() const {
    if (datasets.empty())
        throw std::invalid_argument("no datasets configured");
    if (algorithms.empty())
        throw std::invalid_argument("no algorithms configured");
    for (const auto &a : algorithms)
        if (!is_known_selector(a))
            throw std::invalid_argument("unknown algorithm: " + a);
    if (spreader_fractions.empty())
        throw std::invalid_argument("no spreader fractions configured");
    for (std::size_t i = 0; i < spreader_fractions.size(); ++i) {
        double f = spreader_fractions[i];
        if (!(f > 0.0 && f < 1.0))
            throw std::invalid_argument("spreader fractions must lie in (0, 1)");
        if (i > 0 && !(spreader_fractions[i - 1] < f))
            throw std::invalid_argument("spreader fractions must be sorted ascending");
    }
    if (!(p > 0.0 && p <= 1.0))
        throw std::invalid_argument("infection probability must lie in (0, 1]");
    if (repetitions < 1)
        throw std::invalid_argument("repetitions must be at least 1");
    if (num_simulations < 1)
        throw std::invalid_argument("simulations must be at least 1");
    if (!(pool_factor >= 1.0))
        throw std::invalid_argument("pool_factor must be >= 1");
    if (!(resolution > 0.0))
        throw std::invalid_argument("resolution must be positive");
    if (workers < 1)
        throw std::invalid_argument("workers must be at least 1");
}

namespace {

void reject_unknown(const json &obj, std::initializer_list<std::string_view> allowed,
                    std::string_view where) {
    if (!obj.is_object())
        throw std::invalid_argument(std::string(where) + " must be an object");
    for (const auto &[key, value] : obj.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw std::invalid_argument("unknown key '" + key + "' in " + std::string(where));
}

template <typename T> void read_if(const json &obj, const char *key, T &out) {
    if (obj.contains(key))
        out = obj.at(key).get<T>();
}

HeaderPolicy parse_header_policy(const std::string &s) {
    if (s == "auto")
        return HeaderPolicy::Auto;
    if (s == "none")
        return HeaderPolicy::None;
    if (s == "skip_first")
        return HeaderPolicy::SkipFirst;
    throw std::invalid_argument("unknown header policy: " + s);
}

std::string header_policy_name(HeaderPolicy h) {
    switch (h) {
    case HeaderPolicy::Auto: return "auto";
    case HeaderPolicy::None: return "none";
    case HeaderPolicy::SkipFirst: return "skip_first";
    }
    return "auto";
}

} // namespace

ExperimentConfig load_experiment_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open config: " + path.string());
    json doc;
    try {
        doc = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error &e) {
        throw std::invalid_argument("config parse error: " + std::string(e.what()));
    }
    reject_unknown(doc,
                   {"datasets", "algorithms", "spreader_fractions", "infection_probability",
                    "repetitions", "swarm", "community", "centrality", "diffusion", "workers",
                    "output_dir", "seed"},
                   "config");

    ExperimentConfig cfg;
    const auto base = path.parent_path();
    if (doc.contains("datasets")) {
        for (const auto &d : doc.at("datasets")) {
            reject_unknown(d, {"name", "path", "id_base", "comment_prefixes", "header"},
                           "dataset");
            DatasetDescriptor desc;
            desc.path = d.at("path").get<std::string>();
            if (desc.path.is_relative())
                desc.path = base / desc.path;
            read_if(d, "name", desc.name);
            read_if(d, "id_base", desc.id_base);
            read_if(d, "comment_prefixes", desc.comment_prefixes);
            if (d.contains("header"))
                desc.header = parse_header_policy(d.at("header").get<std::string>());
            if (desc.name.empty())
                desc.name = desc.path.stem().string();
            cfg.datasets.push_back(std::move(desc));
        }
    }
    read_if(doc, "algorithms", cfg.algorithms);
    read_if(doc, "spreader_fractions", cfg.spreader_fractions);
    read_if(doc, "infection_probability", cfg.p);
    read_if(doc, "repetitions", cfg.repetitions);
    read_if(doc, "workers", cfg.workers);
    read_if(doc, "seed", cfg.seed);
    if (doc.contains("output_dir"))
        cfg.output_dir = doc.at("output_dir").get<std::string>();

    if (doc.contains("swarm")) {
        const auto &s = doc.at("swarm");
        reject_unknown(s,
                       {"population", "iterations", "sigma", "elite_fraction",
                        "mutation_fraction", "opposition", "pso", "bat"},
                       "swarm");
        read_if(s, "population", cfg.swarm.population);
        read_if(s, "iterations", cfg.swarm.iterations);
        read_if(s, "sigma", cfg.swarm.sigma);
        read_if(s, "elite_fraction", cfg.swarm.elite_fraction);
        read_if(s, "mutation_fraction", cfg.swarm.mutation_fraction);
        if (s.contains("opposition")) {
            auto form = s.at("opposition").get<std::string>();
            if (form == "difference")
                cfg.swarm.opposition = OppositionForm::Difference;
            else if (form == "sum")
                cfg.swarm.opposition = OppositionForm::Sum;
            else
                throw std::invalid_argument("opposition must be 'difference' or 'sum'");
        }
        if (s.contains("pso")) {
            const auto &p = s.at("pso");
            reject_unknown(p, {"inertia", "cognitive", "social"}, "swarm.pso");
            read_if(p, "inertia", cfg.swarm.pso.inertia);
            read_if(p, "cognitive", cfg.swarm.pso.cognitive);
            read_if(p, "social", cfg.swarm.pso.social);
        }
        if (s.contains("bat")) {
            const auto &b = s.at("bat");
            reject_unknown(b,
                           {"f_min", "f_max", "loudness", "pulse_rate", "alpha", "gamma",
                            "walk_fraction"},
                           "swarm.bat");
            read_if(b, "f_min", cfg.swarm.bat.f_min);
            read_if(b, "f_max", cfg.swarm.bat.f_max);
            read_if(b, "loudness", cfg.swarm.bat.loudness);
            read_if(b, "pulse_rate", cfg.swarm.bat.pulse_rate);
            read_if(b, "alpha", cfg.swarm.bat.alpha);
            read_if(b, "gamma", cfg.swarm.bat.gamma);
            read_if(b, "walk_fraction", cfg.swarm.bat.walk_fraction);
        }
    }
    if (doc.contains("community")) {
        const auto &c = doc.at("community");
        reject_unknown(c, {"pool_factor", "resolution"}, "community");
        read_if(c, "pool_factor", cfg.pool_factor);
        read_if(c, "resolution", cfg.resolution);
    }
    if (doc.contains("centrality")) {
        const auto &c = doc.at("centrality");
        reject_unknown(c, {"glr_gamma"}, "centrality");
        read_if(c, "glr_gamma", cfg.glr_gamma);
    }
    if (doc.contains("diffusion")) {
        const auto &d = doc.at("diffusion");
        reject_unknown(d, {"simulations"}, "diffusion");
        read_if(d, "simulations", cfg.num_simulations);
    }
    return cfg;
}

std::string config_to_json(const ExperimentConfig &cfg) {
    json doc;
    doc["datasets"] = json::array();
    for (const auto &d : cfg.datasets)
        doc["datasets"].push_back({{"name", d.name},
                                   {"path", d.path.string()},
                                   {"id_base", d.id_base},
                                   {"comment_prefixes", d.comment_prefixes},
                                   {"header", header_policy_name(d.header)}});
    doc["algorithms"] = cfg.algorithms;
    doc["spreader_fractions"] = cfg.spreader_fractions;
    doc["infection_probability"] = cfg.p;
    doc["repetitions"] = cfg.repetitions;
    doc["swarm"] = {
        {"population", cfg.swarm.population},
        {"iterations", cfg.swarm.iterations},
        {"sigma", cfg.swarm.sigma},
        {"elite_fraction", cfg.swarm.elite_fraction},
        {"mutation_fraction", cfg.swarm.mutation_fraction},
        {"opposition", cfg.swarm.opposition == OppositionForm::Sum ? "sum" : "difference"},
        {"pso",
         {{"inertia", cfg.swarm.pso.inertia},
          {"cognitive", cfg.swarm.pso.cognitive},
          {"social", cfg.swarm.pso.social}}},
        {"bat",
         {{"f_min", cfg.swarm.bat.f_min},
          {"f_max", cfg.swarm.bat.f_max},
          {"loudness", cfg.swarm.bat.loudness},
          {"pulse_rate", cfg.swarm.bat.pulse_rate},
          {"alpha", cfg.swarm.bat.alpha},
          {"gamma", cfg.swarm.bat.gamma},
          {"walk_fraction", cfg.swarm.bat.walk_fraction}}},
    };
    doc["community"] = {{"pool_factor", cfg.pool_factor}, {"resolution", cfg.resolution}};
    doc["centrality"] = {{"glr_gamma", cfg.glr_gamma}};
    doc["diffusion"] = {{"simulations", cfg.num_simulations}};
    doc["workers"] = cfg.workers;
    doc["output_dir"] = cfg.output_dir.string();
    doc["seed"] = cfg.seed;
    return doc.dump(2);
}

std::size_t seeds_for_fraction(double fraction, std::size_t n) {
    auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
    return std::max<std::size_t>(1, std::min(k, n));
}

namespace {

struct DatasetContext {
    std::optional<Graph> graph;
    std::optional<Partition> partition;
    std::map<std::size_t, CandidatePool> pools; // by k
    std::string error;
};

struct Cell {
    std::size_t dataset, algorithm, fraction, repetition;
};

ResultRow run_cell(const ExperimentConfig &cfg, const DatasetContext &ctx, const Cell &cell) {
    ResultRow row;
    row.dataset = cfg.datasets[cell.dataset].name;
    row.algorithm = cfg.algorithms[cell.algorithm];
    row.fraction = cfg.spreader_fractions[cell.fraction];
    row.repetition = cell.repetition;
    row.seed = derive_seed(cfg.seed, {cell.dataset, cell.algorithm, cell.fraction, cell.repetition});
    if (!ctx.error.empty()) {
        row.error = ctx.error;
        return row;
    }
    try {
        const Graph &g = *ctx.graph;
        row.k = seeds_for_fraction(row.fraction, g.num_nodes());

        using Clock = std::chrono::steady_clock;
        SeedSet seeds;
        const auto start = Clock::now();
        if (auto alg = parse_algorithm(row.algorithm)) {
            SwarmConfig sc = cfg.swarm;
            sc.algorithm = *alg;
            sc.k = row.k;
            sc.rng_seed = row.seed;
            sc.infection_probability = cfg.p;
            seeds = optimize(g, ctx.pools.at(row.k), sc).seeds;
        } else {
            ScoreVector scores;
            switch (*parse_centrality(row.algorithm)) {
            case CentralityMethod::HI: scores = h_index(g); break;
            case CentralityMethod::GLR: scores = glr(g, *ctx.partition, cfg.glr_gamma); break;
            case CentralityMethod::PR: scores = pagerank(g); break;
            case CentralityMethod::ENC: scores = enc(g); break;
            }
            seeds = top_k_seeds(g, scores, row.k);
        }
        const std::chrono::duration<double> elapsed = Clock::now() - start;
        row.wall_clock_seconds = std::max(elapsed.count(), 1e-9);

        row.lie_value = lie(g, seeds, InfectionProbability(cfg.p));
        DiffusionConfig dc;
        dc.p = cfg.p;
        dc.num_simulations = cfg.num_simulations;
        // Every selector in a (dataset, fraction, repetition) cell shares the
        // cascade random numbers, so FIS differences are paired.
        dc.rng_seed = derive_seed(cfg.seed, {cell.dataset, cell.fraction, cell.repetition, 0xd1f});
        auto result = fis(g, seeds, dc);
        row.fis_mean = result.fis_mean;
        row.fis_variance = result.fis_variance;
    } catch (const std::exception &e) {
        row.error = e.what();
    }
    return row;
}

} // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig &cfg, const RowSink &sink) {
    cfg.validate();

    std::vector<DatasetContext> contexts(cfg.datasets.size());
    for (std::size_t d = 0; d < cfg.datasets.size(); ++d) {
        auto &ctx = contexts[d];
        try {
            ctx.graph = load_edge_list(cfg.datasets[d]);
            ctx.partition = louvain(*ctx.graph, cfg.resolution, derive_seed(cfg.seed, {d, 0xc0}));
            for (double f : cfg.spreader_fractions) {
                auto k = seeds_for_fraction(f, ctx.graph->num_nodes());
                if (!ctx.pools.contains(k))
                    ctx.pools.emplace(k, build_candidate_pool(*ctx.graph, *ctx.partition, k,
                                                              cfg.pool_factor));
            }
        } catch (const std::exception &e) {
            ctx.error = e.what();
        }
    }

    std::vector<Cell> cells;
    for (std::size_t d = 0; d < cfg.datasets.size(); ++d)
        for (std::size_t a = 0; a < cfg.algorithms.size(); ++a)
            for (std::size_t f = 0; f < cfg.spreader_fractions.size(); ++f)
                for (std::size_t r = 0; r < cfg.repetitions; ++r)
                    cells.push_back({d, a, f, r});

    std::vector<std::optional<ResultRow>> slots(cells.size());
    std::mutex mutex;
    std::size_t emitted = 0;
    auto publish = [&](std::size_t i, ResultRow row) {
        std::lock_guard lock(mutex);
        slots[i] = std::move(row);
        while (emitted < slots.size() && slots[emitted]) {
            if (sink)
                sink(*slots[emitted]);
            ++emitted;
        }
    };

    const unsigned workers = std::min<unsigned>(cfg.workers, static_cast<unsigned>(cells.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            publish(i, run_cell(cfg, contexts[cells[i].dataset], cells[i]));
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < cells.size(); i = next++)
                    publish(i, run_cell(cfg, contexts[cells[i].dataset], cells[i]));
            });
    }

    std::vector<ResultRow> rows;
    rows.reserve(slots.size());
    for (auto &s : slots)
        rows.push_back(std::move(*s));
    return rows;
}

namespace {

std::string csv_escape(const std::string &s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += (c == '\n' || c == '\r') ? ' ' : c;
    }
    return out + '"';
}

std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

constexpr const char *kResultsHeader = "dataset,algorithm,fraction,k,repetition,seed,lie_value,"
                                       "fis_mean,fis_variance,wall_clock_seconds,status";

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

} // namespace

void write_results_header(std::ostream &out) { out << kResultsHeader << '\n'; }

void write_result_row(std::ostream &out, const ResultRow &r) {
    out << csv_escape(r.dataset) << ',' << csv_escape(r.algorithm) << ',' << fmt(r.fraction) << ','
        << r.k << ',' << r.repetition << ',' << r.seed << ',' << fmt(r.lie_value) << ','
        << fmt(r.fis_mean) << ',' << fmt(r.fis_variance) << ',' << fmt(r.wall_clock_seconds) << ','
        << (r.ok() ? std::string("ok") : csv_escape("error: " + r.error)) << '\n';
}

std::vector<ResultRow> read_results_csv(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::invalid_argument("cannot open " + path.string());
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::vector<ResultRow> rows;
    std::size_t pos = 0;
    bool header = true;
    while (pos < content.size()) {
        auto end = content.find('\n', pos);
        if (end == std::string::npos)
            break; // incomplete trailing row
        std::string line = content.substr(pos, end - pos);
        pos = end + 1;
        if (header) {
            header = false;
            continue;
        }
        auto f = split_csv(line);
        if (f.size() != 11)
            continue;
        ResultRow r;
        try {
            r.dataset = f[0];
            r.algorithm = f[1];
            r.fraction = std::stod(f[2]);
            r.k = std::stoull(f[3]);
            r.repetition = std::stoull(f[4]);
            r.seed = std::stoull(f[5]);
            r.lie_value = std::stod(f[6]);
            r.fis_mean = std::stod(f[7]);
            r.fis_variance = std::stod(f[8]);
            r.wall_clock_seconds = std::stod(f[9]);
        } catch (const std::exception &) {
            continue;
        }
        if (f[10] != "ok")
            r.error = f[10].starts_with("error: ") ? f[10].substr(7) : f[10];
        rows.push_back(std::move(r));
    }
    return rows;
}

ResultsFile::ResultsFile(const std::filesystem::path &path) : out_(path) {
    if (!out_)
        throw std::invalid_argument("cannot write " + path.string());
    write_results_header(out_);
    out_.flush();
}

void ResultsFile::operator()(const ResultRow &row) {
    write_result_row(out_, row);
    out_.flush();
}

namespace {

std::ofstream open_output(const std::filesystem::path &path) {
    std::ofstream out(path);
    if (!out)
        throw std::invalid_argument("cannot write " + path.string());
    return out;
}

void write_curve(const std::vector<const ResultRow *> &rows,
                 const std::vector<std::string> &algorithms, double ResultRow::*metric,
                 const std::filesystem::path &path) {
    std::set<double> fractions;
    std::map<std::pair<double, std::string>, std::pair<double, std::size_t>> acc;
    for (const auto *r : rows) {
        fractions.insert(r->fraction);
        auto &slot = acc[{r->fraction, r->algorithm}];
        slot.first += r->*metric;
        slot.second += 1;
    }
    auto out = open_output(path);
    out << "fraction";
    for (const auto &a : algorithms)
        out << ',' << csv_escape(a);
    out << '\n';
    for (double f : fractions) {
        out << fmt(f);
        for (const auto &a : algorithms) {
            out << ',';
            auto it = acc.find({f, a});
            if (it != acc.end())
                out << fmt(it->second.first / static_cast<double>(it->second.second));
        }
        out << '\n';
    }
}

} // namespace

void emit_tables(const std::vector<ResultRow> &rows, const std::vector<std::string> &algorithms,
                 const std::filesystem::path &dir, bool write_results) {
    if (rows.empty())
        throw std::invalid_argument("no result rows to emit");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw std::invalid_argument("cannot create output directory " + dir.string());

    if (write_results) {
        auto out = open_output(dir / "results.csv");
        write_results_header(out);
        for (const auto &r : rows)
            write_result_row(out, r);
    }

    std::vector<std::string> datasets;
    for (const auto &r : rows)
        if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end())
            datasets.push_back(r.dataset);

    auto table = open_output(dir / "time_table.csv");
    table << "dataset";
    for (const auto &a : algorithms)
        table << ',' << csv_escape(a);
    table << '\n';
    for (const auto &d : datasets) {
        std::vector<const ResultRow *> ok;
        double largest = 0.0;
        for (const auto &r : rows)
            if (r.dataset == d && r.ok()) {
                ok.push_back(&r);
                largest = std::max(largest, r.fraction);
            }
        table << csv_escape(d);
        for (const auto &a : algorithms) {
            double sum = 0.0;
            std::size_t count = 0;
            for (const auto *r : ok)
                if (r->algorithm == a && r->fraction == largest) {
                    sum += r->wall_clock_seconds;
                    ++count;
                }
            table << ',';
            if (count > 0)
                table << fmt(sum / static_cast<double>(count));
        }
        table << '\n';

        auto sub = dir / d;
        std::filesystem::create_directories(sub, ec);
        if (ec)
            throw std::invalid_argument("cannot create output directory " + sub.string());
        write_curve(ok, algorithms, &ResultRow::fis_mean, sub / "fis_curve.csv");
        write_curve(ok, algorithms, &ResultRow::lie_value, sub / "lie_curve.csv");
    }
}

void write_manifest(const ExperimentConfig &cfg, const std::filesystem::path &dir) {
    std::filesystem::create_directories(dir);
    json manifest;
    manifest["version"] = std::string(kVersion);
    manifest["config"] = json::parse(config_to_json(cfg));
    manifest["master_seed"] = cfg.seed;
    json seeds = json::array();
    for (std::size_t d = 0; d < cfg.datasets.size(); ++d)
        seeds.push_back({{"dataset", cfg.datasets[d].name},
                         {"louvain_seed", derive_seed(cfg.seed, {d, 0xc0})}});
    manifest["dataset_seeds"] = seeds;
    auto out = open_output(dir / "manifest.json");
    out << manifest.dump(2) << '\n';
}

} // namespace dqssa
