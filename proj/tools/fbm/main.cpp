#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <fbm/fbm.hpp>

// fbm: simulate fractional Brownian motion, estimate the Hurst parameter from
// files, run the verification suite, benchmark the sampler.
// Exit codes: 0 success, 1 usage, 2 data error, 3 verification failure.

namespace {

using nlohmann::json;

struct SimulateArgs {
    double h = 0.0;
    int n = 0;
    int q = 10;
    bool n_given = false;
    double t = 1.0;
    int count = 1;
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool noise = false;
    std::string output = "fbm_paths.csv";
    std::string format = "csv";
    unsigned threads = 1;
};

struct EstimateArgs {
    std::string input;
    std::string format = "csv";
    std::string filter = "increments1";
    std::vector<int> dilations = {1, 2};
    bool cumsum = false;
    bool with_ci = false;
    double level = 0.95;
    int mc_reps = 500;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    bool as_json = false;
    int raw_length = 0;
};

struct VerifyArgs {
    std::string only;
    int mc_reps = 10000;
    unsigned threads = 1;
    bool as_json = false;
};

struct BenchArgs {
    bool as_json = false;
};

std::uint64_t pick_seed(bool given, std::uint64_t seed) {
    if (given) return seed;
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

void write_sidecar(const std::string& output, const json& meta) {
    std::ofstream out(output + ".meta.json");
    if (!out) throw std::runtime_error("cannot write sidecar for " + output);
    out << meta.dump(2) << '\n';
}

int cmd_simulate(const SimulateArgs& a) {
    const fbm::HurstParameter H(a.h);
    const int n = a.n_given ? a.n : (1 << a.q) + 1;
    if (n < 2) throw CLI::ValidationError("--n must be >= 2");
    if (a.count < 1) throw CLI::ValidationError("--count must be >= 1");
    if (!(a.t > 0.0)) throw CLI::ValidationError("--t must be positive");
    const std::uint64_t seed = pick_seed(a.seed_given, a.seed);

    // n points per path: a path is the origin plus n-1 accumulated noise
    // values; a noise series is n values as drawn
    const int noise_len = a.noise ? n : n - 1;
    const fbm::CirculantEmbedding emb = fbm::build_embedding(H, noise_len);
    const auto series = fbm::sample_fgn_parallel(
        emb, seed, static_cast<std::size_t>(a.count), a.threads);

    std::vector<double> index;
    std::vector<std::vector<double>> columns;
    columns.reserve(series.size());
    if (a.noise) {
        index.resize(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) index[static_cast<std::size_t>(k)] = k;
        for (const auto& s : series) columns.push_back(s.values);
    } else {
        for (const auto& s : series) {
            fbm::FbmPath path = fbm::fgn_to_fbm(s, a.t);
            if (index.empty()) index = path.times;
            columns.push_back(std::move(path.values));
        }
    }

    if (a.format == "csv") {
        fbm::io::write_csv(a.output, a.noise ? "k" : "t", index,
                           a.noise ? "series_" : "path_", columns);
    } else {
        fbm::io::write_raw(a.output, columns);
    }
    json meta{{"command", "simulate"},
              {"h", a.h},
              {"n", n},
              {"t", a.t},
              {"count", a.count},
              {"seed", seed},
              {"noise", a.noise},
              {"format", a.format},
              {"version", fbm::version}};
    write_sidecar(a.output, meta);
    std::printf("wrote %d %s of %d points to %s (seed %llu)\n", a.count,
                a.noise ? "noise series" : "paths", n, a.output.c_str(),
                static_cast<unsigned long long>(seed));
    return 0;
}

fbm::io::Table load_series(const EstimateArgs& a) {
    if (a.format == "csv") {
        fbm::io::Table table = fbm::io::read_csv(a.input);
        if (!table.names.empty() && (table.names[0] == "t" || table.names[0] == "k")) {
            table.names.erase(table.names.begin());
            table.columns.erase(table.columns.begin());
        }
        return table;
    }
    // raw: column length from the sidecar, or --series-length
    int n = a.raw_length;
    if (n == 0) {
        std::ifstream meta_in(a.input + ".meta.json");
        if (!meta_in)
            throw std::runtime_error(
                "raw input needs --series-length or a .meta.json sidecar");
        json meta = json::parse(meta_in);
        n = meta.at("n").get<int>();
    }
    const std::vector<double> flat = fbm::io::read_raw(a.input);
    if (n < 1 || flat.size() % static_cast<std::size_t>(n) != 0)
        throw std::runtime_error("raw file size is not a multiple of the series length");
    fbm::io::Table table;
    const std::size_t count = flat.size() / static_cast<std::size_t>(n);
    for (std::size_t c = 0; c < count; ++c) {
        table.names.push_back("series_" + std::to_string(c));
        table.columns.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(c * n),
                                   flat.begin() + static_cast<std::ptrdiff_t>((c + 1) * n));
    }
    return table;
}

int cmd_estimate(const EstimateArgs& a) {
    fbm::EstimatorConfig cfg;
    cfg.filter = fbm::make_named_filter(a.filter);
    cfg.dilations = a.dilations;

    const fbm::io::Table table = load_series(a);
    if (table.columns.empty()) throw std::runtime_error("no series in " + a.input);

    json report{{"command", "estimate"},
                {"input", a.input},
                {"filter", a.filter},
                {"dilations", a.dilations},
                {"version", fbm::version},
                {"series", json::array()}};
    if (a.with_ci) {
        report["seed"] = a.seed;
        report["mc_reps"] = a.mc_reps;
        report["level"] = a.level;
    }

    std::size_t failures = 0;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        std::vector<double> xs = table.columns[c];
        if (a.cumsum) {
            std::vector<double> path(xs.size() + 1, 0.0);
            for (std::size_t k = 0; k < xs.size(); ++k) path[k + 1] = path[k] + xs[k];
            xs = std::move(path);
        }
        json entry{{"name", table.names[c]}};
        try {
            const fbm::EstimateResult res =
                a.with_ci ? fbm::estimate_with_ci(xs, cfg, a.level, a.mc_reps, a.seed,
                                                  a.threads)
                          : fbm::estimate_hurst(xs, cfg);
            entry["h_hat"] = res.h_hat;
            entry["slope"] = res.slope;
            entry["intercept"] = res.intercept;
            entry["in_model_range"] = res.in_model_range;
            entry["n_used"] = res.n_used;
            json pd = json::array();
            for (const auto& d : res.per_dilation)
                pd.push_back({{"m", d.m}, {"v", d.v}, {"log_v", d.log_v}});
            entry["per_dilation"] = pd;
            if (res.ci)
                entry["ci"] = {{"lower", res.ci->lower},
                               {"upper", res.ci->upper},
                               {"level", res.ci->level}};
            if (!a.as_json) {
                std::printf("%s: h_hat = %.6f%s\n", table.names[c].c_str(), res.h_hat,
                            res.in_model_range ? "" : "  [outside model range]");
                for (const auto& d : res.per_dilation)
                    std::printf("  m=%d  V=%.10g  log V=%.6f\n", d.m, d.v, d.log_v);
                if (res.ci)
                    std::printf("  %.0f%% CI [%.6f, %.6f] (%d bootstrap reps, seed %llu)\n",
                                100.0 * res.ci->level, res.ci->lower, res.ci->upper,
                                res.mc_reps,
                                static_cast<unsigned long long>(res.seed));
            }
        } catch (const std::exception& e) {
            ++failures;
            entry["error"] = e.what();
            if (!a.as_json)
                std::printf("%s: error: %s\n", table.names[c].c_str(), e.what());
        }
        report["series"].push_back(entry);
    }
    if (a.as_json) std::printf("%s\n", report.dump(2).c_str());
    return failures == table.columns.size() ? 2 : 0;
}

int cmd_verify(const VerifyArgs& a) {
    fbm::selfcheck::SuiteScale scale;
    const double f = static_cast<double>(a.mc_reps) / 10000.0;
    scale.sampler_paths = static_cast<std::size_t>(a.mc_reps);
    scale.terminal_paths = static_cast<std::size_t>(a.mc_reps);
    scale.consistency_seeds =
        std::max<std::size_t>(10, static_cast<std::size_t>(200.0 * f));
    scale.normality_reps = std::max(100, static_cast<int>(2000.0 * f));
    scale.workers = a.threads;

    const auto results = fbm::selfcheck::run_group(a.only, scale);
    if (results.empty())
        throw CLI::ValidationError("unknown check group: " + a.only);
    bool all = true;
    json report{{"command", "verify"}, {"version", fbm::version}, {"checks", json::array()}};
    for (const auto& r : results) {
        all = all && r.pass;
        if (a.as_json)
            report["checks"].push_back(
                {{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        else
            std::printf("[%s] %s: %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                        r.detail.c_str());
    }
    if (a.as_json) {
        report["all_pass"] = all;
        std::printf("%s\n", report.dump(2).c_str());
    } else {
        std::printf("%zu/%zu checks passed\n",
                    static_cast<std::size_t>(
                        std::count_if(results.begin(), results.end(),
                                      [](const auto& r) { return r.pass; })),
                    results.size());
    }
    return all ? 0 : 3;
}

int cmd_bench(const BenchArgs& a) {
    using clock = std::chrono::steady_clock;
    auto seconds = [](clock::time_point t0, clock::time_point t1) {
        return std::chrono::duration<double>(t1 - t0).count();
    };
    json report{{"command", "bench"}, {"version", fbm::version}, {"grid", json::array()}};
    if (!a.as_json) std::printf("%10s %10s %12s %14s %14s\n", "N", "M", "build_s", "per_path_s", "chol_per_path_s");
    for (int q : {8, 10, 12, 14, 16}) {
        const int n = (1 << q) + 1;
        const fbm::HurstParameter H(0.7);
        const auto t0 = clock::now();
        const auto emb = fbm::build_embedding(H, n);
        const auto t1 = clock::now();
        const std::size_t reps = std::max<std::size_t>(4, (1u << 22) / static_cast<unsigned>(n));
        const auto t2 = clock::now();
        (void)fbm::sample_fgn(emb, 1, reps);
        const auto t3 = clock::now();
        const double per_path = seconds(t2, t3) / static_cast<double>(reps);
        double chol_per_path = -1.0;
        if (n <= 1025) {
            const std::size_t creps = 16;
            const auto t4 = clock::now();
            (void)fbm::cholesky_sample_oracle(H, n, 1, creps);
            const auto t5 = clock::now();
            chol_per_path = seconds(t4, t5) / static_cast<double>(creps);
        }
        if (a.as_json) {
            json row{{"n", n}, {"m", emb.M}, {"build_s", seconds(t0, t1)},
                     {"per_path_s", per_path}};
            if (chol_per_path >= 0.0) row["chol_per_path_s"] = chol_per_path;
            report["grid"].push_back(row);
        } else {
            std::printf("%10d %10d %12.6f %14.8f ", n, static_cast<int>(emb.M),
                        seconds(t0, t1), per_path);
            if (chol_per_path >= 0.0) std::printf("%14.8f\n", chol_per_path);
            else std::printf("%14s\n", "-");
        }
    }
    // the power-of-two recommendation: a non-power-of-two circulant size pays
    // for the convolution detour
    {
        const fbm::HurstParameter H(0.7);
        const auto emb_odd = fbm::build_embedding(H, 1500);  // M = 2998
        const auto emb_pow = fbm::build_embedding(H, 2049);  // M = 4096
        auto time_paths = [&](const fbm::CirculantEmbedding& e) {
            const std::size_t reps = 512;
            const auto t0 = clock::now();
            (void)fbm::sample_fgn(e, 1, reps);
            const auto t1 = clock::now();
            return seconds(t0, t1) / static_cast<double>(reps);
        };
        const double odd = time_paths(emb_odd);
        const double pow2 = time_paths(emb_pow);
        if (a.as_json) {
            report["pow2_comparison"] = {{"n_odd", 1500},
                                         {"n_pow2", 2049},
                                         {"per_path_odd_s", odd},
                                         {"per_path_pow2_s", pow2}};
            std::printf("%s\n", report.dump(2).c_str());
        } else {
            std::printf("N=1500 (M=2998): %.8f s/path;  N=2049 (M=4096): %.8f s/path\n",
                        odd, pow2);
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact fractional Brownian motion sampling and Hurst estimation"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* s = app.add_subcommand("simulate", "sample fBm paths (or fGn with --noise)");
    // the single-char long option --h needs the default -h help shortcut gone
    s->set_help_flag("--help", "print help and exit");
    s->add_option("--h", sim.h, "Hurst parameter in (0,1)")->required();
    auto* qopt = s->add_option("--q", sim.q, "points per path as 2^q+1 (default 10)");
    auto* nopt = s->add_option("--n", sim.n, "points per path (overrides --q)");
    nopt->excludes(qopt);
    s->add_option("--t", sim.t, "time horizon (default 1)");
    s->add_option("--count", sim.count, "number of paths (default 1)");
    auto* seedopt = s->add_option("--seed", sim.seed, "RNG seed (default: random, recorded)");
    s->add_flag("--noise", sim.noise, "emit unit-spacing fractional Gaussian noise");
    s->add_option("--output,-o", sim.output, "output file (default fbm_paths.csv)");
    s->add_option("--format", sim.format, "csv or raw (default csv)")
        ->check(CLI::IsMember({"csv", "raw"}));
    s->add_option("--threads", sim.threads, "worker threads (default 1)");

    EstimateArgs est;
    auto* e = app.add_subcommand("estimate", "estimate H from series in a file");
    e->add_option("--input,-i", est.input, "input file")->required();
    e->add_option("--format", est.format, "csv or raw (default csv)")
        ->check(CLI::IsMember({"csv", "raw"}));
    e->add_option("--filter", est.filter,
                  "increments1, increments2, or daubechies4 (default increments1)");
    e->add_option("--dilations", est.dilations, "dilation list (default 1 2)")
        ->delimiter(',');
    e->add_flag("--cumsum", est.cumsum,
                "treat columns as increments; accumulate before estimating");
    e->add_flag("--ci", est.with_ci, "attach a parametric bootstrap CI");
    e->add_option("--level", est.level, "CI level (default 0.95)");
    e->add_option("--mc-reps", est.mc_reps, "bootstrap replications (default 500)");
    e->add_option("--seed", est.seed, "bootstrap seed (default 0)");
    e->add_option("--threads", est.threads, "worker threads (default 1)");
    e->add_option("--series-length", est.raw_length, "series length for raw input");
    e->add_flag("--json", est.as_json, "machine-readable report");

    VerifyArgs ver;
    auto* v = app.add_subcommand("verify", "run the verification suite");
    v->add_option("--only", ver.only,
                  "one group: embedding, sampler, terminal, constants, kernels, beta, "
                  "consistency, scale, normality, reproducibility");
    v->add_option("--mc-reps", ver.mc_reps,
                  "Monte Carlo paths per check (default 10000; smaller runs widen "
                  "tolerances by the matching sqrt factor)");
    v->add_option("--threads", ver.threads, "worker threads (default 1)");
    v->add_flag("--json", ver.as_json, "machine-readable report");

    BenchArgs ben;
    auto* b = app.add_subcommand("bench", "time the samplers across sizes");
    b->add_flag("--json", ben.as_json, "machine-readable report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : 1;
    }

    try {
        sim.n_given = nopt->count() > 0;
        sim.seed_given = seedopt->count() > 0;
        if (s->parsed()) return cmd_simulate(sim);
        if (e->parsed()) return cmd_estimate(est);
        if (v->parsed()) return cmd_verify(ver);
        if (b->parsed()) return cmd_bench(ben);
    } catch (const CLI::ValidationError& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 1;
    } catch (const std::domain_error& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 1;
    } catch (const std::invalid_argument& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 1;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 2;
    }
    return 1;
}
