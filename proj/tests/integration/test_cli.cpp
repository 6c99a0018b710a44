#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include <fbm/io.hpp>

// End-to-end checks of the command-line binary named by FBM_CLI (set by the
// test harness). All artifacts live under cli_scratch/ in the working
// directory.

using Catch::Matchers::ContainsSubstring;
using nlohmann::json;

namespace {

struct RunResult {
    int status;
    std::string out; // stdout and stderr combined
};

RunResult run_cli(const std::string& args) {
    const char* cli = std::getenv("FBM_CLI");
    REQUIRE(cli != nullptr);
    const std::string cmd = std::string(cli) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    const int rc = pclose(pipe);
    return {WIFEXITED(rc) ? WEXITSTATUS(rc) : -1, out};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string scratch(const std::string& name) {
    std::filesystem::create_directories("cli_scratch");
    return "cli_scratch/" + name;
}

} // namespace

TEST_CASE("simulate writes paths and a sidecar that records the run") {
    const auto out = scratch("a.csv");
    const auto r = run_cli("simulate --h 0.7 --q 6 --count 3 --seed 42 -o " + out);
    INFO(r.out);
    REQUIRE(r.status == 0);

    const auto table = fbm::io::read_csv(out);
    REQUIRE(table.names ==
            std::vector<std::string>{"t", "path_0", "path_1", "path_2"});
    REQUIRE(table.columns[0].size() == 65);
    REQUIRE(table.columns[0][0] == 0.0);
    for (std::size_t c = 1; c < 4; ++c) REQUIRE(table.columns[c][0] == 0.0);

    const json meta = json::parse(slurp(out + ".meta.json"));
    REQUIRE(meta.at("command") == "simulate");
    REQUIRE(meta.at("h") == 0.7);
    REQUIRE(meta.at("n") == 65);
    REQUIRE(meta.at("count") == 3);
    REQUIRE(meta.at("seed") == 42);
    REQUIRE(meta.at("noise") == false);
    REQUIRE(meta.at("format") == "csv");
    REQUIRE(meta.contains("version"));
}

TEST_CASE("simulate output is identical across runs and thread counts") {
    const std::string flags = "simulate --h 0.6 --q 7 --count 4 --seed 9 ";
    const auto a = scratch("rep_a.csv"), b = scratch("rep_b.csv"),
               c = scratch("rep_c.csv");
    REQUIRE(run_cli(flags + "--threads 1 -o " + a).status == 0);
    REQUIRE(run_cli(flags + "--threads 1 -o " + b).status == 0);
    REQUIRE(run_cli(flags + "--threads 4 -o " + c).status == 0);
    const auto bytes = slurp(a);
    REQUIRE(bytes == slurp(b));
    REQUIRE(bytes == slurp(c));
    REQUIRE(slurp(a + ".meta.json") == slurp(c + ".meta.json"));
}

TEST_CASE("a missing seed is drawn and still recorded") {
    const auto out = scratch("noseed.csv");
    REQUIRE(run_cli("simulate --h 0.5 --q 4 -o " + out).status == 0);
    const json meta = json::parse(slurp(out + ".meta.json"));
    REQUIRE(meta.at("seed").is_number_unsigned());
}

TEST_CASE("usage errors exit with code 1") {
    REQUIRE(run_cli("simulate --q 4").status == 1);              // --h required
    REQUIRE(run_cli("simulate --h 1.5 --q 4").status == 1);      // H outside (0,1)
    REQUIRE(run_cli("simulate --h 0.5 --format xml").status == 1);
    REQUIRE(run_cli("simulate --h 0.5 --q 4 --n 33").status == 1); // mutually exclusive
    REQUIRE(run_cli("estimate").status == 1);                    // --input required
    REQUIRE(run_cli("estimate -i x.csv --filter nope").status == 1);
    REQUIRE(run_cli("frobnicate").status == 1);
    const auto h = run_cli("--help");
    REQUIRE(h.status == 0);
    REQUIRE_THAT(h.out, ContainsSubstring("simulate"));
}

TEST_CASE("estimate recovers the simulated exponent end to end") {
    const auto out = scratch("est.csv");
    REQUIRE(
        run_cli("simulate --h 0.7 --q 10 --count 4 --seed 7 -o " + out).status == 0);

    const auto r = run_cli("estimate --input " + out + " --json");
    INFO(r.out);
    REQUIRE(r.status == 0);
    const json rep = json::parse(r.out);
    REQUIRE(rep.at("command") == "estimate");
    REQUIRE(rep.at("series").size() == 4);
    for (const auto& entry : rep.at("series")) {
        REQUIRE(!entry.contains("error"));
        const double h_hat = entry.at("h_hat");
        REQUIRE(h_hat > 0.5);
        REQUIRE(h_hat < 0.9);
        REQUIRE(entry.at("in_model_range") == true);
        REQUIRE(entry.at("per_dilation").size() == 2);
    }

    const auto r2 = run_cli("estimate --input " + out +
                            " --filter increments2 --dilations 1,2,3,4 --json");
    REQUIRE(r2.status == 0);
    const json rep2 = json::parse(r2.out);
    REQUIRE(rep2.at("dilations") == json::array({1, 2, 3, 4}));
    for (const auto& entry : rep2.at("series"))
        REQUIRE(entry.at("per_dilation").size() == 4);
}

TEST_CASE("constant series produce error entries, exit code follows severity") {
    const auto all_bad = scratch("flat.csv");
    {
        std::ofstream f(all_bad);
        f << "t,path_0\n";
        for (int i = 0; i < 12; ++i) f << i << ",3.25\n";
    }
    const auto r = run_cli("estimate --input " + all_bad);
    REQUIRE(r.status == 2); // every series failed
    REQUIRE_THAT(r.out, ContainsSubstring("zero variation"));

    const auto mixed = scratch("mixed.csv");
    {
        std::ofstream f(mixed);
        f << "t,path_0,path_1\n";
        for (int i = 0; i < 12; ++i) f << i << ",3.25," << i * i << "\n";
    }
    const auto m = run_cli("estimate --input " + mixed + " --json");
    REQUIRE(m.status == 0); // one series still succeeded
    const json rep = json::parse(m.out);
    REQUIRE(rep.at("series")[0].contains("error"));
    REQUIRE(rep.at("series")[1].contains("h_hat"));
}

TEST_CASE("missing input is a data error") {
    REQUIRE(run_cli("estimate --input cli_scratch/absent.csv").status == 2);
}

TEST_CASE("raw format round trips through estimate") {
    const auto out = scratch("bulk.bin");
    REQUIRE(run_cli("simulate --h 0.6 --q 8 --count 2 --seed 11 --format raw -o " +
                    out)
                .status == 0);
    REQUIRE(std::filesystem::file_size(out) == 2u * 257u * 8u);

    const auto via_sidecar =
        run_cli("estimate --input " + out + " --format raw --json");
    REQUIRE(via_sidecar.status == 0);
    const json a = json::parse(via_sidecar.out);
    REQUIRE(a.at("series").size() == 2);

    const auto via_flag = run_cli("estimate --input " + out +
                                  " --format raw --series-length 257 --json");
    REQUIRE(via_flag.status == 0);
    const json b = json::parse(via_flag.out);
    REQUIRE(a.at("series")[0].at("h_hat") == b.at("series")[0].at("h_hat"));
}

TEST_CASE("noise output estimates through the cumulative-sum flag") {
    const auto out = scratch("noise.csv");
    REQUIRE(
        run_cli("simulate --h 0.7 --q 8 --count 1 --seed 3 --noise -o " + out)
            .status == 0);
    const auto table = fbm::io::read_csv(out);
    REQUIRE(table.names == std::vector<std::string>{"k", "series_0"});
    REQUIRE(table.columns[0].size() == 257);

    const auto r = run_cli("estimate --input " + out + " --cumsum --json");
    REQUIRE(r.status == 0);
    const json rep = json::parse(r.out);
    const double h_hat = rep.at("series")[0].at("h_hat");
    REQUIRE(h_hat > 0.5);
    REQUIRE(h_hat < 0.9);
}

TEST_CASE("bootstrap interval is identical across runs") {
    const auto out = scratch("ci.csv");
    REQUIRE(
        run_cli("simulate --h 0.6 --q 7 --count 2 --seed 13 -o " + out).status == 0);
    const std::string flags =
        "estimate --input " + out + " --json --ci --mc-reps 100 --seed 5";
    const auto a = run_cli(flags);
    const auto b = run_cli(flags);
    REQUIRE(a.status == 0);
    REQUIRE(a.out == b.out);
    const json rep = json::parse(a.out);
    for (const auto& entry : rep.at("series")) {
        REQUIRE(entry.at("ci").at("level") == 0.95);
        REQUIRE(entry.at("ci").at("lower").get<double>() <
                entry.at("ci").at("upper").get<double>());
    }
}

TEST_CASE("verify runs a single group and gates its exit code") {
    const auto ok = run_cli("verify --only scale");
    INFO(ok.out);
    REQUIRE(ok.status == 0);
    REQUIRE_THAT(ok.out, ContainsSubstring("[PASS]"));

    const auto js = run_cli("verify --only beta --json");
    REQUIRE(js.status == 0);
    const json rep = json::parse(js.out);
    REQUIRE(rep.at("all_pass") == true);
    REQUIRE(rep.at("checks")[0].at("name") == "beta identity");

    REQUIRE(run_cli("verify --only warp_drive").status == 1);
}
