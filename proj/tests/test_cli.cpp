#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

fs::path scratch() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("emptytri_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

Run run(const std::string& args) {
    const auto err_path = scratch() / "stderr.txt";
    const std::string cmd = std::string(EMPTYTRI_CLI) + " " + args + " 2>" + err_path.string();
    Run r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got = 0;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream e(err_path);
    r.err.assign(std::istreambuf_iterator<char>(e), {});
    return r;
}

fs::path write_file(const std::string& name, const std::string& text) {
    const auto p = scratch() / name;
    std::ofstream(p) << text;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::string> data_lines(const std::string& csv) {
    std::vector<std::string> out;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#') out.push_back(line);
    return out;
}

}  // namespace

TEST_CASE("analyze the five-point example") {
    const auto f = write_file("five.txt", "# square with one inner point\n0 0\n10 0\n10 10\n0 10\n5 4\n");
    const auto r = run("analyze " + f.string() + " --oracle");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["n"] == 5);
    CHECK(j["f"] == 8);
    CHECK(j["deg_max"] == 3);
    CHECK(j["degree_sum"] == 24);
    CHECK(j["degree_sum_is_3f"] == true);
    CHECK(j["oracle_agrees"] == true);
}

TEST_CASE("analyze a triangle and the near-pair option") {
    const auto f = write_file("three.txt", "0 0\n4 0\n0 3\n");
    auto r = run("analyze " + f.string());
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["f"] == 1);
    CHECK(j["deg_max"] == 1);

    r = run("analyze " + f.string() + " --t 4");
    REQUIRE(r.code == 0);
    j = nlohmann::json::parse(r.out);
    CHECK(j["near_pairs"]["N_T"] == 2);
    CHECK(j["near_pairs"]["thresholded_degree_sum"] == 2);

    CHECK(run("analyze " + f.string() + " --t -1").code == 1);
}

TEST_CASE("analyze writes the degree table") {
    const auto f = write_file("four.txt", "0 0\n6 0\n3 5\n3 2\n");
    const auto csv = scratch() / "deg.csv";
    REQUIRE(run("analyze " + f.string() + " --degrees-csv " + csv.string()).code == 0);
    const auto text = slurp(csv);
    CHECK(text.rfind("i,j,deg\n", 0) == 0);
    CHECK(data_lines(text).size() == 1 + 6);
}

TEST_CASE("collinear input is a data error naming the triple") {
    const auto f = write_file("collinear.txt", "0 0\n1 1\n2 2\n5 0\n");
    for (const char* flag : {"", " --check-general-position"}) {
        const auto r = run("analyze " + f.string() + flag);
        CHECK(r.code == 2);
        CHECK(r.err.find("collinear") != std::string::npos);
        CHECK(r.err.find("0") != std::string::npos);
        CHECK(r.err.find("1") != std::string::npos);
        CHECK(r.err.find("2") != std::string::npos);
    }
}

TEST_CASE("parse errors report the line number") {
    const auto f = write_file("bad.txt", "# header\n0 0\n1 x\n");
    const auto r = run("analyze " + f.string());
    CHECK(r.code == 2);
    CHECK(r.err.find("line 3") != std::string::npos);
    CHECK(run("analyze " + (scratch() / "missing.txt").string()).code == 2);
}

TEST_CASE("sample is deterministic and round-trips through analyze") {
    const auto a = run("sample --n 50 --seed 9");
    const auto b = run("sample --n 50 --seed 9");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(run("sample --n 50 --seed 10").out != a.out);
    CHECK(a.out.find("# seed: 9") != std::string::npos);
    CHECK(a.out.find("# n: 50") != std::string::npos);
    CHECK(a.out.find("# body: square") != std::string::npos);
    CHECK(a.out.find("scale") != std::string::npos);
    CHECK(data_lines(a.out).size() == 50);

    const auto path = scratch() / "five_sampled.txt";
    REQUIRE(run("sample --body square --n 5 --seed 3 --out " + path.string()).code == 0);
    const auto r = run("analyze " + path.string() + " --check-general-position --oracle");
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["n"] == 5);

    const auto disk = run("sample --body disk --n 20 --seed 3");
    CHECK(disk.code == 0);
    CHECK(data_lines(disk.out).size() == 20);
}

TEST_CASE("sample with n = 0 writes only the header") {
    const auto r = run("sample --n 0 --seed 1");
    REQUIRE(r.code == 0);
    CHECK(!r.out.empty());
    CHECK(data_lines(r.out).empty());
}

TEST_CASE("sample rejects a bad body") {
    const auto body = write_file("body.json", "{\"vertices\": [[0,0]]}");
    CHECK(run("sample --n 3 --body " + body.string()).code != 0);
    CHECK(run("sample --n 3 --body hexagon").code != 0);
}

TEST_CASE("deg-growth on n = 3 gives one row with mean 1") {
    const auto r = run("experiment deg-growth --n 3 --trials 5 --seed 2");
    REQUIRE(r.code == 0);
    const auto rows = data_lines(r.out);
    REQUIRE(rows.size() == 2);  // column header and one row
    CHECK(rows[0] == "n,statistic,mean,standard_error,ci_lo,ci_hi,trials");
    CHECK(rows[1].rfind("3,deg_max,1,0,1,1,5", 0) == 0);
    CHECK(r.out.rfind("# tool: ", 0) == 0);
    CHECK(r.out.find("seed") != std::string::npos);
}

TEST_CASE("valtr on n = 4") {
    const auto r = run("experiment valtr --n 4 --trials 50 --seed 3");
    REQUIRE(r.code == 0);
    const auto rows = data_lines(r.out);
    REQUIRE(rows.size() >= 2);
    std::istringstream fields(rows[1]);
    std::string n, stat, mean;
    std::getline(fields, n, ',');
    std::getline(fields, stat, ',');
    std::getline(fields, mean, ',');
    CHECK(stat == "f_over_n2");
    const double f = std::stod(mean) * 16;
    CHECK(f >= 3);
    CHECK(f <= 4);
}

TEST_CASE("every experiment gives identical CSV on a rerun") {
    const std::vector<std::string> runs{
        "deg-growth --n 20,40",       "valtr --n 20",        "ntpairs --n 50",
        "tail --n 50",                "lemma-ad --n 20",     "transfer --n 40",
        "bl --n 100",                 "ordertype-search --n 100",
        "minimize-f --n 6 --iterations 200"};
    for (const auto& args : runs) {
        CAPTURE(args);
        const auto a = run("experiment " + args + " --trials 1 --seed 11 --threads 1");
        const auto b = run("experiment " + args + " --trials 1 --seed 11 --threads 3");
        REQUIRE(a.code == 0);
        CHECK(a.out == b.out);
        CHECK(a.out.find("threads") == std::string::npos);
    }
}

TEST_CASE("--out writes CSV and JSON summary") {
    const auto dir = scratch() / "out";
    REQUIRE(run("experiment valtr --n 10 --trials 3 --out " + dir.string()).code == 0);
    const auto csv = slurp(dir / "valtr.csv");
    CHECK(csv.rfind("# tool: ", 0) == 0);
    const auto j = nlohmann::json::parse(slurp(dir / "valtr.json"));
    CHECK(j.contains("invariant_audit"));
    CHECK(j["invariant_audit"]["reports"] == 3);
}

TEST_CASE("usage and config errors exit 1") {
    CHECK(run("experiment nonsense").code == 1);
    CHECK(run("").code == 1);
    CHECK(run("experiment valtr --n 10,5").code == 1);
    CHECK(run("experiment valtr --trials 0").code == 1);
    CHECK(run("experiment valtr --n abc").code == 1);
    CHECK(run("experiment valtr --config " + (scratch() / "nope.json").string()).code == 1);
    const auto bad = write_file("bad_config.json", "{ not json");
    CHECK(run("experiment valtr --config " + bad.string()).code == 1);
}

TEST_CASE("config file values apply and flags override them") {
    const auto cfg = write_file("cfg.json", R"({"n": [3], "trials": 4, "seed": 5})");
    auto r = run("experiment deg-growth --config " + cfg.string());
    REQUIRE(r.code == 0);
    auto rows = data_lines(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].rfind("3,deg_max,1,0,1,1,4", 0) == 0);
    r = run("experiment deg-growth --config " + cfg.string() + " --trials 7");
    rows = data_lines(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].rfind("3,deg_max,1,0,1,1,7", 0) == 0);
}

TEST_CASE("frozen windows decide the exit code") {
    const auto pass = write_file("pass.json", R"({"experiment": "deg-growth",
        "rows": [{"n": 3, "statistic": "deg_max", "min": 1, "max": 1}]})");
    const auto fail = write_file("fail.json", R"({"experiment": "deg-growth",
        "rows": [{"n": 3, "statistic": "deg_max", "min": 2, "max": 3}]})");
    const auto other = write_file("other.json", R"({"experiment": "valtr", "rows": []})");
    CHECK(run("experiment deg-growth --n 3 --trials 2 --frozen " + pass.string()).code == 0);
    const auto r = run("experiment deg-growth --n 3 --trials 2 --frozen " + fail.string());
    CHECK(r.code == 3);
    CHECK(r.err.find("deg_max") != std::string::npos);
    CHECK(run("experiment deg-growth --n 3 --trials 2 --frozen " + other.string()).code == 1);
}
