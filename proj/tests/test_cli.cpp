#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef VEXINF_CLI_PATH
#error "VEXINF_CLI_PATH must be defined by the build"
#endif
#ifndef VEXINF_CONFIG_DIR
#error "VEXINF_CONFIG_DIR must be defined by the build"
#endif

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("vexinf-cli-" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

int run(const std::string& args) {
    const std::string cmd =
        std::string(VEXINF_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (status < 0) return -1;
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string config(const char* name) {
    return (fs::path(VEXINF_CONFIG_DIR) / name).string();
}

}  // namespace

TEST_CASE("solve writes its artifacts and reports convergence") {
    TempDir tmp;
    const int rc = run("solve --config " + config("affine.json") + " --out " +
                       tmp.path.string());
    CHECK(rc == 0);
    CHECK(fs::exists(tmp.path / "solution.csv"));
    CHECK(fs::exists(tmp.path / "solution.pgm"));
    CHECK(fs::exists(tmp.path / "report.json"));

    const auto doc = nlohmann::json::parse(slurp(tmp.path / "report.json"));
    CHECK(doc.at("command") == "solve");
    CHECK(doc.at("report").at("converged") == true);
    CHECK(doc.at("solution").contains("sup_norm"));
    CHECK(doc.contains("config_hash"));
    CHECK(doc.at("seed") == 0);
    // Deterministic artifacts carry no wall-clock fields.
    CHECK(doc.dump().find("time") == std::string::npos);
}

TEST_CASE("solve output is byte-identical across runs") {
    TempDir a, b;
    const std::string cfg = config("affine.json");
    REQUIRE(run("solve --config " + cfg + " --out " + a.path.string() +
                " --seed 7") == 0);
    REQUIRE(run("solve --config " + cfg + " --out " + b.path.string() +
                " --seed 7") == 0);
    CHECK(slurp(a.path / "solution.csv") == slurp(b.path / "solution.csv"));
    CHECK(slurp(a.path / "report.json") == slurp(b.path / "report.json"));
    CHECK(slurp(a.path / "solution.pgm") == slurp(b.path / "solution.pgm"));
}

TEST_CASE("triple solve emits the ordered family") {
    TempDir tmp;
    const int rc = run("triple --config " + config("sandwich.json") +
                       " --eps 0.3 --out " + tmp.path.string());
    CHECK(rc == 0);
    CHECK(fs::exists(tmp.path / "solution_minus.csv"));
    CHECK(fs::exists(tmp.path / "solution_h.csv"));
    CHECK(fs::exists(tmp.path / "solution_plus.csv"));
    const auto doc = nlohmann::json::parse(slurp(tmp.path / "report.json"));
    CHECK(doc.at("ordering").at("ordered") == true);
}

TEST_CASE("verify passes, is deterministic, and detects injected faults") {
    TempDir a, b, c;
    REQUIRE(run("verify --out " + a.path.string() + " --seed 11") == 0);
    REQUIRE(run("verify --out " + b.path.string() + " --seed 11") == 0);
    CHECK(slurp(a.path / "report.json") == slurp(b.path / "report.json"));

    const auto doc = nlohmann::json::parse(slurp(a.path / "report.json"));
    CHECK(doc.at("all_pass") == true);
    CHECK(doc.at("checks").size() == 5);
    for (const auto& check : doc.at("checks")) CHECK(check.at("pass") == true);

    CHECK(run("verify --out " + c.path.string() + " --seed 11 --inject-fault") ==
          3);
    const auto bad = nlohmann::json::parse(slurp(c.path / "report.json"));
    CHECK(bad.at("all_pass") == false);
    CHECK(bad.at("fault_injected") == true);
}

TEST_CASE("usage and configuration errors exit with code 2") {
    TempDir tmp;
    const std::string out = " --out " + tmp.path.string();
    CHECK(run("solve --config /nonexistent.json" + out) == 2);
    CHECK(run("solve" + out) == 2);
    CHECK(run("solve --config " + config("affine.json") + out +
              " --eps 1.5") == 2);
    CHECK(run("frobnicate" + out) == 2);
    CHECK(run("solve --config " + config("affine.json") + out +
              " --scheme diagonal") == 2);
    CHECK(run("") == 2);
}
