#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "vexinf/io.hpp"

using namespace vexinf;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("vexinf-io-" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("format_value round-trips doubles") {
    for (double v : {0.0, 1.0, -1.0, std::numbers::pi, 1e-300, -2.5e300,
                     0.1, 1.0 / 3.0, 123456789.123456789}) {
        const std::string s = format_value(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
    CHECK(format_value(0.0) == "0");
    CHECK(format_value(2.0) == "2");
}

TEST_CASE("csv round-trip is bit exact") {
    TempDir tmp;
    const DomainPtr d = make_domain(9, 7, 0.125, Shape::Rectangle,
                                    {0.5, -1.0});
    GridFunction u(d);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (auto& x : u.values()) x = dist(rng);
    u.at(0, 0) = std::numbers::pi;
    u.at(1, 1) = 1e-300;
    u.at(2, 2) = -2.5e300;

    const fs::path file = tmp.path / "u.csv";
    write_csv(file, u);
    const GridFunction back = read_csv(file, d);
    for (std::size_t n = 0; n < d->size(); ++n)
        CHECK(back[(int)n] == u[(int)n]);

    const std::string text = slurp(file);
    CHECK(text.substr(0, 10) == "x,y,value\n");
    std::size_t rows = 0;
    for (char c : text)
        if (c == '\n') ++rows;
    CHECK(rows == 1 + d->size());
}

TEST_CASE("csv outside nodes read back as zero") {
    TempDir tmp;
    const DomainPtr disk = make_domain(17, 17, 0.0625, Shape::Disk);
    GridFunction u(disk);
    for (auto& x : u.values()) x = 7.5;
    const fs::path file = tmp.path / "disk.csv";
    write_csv(file, u);
    const GridFunction back = read_csv(file, disk);
    for (int j = 0; j < 17; ++j)
        for (int i = 0; i < 17; ++i) {
            if (disk->is_active(i, j))
                CHECK(back.at(i, j) == 7.5);
            else
                CHECK(back.at(i, j) == 0.0);
        }
}

TEST_CASE("csv reader rejects malformed input") {
    TempDir tmp;
    const DomainPtr d = make_domain(3, 3, 0.5);
    const GridFunction u = sample(d, [](double x, double y) { return x + y; });
    const fs::path file = tmp.path / "u.csv";
    write_csv(file, u);

    const std::string good = slurp(file);

    atomic_write_text(file, "a,b,c\n" + good.substr(10));
    CHECK_THROWS_AS(read_csv(file, d), std::runtime_error);

    const std::string truncated = good.substr(0, good.rfind("0."));
    atomic_write_text(file, truncated);
    CHECK_THROWS_AS(read_csv(file, d), std::runtime_error);

    atomic_write_text(file, good + "9,9,9\n");
    CHECK_THROWS_AS(read_csv(file, d), std::runtime_error);

    std::string shifted = good;
    shifted.replace(shifted.find("\n0,0,"), 5, "\n0.1,0,");
    CHECK_THROWS_AS(read_csv(file, d), std::runtime_error);

    atomic_write_text(file, good.substr(0, 10) +
                                "0,0,nan\n" + good.substr(good.find('\n', 10) + 1));
    CHECK_THROWS_AS(read_csv(file, d), std::runtime_error);

    CHECK_THROWS_AS(read_csv(tmp.path / "missing.csv", d),
                    std::runtime_error);
}

TEST_CASE("pgm export writes a normalized thumbnail") {
    TempDir tmp;
    const DomainPtr d = make_domain(5, 4, 0.25);
    const GridFunction u =
        sample(d, [](double x, double y) { return x + 2.0 * y; });
    const fs::path file = tmp.path / "u.pgm";
    write_pgm(file, u);

    std::istringstream in(slurp(file));
    std::string magic;
    int nx = 0, ny = 0, maxval = 0;
    in >> magic >> nx >> ny >> maxval;
    CHECK(magic == "P2");
    CHECK(nx == 5);
    CHECK(ny == 4);
    CHECK(maxval == 255);
    std::vector<int> pix;
    int v;
    while (in >> v) pix.push_back(v);
    REQUIRE(pix.size() == 20);
    for (int p : pix) {
        CHECK(p >= 0);
        CHECK(p <= 255);
    }
    // Row 0 is the top of the domain: pixel (0,0) is node (0, ny-1).
    CHECK(pix[0] == (int)std::lround(255.0 * (2.0 * 0.75) / 2.5));
    CHECK(pix[4] == 255);  // top-right: the maximum u(1, 0.75) = 2.5
    CHECK(pix[15] == 0);   // bottom-left: the minimum u(0, 0) = 0
    CHECK(pix.back() == (int)std::lround(255.0 * 1.0 / 2.5));

    const GridFunction flat = sample(d, [](double, double) { return 4.2; });
    write_pgm(file, flat);
    std::istringstream in2(slurp(file));
    in2 >> magic >> nx >> ny >> maxval;
    int sum = 0;
    while (in2 >> v) sum += v;
    CHECK(sum == 0);
}

TEST_CASE("atomic writes replace and clean up") {
    TempDir tmp;
    const fs::path file = tmp.path / "out.txt";
    atomic_write_text(file, "first");
    atomic_write_text(file, "second");
    CHECK(slurp(file) == "second");
    std::size_t entries = 0;
    for (const auto& e : fs::directory_iterator(tmp.path)) {
        (void)e;
        ++entries;
    }
    CHECK(entries == 1);

    CHECK_THROWS_AS(
        atomic_write_text(tmp.path / "nodir" / "out.txt", "x"),
        std::runtime_error);
}
