#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "roughkit/io.hpp"

using namespace roughkit;

namespace {

std::filesystem::path temp_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "roughkit_io_test";
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("fmt17 round-trips doubles exactly") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int rep = 0; rep < 1000; ++rep) {
        const double v = u(rng) * std::pow(10.0, rep % 13 - 6);
        CHECK(std::strtod(fmt17(v).c_str(), nullptr) == v);
    }
    CHECK(std::strtod(fmt17(1.0 / 3.0).c_str(), nullptr) == 1.0 / 3.0);
}

TEST_CASE("path CSV: header and bit-exact round trip") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    const Eigen::VectorXd t = dyadic_times(6);
    Eigen::MatrixXd v(t.size(), 3);
    for (Eigen::Index k = 0; k < t.size(); ++k)
        for (int c = 0; c < 3; ++c) v(k, c) = g(rng);
    const SamplePath path(t, v);

    const auto file = temp_dir() / "path.csv";
    write_path_csv(file, path);

    std::ifstream in(file);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,x1,x2,x3");

    const SamplePath back = read_path_csv(file);
    CHECK(back.times == path.times);
    CHECK(back.values == path.values);

    // writing the re-read path reproduces the file byte for byte
    const auto file2 = temp_dir() / "path2.csv";
    write_path_csv(file2, back);
    std::ifstream a(file, std::ios::binary), b(file2, std::ios::binary);
    const std::string bytes_a((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    const std::string bytes_b((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    CHECK(bytes_a == bytes_b);
}

TEST_CASE("tensor CSV row: layout and round trip") {
    Eigen::VectorXd v(2);
    v << 0.5, -1.25;
    const Tensor t = exp_tensor(v, 3);
    const std::string row = tensor_csv_row(t);
    CHECK(row.substr(0, 4) == "2,3,");  // d, N, then level blocks in order

    const Tensor back = parse_tensor_csv_row(row);
    CHECK(back.dimension() == 2);
    CHECK(back.depth() == 3);
    for (int n = 0; n <= 3; ++n) CHECK(back.level(n) == t.level(n));

    CHECK_THROWS_AS(parse_tensor_csv_row("2,3,1.0"), FormatError);       // missing cells
    CHECK_THROWS_AS(parse_tensor_csv_row(row + ",0"), FormatError);      // trailing cells
}

TEST_CASE("rough path CSV: one row per cell, exact round trip") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    const Eigen::VectorXd t = dyadic_times(4);
    Eigen::MatrixXd v(t.size(), 2);
    for (Eigen::Index k = 0; k < t.size(); ++k)
        for (int c = 0; c < 2; ++c) v(k, c) = g(rng);
    const RoughPath lift = canonical_lift(SamplePath(t, v), 3, 0.7);

    const auto file = temp_dir() / "roughpath.csv";
    write_roughpath_csv(file, lift);
    const RoughPath back = read_roughpath_csv(file, 0.7);
    CHECK(back.dim == lift.dim);
    CHECK(back.depth == lift.depth);
    CHECK(back.times == lift.times);
    for (std::size_t k = 0; k < lift.increments.size(); ++k)
        for (int n = 0; n <= 3; ++n)
            CHECK(back.increments[k].level(n) == lift.increments[k].level(n));
}

TEST_CASE("table CSV: header width is enforced") {
    const auto file = temp_dir() / "table.csv";
    write_table_csv(file, {"a", "b"}, {{1.0, 2.0}, {3.0, 4.0}});
    std::ifstream in(file);
    std::string line;
    std::getline(in, line);
    CHECK(line == "a,b");
    CHECK_THROWS_AS(write_table_csv(file, {"a", "b"}, {{1.0}}), FormatError);
}

TEST_CASE("manifest: parseable and complete") {
    const auto dir = temp_dir() / "run";
    write_manifest(dir, "lift", nlohmann::json{{"depth", 3}}, 42, 0.25);
    std::ifstream in(dir / "manifest.json");
    REQUIRE(in.good());
    nlohmann::json m;
    in >> m;
    CHECK(m["command"] == "lift");
    CHECK(m["seed"] == 42);
    CHECK(m["config"]["depth"] == 3);
    CHECK(m.contains("versions"));
    CHECK(m["versions"].contains("roughkit"));
    CHECK(m.contains("wall_time_seconds"));
}
