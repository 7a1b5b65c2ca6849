#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "treeten/serialize.hpp"
#include "treeten/topology.hpp"
#include "treeten/ttn.hpp"

using namespace treeten;

namespace {

std::string cli_path() {
    const char* p = std::getenv("TREETEN_CLI");
    REQUIRE_MESSAGE(p != nullptr, "TREETEN_CLI must point at the binary");
    return p;
}

int run(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE_MESSAGE(in.good(), path << " missing");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string tmp(const std::string& base) { return "/tmp/treeten_cli_" + base; }

} // namespace

TEST_CASE("build: laguerre stats and serialized net") {
    const auto out = tmp("lag");
    REQUIRE(run("build --target laguerre --tree path-sequential --L 16 --out " +
                out) == 0);
    auto csv = slurp(out + ".csv");
    CHECK(csv.find("# config_hash=") == 0);
    CHECK(csv.find("max_bond,memory_bytes") != std::string::npos);
    CHECK(csv.find("\n41,") != std::string::npos); // degree-40 polynomial

    auto net = load_net_file<double>(out + ".ttn");
    CHECK(net.max_bond_dim() == 41);
    CHECK(net.tree.vertices().size() == 16);

    CHECK(slurp(out + ".meta").find("target=laguerre") != std::string::npos);
}

TEST_CASE("build: constant is rank one") {
    const auto out = tmp("const");
    REQUIRE(run("build --target constant --tree comb --n 2 --L 4 --out " +
                out) == 0);
    CHECK(slurp(out + ".csv").find("\n1,") != std::string::npos);
}

TEST_CASE("compress: csv is deterministic for a fixed seed") {
    const auto a = tmp("cmp_a"), b = tmp("cmp_b");
    const std::string args = "compress --target laguerre --tree "
                             "path-sequential --L 10 --chi-list 8 4 2 "
                             "--samples 200 --seed 5 --out ";
    REQUIRE(run(args + a) == 0);
    REQUIRE(run(args + b) == 0);
    CHECK(slurp(a + ".csv") == slurp(b + ".csv"));
    CHECK(slurp(a + ".csv").find("chi,eps,eps_inf,memory_bytes") !=
          std::string::npos);
}

TEST_CASE("tci: learns cosh at chi 2 and reports sweeps") {
    const auto out = tmp("tci");
    REQUIRE(run("tci --target cosh --tree path-sequential --L 10 "
                "--chi-list 2 --sweeps 4 --seed 11 --out " +
                out) == 0);
    auto csv = slurp(out + ".csv");
    CHECK(csv.find("chi_max,sweep,") != std::string::npos);
    auto net = load_net_file<double>(out + ".ttn");
    CHECK(net.max_bond_dim() == 2);
}

TEST_CASE("fredholm: ex1 trace converges at small L") {
    const auto out = tmp("fred");
    REQUIRE(run("fredholm --target fredholm-ex1 --L 6 --seed 3 --out " + out) ==
            0);
    auto csv = slurp(out + ".csv");
    CHECK(csv.find("iteration,eps,max_chi") != std::string::npos);
    // last data line carries the final error; it must be at grid precision
    std::istringstream ss(csv);
    std::string line, last;
    while (std::getline(ss, line))
        if (!line.empty() && line[0] != '#' && line.find("iteration") != 0)
            last = line;
    REQUIRE(!last.empty());
    const auto c1 = last.find(','), c2 = last.find(',', c1 + 1);
    CHECK(std::stod(last.substr(c1 + 1, c2 - c1 - 1)) <= 10.0 / 64.0);
}

TEST_CASE("mi: matrix run succeeds and is square") {
    const auto out = tmp("mi");
    REQUIRE(run("mi --target multinormal --tree comb --n 3 --L 2 "
                "--samples 400 --seed 9 --out " +
                out) == 0);
    auto csv = slurp(out + ".csv");
    int rows = 0;
    bool in_matrix = false;
    std::istringstream ss(csv);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.rfind("digit,", 0) == 0) {
            in_matrix = true;
            continue;
        }
        if (in_matrix && !line.empty()) ++rows;
    }
    CHECK(rows == 6); // 3 variables x 2 digits
}

TEST_CASE("config errors exit with code 2") {
    CHECK(run("build --target nosuch --out " + tmp("bad1")) == 2);
    CHECK(run("build --target laguerre --tree nosuch --out " + tmp("bad2")) ==
          2);
    CHECK(run("build --out " + tmp("bad3")) == 2); // --target is required
    CHECK(run("fredholm --target laguerre --seed 1 --out " + tmp("bad4")) == 2);
    CHECK(run("compress --target laguerre --L 0 --seed 1 --out " + tmp("bad5")) ==
          2);
}
