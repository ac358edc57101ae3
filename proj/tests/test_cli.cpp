#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "polarq/channel.hpp"

namespace fs = std::filesystem;

namespace {

const std::string cli = POLARQ_CLI_PATH;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("polarq_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args, const std::string& stdout_path = "/dev/null") {
    const std::string cmd = cli + " " + args + " > " + stdout_path + " 2> /dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("construct is byte-for-byte deterministic") {
    TempDir dir;
    const std::string args = "construct --q 3 --n 6 --rate 0.6 --seed 7 --samples 2000 "
                             "--method mc --out ";
    REQUIRE(run(args + dir.file("a.spec")) == 0);
    REQUIRE(run(args + dir.file("b.spec")) == 0);
    const std::string a = slurp(dir.file("a.spec"));
    CHECK(!a.empty());
    CHECK(a == slurp(dir.file("b.spec")));
}

TEST_CASE("compress/decompress round trip through files") {
    TempDir dir;
    // rate-1 spec: payload carries everything, no side information needed
    REQUIRE(run("construct --q 3 --n 3 --rate 1.0 --seed 1 --method exact --out " +
                dir.file("c.spec")) == 0);
    {
        std::ofstream in(dir.file("in.txt"));
        for (int i = 0; i < 16; ++i) in << (i * 2) % 3 << "\n";
    }
    REQUIRE(run("compress --spec " + dir.file("c.spec") + " --in " + dir.file("in.txt") +
                " --out " + dir.file("s.bin")) == 0);
    REQUIRE(run("decompress --spec " + dir.file("c.spec") + " --in " + dir.file("s.bin") +
                " --out " + dir.file("out.txt")) == 0);
    CHECK(slurp(dir.file("out.txt")) == slurp(dir.file("in.txt")));
}

TEST_CASE("decompress with an explicit atom file on a noiseless channel") {
    TempDir dir;
    {
        std::ofstream ch(dir.file("noiseless.ch"));
        ch << polarq::format_channel(polarq::make_qsc(2, 0.0));
    }
    REQUIRE(run("construct --q 2 --n 3 --threshold 0.5 --seed 1 --method exact --channel " +
                dir.file("noiseless.ch") + " --out " + dir.file("c.spec")) == 0);
    {
        std::ofstream in(dir.file("in.txt"));
        std::ofstream atoms(dir.file("atoms.txt"));
        for (int i = 0; i < 16; ++i) {
            in << i % 2 << "\n";
            atoms << i % 2 << "\n";  // the output reveals the input
        }
    }
    REQUIRE(run("compress --spec " + dir.file("c.spec") + " --in " + dir.file("in.txt") +
                " --out " + dir.file("s.bin")) == 0);
    REQUIRE(run("decompress --spec " + dir.file("c.spec") + " --in " + dir.file("s.bin") +
                " --atoms " + dir.file("atoms.txt") + " --out " + dir.file("out.txt")) == 0);
    CHECK(slurp(dir.file("out.txt")) == slurp(dir.file("in.txt")));
}

TEST_CASE("simulate a full-rate spec never fails") {
    TempDir dir;
    REQUIRE(run("construct --q 3 --n 4 --rate 1.0 --seed 3 --method exact --out " +
                dir.file("c.spec")) == 0);
    REQUIRE(run("simulate --spec " + dir.file("c.spec") + " --trials 50 --seed 5 --out " +
                dir.file("sim.csv")) == 0);
    const std::string csv = slurp(dir.file("sim.csv"));
    CHECK(csv.find("\n3,4,50,0,0,") != std::string::npos);
}

TEST_CASE("profile a noiseless channel") {
    TempDir dir;
    {
        std::ofstream ch(dir.file("noiseless.ch"));
        ch << polarq::format_channel(polarq::make_qsc(3, 0.0));
    }
    REQUIRE(run("profile --channel " + dir.file("noiseless.ch") + " --n 4 --method exact --out " +
                    dir.file("p.csv"),
                dir.file("summary.txt")) == 0);
    std::istringstream csv(slurp(dir.file("p.csv")));
    std::string line;
    REQUIRE(std::getline(csv, line));
    CHECK(line == "index,h_hat,z_hat,t");
    while (std::getline(csv, line))
        CHECK(line.substr(line.size() - 4) == ",0,0");
    const std::string summary = slurp(dir.file("summary.txt"));
    CHECK(summary.find(",1,0") != std::string::npos);  // frac_low = 1, frac_high = 0
}

TEST_CASE("verification sweeps emit one row per check") {
    TempDir dir;
    REQUIRE(run("verify-inequalities --q 3 --trials 5 --seed 11 --out " + dir.file("v.csv")) == 0);
    std::istringstream csv(slurp(dir.file("v.csv")));
    std::string line;
    std::size_t rows = 0;
    REQUIRE(std::getline(csv, line));
    CHECK(line == "bound_id,inputs_digest,lhs,rhs,margin,passed");
    while (std::getline(csv, line)) {
        ++rows;
        CHECK(line.substr(line.size() - 2) == ",1");
    }
    CHECK(rows == 5 * 15);  // twelve catalog entries + two gain theorems + conditional gain
}

TEST_CASE("alpha estimation and contraction summaries") {
    TempDir dir;
    REQUIRE(run("estimate-alpha --q 2 --trials 50 --refine 20 --seed 13 --out " +
                dir.file("a.csv") + " --channel-out " + dir.file("min.ch")) == 0);
    const std::string csv = slurp(dir.file("a.csv"));
    CHECK(csv.find("alpha_estimate") != std::string::npos);
    // the minimizing channel parses back
    std::ifstream ch(dir.file("min.ch"));
    CHECK_NOTHROW(polarq::parse_channel(ch));

    REQUIRE(run("contraction --q 2 --trials 30 --seed 17 --out " + dir.file("c.csv"),
                dir.file("c_summary.txt")) == 0);
    CHECK(slurp(dir.file("c_summary.txt")).find("lambda_hat") != std::string::npos);
}

TEST_CASE("exit codes") {
    TempDir dir;
    CHECK(run("no-such-command") == 2);
    CHECK(run("construct --q 3") == 2);  // missing required flags
    CHECK(run("simulate --spec " + dir.file("missing.spec") + " --trials 1 --seed 1") == 3);
    {
        std::ofstream bad(dir.file("bad.spec"));
        bad << "POLARQ v7\n";
    }
    CHECK(run("simulate --spec " + dir.file("bad.spec") + " --trials 1 --seed 1") == 2);
    CHECK(run("verify-inequalities --q 4 --trials 1 --seed 1") == 4);  // composite alphabet
}
