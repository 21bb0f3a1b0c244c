#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

struct RunResult {
    int status = -1;
    std::string out;   // stdout and stderr interleaved
};

RunResult run_cmd(const std::string& args) {
    const std::string full = std::string(DOPKIT_BIN) + " " + args + " 2>&1";
    RunResult res;
    FILE* p = popen(full.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) res.out.append(buf, n);
    const int rc = pclose(p);
    res.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return res;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
}

} // namespace

TEST_CASE("nodes subcommand prints the quantized grid") {
    RunResult r = run_cmd("nodes --N 4");
    CHECK(r.status == 0);
    CHECK(r.out.find("# {") == 0);          // embedded config header
    CHECK(r.out.find("j,x") != std::string::npos);
    CHECK(r.out.find("0,0.125") != std::string::npos);
    CHECK(r.out.find("3,0.875") != std::string::npos);
    CHECK(r.out.find("\"seed\":1") != std::string::npos);
}

TEST_CASE("bad invocations exit with the config code") {
    CHECK(run_cmd("nodes --bogus-flag").status == 1);
    CHECK(run_cmd("").status == 1);                        // missing subcommand
    CHECK(run_cmd("zeros --N 10 --c 1/3").status == 1);    // k not an integer
    CHECK(run_cmd("eqm --c 0.5 --grid 50").status == 1);   // float c refused

    spit("cli_broken.json", "{\n  \"N\": 10,\n  nope\n}");
    RunResult r = run_cmd("zeros --config cli_broken.json");
    CHECK(r.status == 1);
    CHECK(r.out.find("line 3") != std::string::npos);

    spit("cli_badkey.json", "{\"N\": 10, \"c\": \"1/2\", \"mystery\": 4}");
    RunResult r2 = run_cmd("zeros --config cli_badkey.json");
    CHECK(r2.status == 1);
    CHECK(r2.out.find("mystery") != std::string::npos);
}

TEST_CASE("a config file drives a run and flags override it") {
    spit("cli_run.json",
         R"({"weight": {"kind": "krawtchouk", "p": 0.6}, "N": 8, "c": "1/2", "seed": 3})");
    RunResult r = run_cmd("zeros --config cli_run.json --format csv");
    CHECK(r.status == 0);
    CHECK(r.out.find("\"p\":0.6") != std::string::npos);
    CHECK(r.out.find("i,zero,nearest_node,offset") != std::string::npos);

    // four zeros for k = N/2 = 4
    int rows = 0;
    std::istringstream lines(r.out);
    std::string line;
    while (std::getline(lines, line))
        if (!line.empty() && line[0] >= '0' && line[0] <= '9') ++rows;
    CHECK(rows == 4);

    RunResult r2 = run_cmd("zeros --config cli_run.json --k 3");
    CHECK(r2.status == 0);
}

TEST_CASE("sampling output is byte-identical for a fixed seed") {
    const std::string base = "sample --N 8 --c 1/2 --p 0.6 --count 40 --seed 7 --out ";
    CHECK(run_cmd(base + "cli_sample_a.csv").status == 0);
    CHECK(run_cmd(base + "cli_sample_b.csv").status == 0);
    CHECK(run_cmd("sample --N 8 --c 1/2 --p 0.6 --count 40 --seed 8 --out cli_sample_c.csv")
              .status == 0);
    const std::string a = slurp("cli_sample_a.csv");
    CHECK(a == slurp("cli_sample_b.csv"));
    CHECK(a != slurp("cli_sample_c.csv"));
    CHECK(a.find("\"seed\":7") != std::string::npos);
}

TEST_CASE("equilibrium report is valid JSON with the resolved config") {
    RunResult r = run_cmd("eqm --p 0.8 --c 1/2 --grid 120 --format json");
    CHECK(r.status == 0);
    CHECK(r.out.find("{") == 0);
    CHECK(r.out.find("\"kkt_residual\"") != std::string::npos);
    CHECK(r.out.find("\"segments\"") != std::string::npos);
    CHECK(r.out.find("saturated") != std::string::npos);
}

TEST_CASE("forced precision fails with the numeric code where auto recovers") {
    CHECK(run_cmd("zeros --p 0.9 --N 120 --k 80 --bits 128").status == 2);
    CHECK(run_cmd("zeros --p 0.9 --N 120 --k 80").status == 0);
}

TEST_CASE("the environment can pin the precision") {
    RunResult r = run_cmd("poly --p 0.5 --N 6 --format json");
    CHECK(r.status == 0);
    CHECK(r.out.find("\"resolved_precision_bits\": 128") != std::string::npos);

    const std::string env = "DOPKIT_PRECISION_BITS=512 " + std::string(DOPKIT_BIN);
    RunResult r2;
    {
        FILE* p = popen((env + " poly --p 0.5 --N 6 --format json 2>&1").c_str(), "r");
        REQUIRE(p != nullptr);
        char buf[4096];
        std::size_t n;
        while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r2.out.append(buf, n);
        int rc = pclose(p);
        r2.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    }
    CHECK(r2.status == 0);
    CHECK(r2.out.find("\"resolved_precision_bits\": 512") != std::string::npos);

    RunResult r3;
    {
        FILE* p = popen(("DOPKIT_PRECISION_BITS=nope " + std::string(DOPKIT_BIN) +
                         " nodes --N 4 2>&1")
                            .c_str(),
                        "r");
        REQUIRE(p != nullptr);
        char buf[256];
        std::size_t n;
        while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r3.out.append(buf, n);
        int rc = pclose(p);
        r3.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    }
    CHECK(r3.status == 1);
}

TEST_CASE("acceptance small suite is deterministic and passes") {
    RunResult a = run_cmd("accept --suite small --seed 5");
    RunResult b = run_cmd("accept --suite small --seed 5");
    CHECK(a.status == 0);
    CHECK(b.status == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("PASS") != std::string::npos);
    CHECK(run_cmd("accept --suite nope").status == 1);
}

TEST_CASE("hexagon profiles include the exact tiling count") {
    RunResult r = run_cmd("hexagon --a 2 --b 2 --c 2 --m 2");
    CHECK(r.status == 0);
    CHECK(r.out.find("\"tilings\":\"20\"") != std::string::npos);
    CHECK(r.out.find("h,v,hole,particle") != std::string::npos);
    CHECK(run_cmd("hexagon --a 2 --b 2 --c 2 --m 9").status == 1);
}
