#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

namespace {

using nlohmann::json;

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
    json report() const { return json::parse(out); }
};

Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "remoteop");
    std::vector<const char *> argv;
    for (const std::string &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    Outcome o;
    o.code = remoteop::cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

std::string write_temp(const std::string &name, const std::string &text) {
    const std::string path = ::testing::TempDir() + name;
    std::ofstream(path) << text;
    return path;
}

TEST(CliRun, HpvEnumerateWithPositionalSeeds) {
    const Outcome o = run({"run", "--protocol", "hpv", "--d", "0", "--random-op", "--seed", "7", "--random-state",
                           "--seed", "9", "--enumerate"});
    ASSERT_EQ(o.code, 0) << o.err;
    const json r = o.report();
    ASSERT_EQ(r["branches"].size(), 4u);
    for (const json &b : r["branches"]) {
        EXPECT_NEAR(b["fidelity"].get<double>(), 1.0, 1e-12);
        EXPECT_NEAR(b["probability"].get<double>(), 0.25, 1e-10);
    }
    EXPECT_EQ(r["ledger"]["ebits"], 1);
    EXPECT_EQ(r["ledger"]["cbits"], 2);
}

TEST(CliRun, SwappingSeedsChangesTheInstance) {
    const Outcome a = run({"run", "--protocol", "hpv", "--d", "1", "--random-op", "--seed", "7", "--random-state",
                           "--seed", "9"});
    const Outcome b = run({"run", "--protocol", "hpv", "--d", "1", "--random-op", "--seed", "9", "--random-state",
                           "--seed", "7"});
    const Outcome c = run({"run", "--protocol", "hpv", "--d", "1", "--random-state", "--state-seed", "9",
                           "--random-op", "--op-seed", "7"});
    ASSERT_EQ(a.code, 0);
    EXPECT_NE(a.out, b.out);
    EXPECT_EQ(a.out, c.out);
}

TEST(CliRun, HybridLedgerAndDeterminism) {
    const std::vector<std::string> args{"run", "--protocol", "hybrid", "--n", "1", "--m", "1", "--random-op",
                                        "--seed", "3", "--random-state", "--seed", "4"};
    const Outcome a = run(args);
    ASSERT_EQ(a.code, 0) << a.err;
    const json r = a.report();
    EXPECT_EQ(r["branches"].size(), 64u);
    EXPECT_EQ(r["ledger"]["ebits"], 3);
    EXPECT_EQ(r["ledger"]["cbits"], 6);
    EXPECT_EQ(run(args).out, a.out);
}

TEST(CliRun, IdentityBlocksGiveUnitFidelity) {
    const std::string blocks = write_temp(
        "id_blocks.json",
        R"([{"dim": 2, "entries": [[[1,0],[0,0]],[[0,0],[1,0]]]}, {"dim": 2, "entries": [[[1,0],[0,0]],[[0,0],[1,0]]]}])");
    const Outcome o = run({"run", "--protocol", "hybrid", "--perm", "1,2", "--blocks-file", blocks, "--basis", "2"});
    ASSERT_EQ(o.code, 0) << o.err;
    for (const json &b : o.report()["branches"]) {
        EXPECT_NEAR(b["fidelity"].get<double>(), 1.0, 1e-15);
    }
}

TEST(CliRun, SampleAndCsv) {
    const std::string csv = ::testing::TempDir() + "branches.csv";
    const Outcome o = run({"run", "--protocol", "hybrid", "--n", "2", "--m", "1", "--random-op", "--seed", "1",
                           "--random-state", "--seed", "2", "--sample", "3", "--seed", "5", "--csv", csv});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_EQ(o.report()["branches"].size(), 3u);
    EXPECT_EQ(o.report()["mode"], "sample");
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "branch,b,a,teleports,probability,fidelity");
}

TEST(CliRun, OutFile) {
    const std::string path = ::testing::TempDir() + "report.json";
    const Outcome o = run({"run", "--protocol", "wang", "--n", "2", "--random-op", "--seed", "1", "--basis", "3",
                           "--out", path});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_TRUE(o.out.empty());
    std::ifstream in(path);
    EXPECT_EQ(json::parse(in)["branches"].size(), 16u);
}

TEST(CliRun, ToleranceFromEnvironment) {
    const std::vector<std::string> verify{"verify", "--protocol", "hybrid", "--n", "1", "--m", "1", "--random-op",
                                          "--seed", "3", "--random-state", "--seed", "4"};
    ::setenv("REMOTEOP_TOL", "1e-6", 1);
    const Outcome loose = run(verify);
    // Below rounding noise every path fails its checkpoints.
    ::setenv("REMOTEOP_TOL", "1e-300", 1);
    const Outcome strict = run(verify);
    ::setenv("REMOTEOP_TOL", "abc", 1);
    const Outcome bad = run({"run", "--protocol", "hpv", "--d", "0", "--random-op", "--seed", "1", "--basis", "0"});
    ::unsetenv("REMOTEOP_TOL");
    EXPECT_EQ(loose.code, 0);
    EXPECT_EQ(loose.report()["tolerance"], 1e-6);
    EXPECT_EQ(strict.code, 1);
    EXPECT_EQ(strict.report()["passed"], false);
    EXPECT_EQ(bad.code, 2);
}

TEST(CliRun, ConfigErrors) {
    EXPECT_EQ(run({"run", "--protocol", "hybrid", "--n", "1", "--m", "1", "--random-op", "--basis", "0"}).code, 2);
    EXPECT_EQ(run({"run", "--protocol", "hybrid", "--n", "1", "--m", "1", "--random-op", "--seed", "1"}).code, 2);
    EXPECT_EQ(run({"run", "--protocol", "hpv", "--random-op", "--seed", "1", "--basis", "0"}).code, 2);
    EXPECT_EQ(run({"run", "--protocol", "wang", "--m", "1", "--random-op", "--seed", "1", "--basis", "0"}).code, 2);
    EXPECT_EQ(run({"run", "--protocol", "nope"}).code, 2);
    EXPECT_EQ(run({"run", "--protocol", "wang", "--perm", "1,1", "--random-op", "--seed", "1", "--basis", "0"}).code,
              2);
    EXPECT_EQ(run({"run", "--enumerate", "--sample", "2"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    const std::string bad = write_temp("bad_op.json", "{ nope");
    const Outcome o = run({"run", "--op-file", bad, "--basis", "0"});
    EXPECT_EQ(o.code, 2);
    EXPECT_NE(o.err.find("ParseError"), std::string::npos);
}

TEST(CliVerify, TraceAllPaths) {
    const Outcome o = run({"verify", "--protocol", "hybrid", "--n", "1", "--m", "1", "--random-op", "--seed", "2",
                           "--random-state", "--seed", "3"});
    ASSERT_EQ(o.code, 0) << o.err;
    const json r = o.report();
    EXPECT_EQ(r["paths"], 64);
    EXPECT_EQ(r["failed"], 0);
    EXPECT_EQ(r["reports"][0]["checkpoints"].size(), 6u);
    EXPECT_EQ(run({"verify", "--protocol", "bqst", "--m", "1", "--random-op", "--seed", "1", "--basis", "0"}).code,
              2);
}

TEST(CliClassify, IdentityAndMalformed) {
    const std::string id = write_temp(
        "id4.json",
        R"({"dim": 4, "entries": [[[1,0],[0,0],[0,0],[0,0]], [[0,0],[1,0],[0,0],[0,0]],
                                     [[0,0],[0,0],[1,0],[0,0]], [[0,0],[0,0],[0,0],[1,0]]]})");
    const Outcome o = run({"classify", id});
    ASSERT_EQ(o.code, 0) << o.err;
    const json r = o.report();
    EXPECT_EQ(r["best"]["ebit_cost"], 2);
    EXPECT_EQ(r["best"]["N"], 2);
    EXPECT_EQ(r["best"]["M"], 0);
    const std::string bad = write_temp("bad_matrix.json", R"({"dim": 2, "entries": [[[1,0],[0,0]]]})");
    EXPECT_EQ(run({"classify", "--matrix-file", bad}).code, 2);
}

TEST(CliResources, Predictions) {
    const json h = run({"resources", "--protocol", "hybrid", "--n", "2", "--m", "1"}).report();
    EXPECT_EQ(h["ebits"], 4);
    EXPECT_EQ(h["cbits"], 8);
    EXPECT_EQ(h["setup_bits"], 5);
    const json p = run({"resources", "--protocol", "hpv"}).report();
    EXPECT_EQ(p["ebits"], 1);
    EXPECT_EQ(p["cbits"], 2);
}

TEST(CliResources, MatchSimulationUpToThreeQubits) {
    for (int n = 0; n <= 3; ++n) {
        for (int m = 0; n + m <= 3; ++m) {
            if (n + m == 0) {
                continue;
            }
            const std::string ns = std::to_string(n);
            const std::string ms = std::to_string(m);
            const json predicted = run({"resources", "--protocol", "hybrid", "--n", ns, "--m", ms}).report();
            const Outcome sim = run({"run", "--protocol", "hybrid", "--n", ns, "--m", ms, "--random-op", "--seed",
                                     "1", "--random-state", "--seed", "2", "--sample", "2", "--seed", "3"});
            ASSERT_EQ(sim.code, 0) << sim.err;
            const json ledger = sim.report()["ledger"];
            for (const char *key : {"ebits", "cbits", "cbits_a2b", "cbits_b2a", "setup_bits"}) {
                EXPECT_EQ(ledger[key], predicted[key]) << key << " N=" << n << " M=" << m;
            }
        }
    }
}

} // namespace
