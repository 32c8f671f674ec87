#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "remoteop/error.hpp"
#include "remoteop/json_io.hpp"
#include "remoteop/random.hpp"
#include "test_support.hpp"

namespace remoteop {
namespace {

using io::Json;
using testing::max_abs_diff;

ErrorKind kind_of(auto &&f) {
    try {
        f();
    } catch (const Error &e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::ConfigError;
}

TEST(JsonIo, StateRoundTrip) {
    random::Engine rng(1);
    const StateVector s = random::state(3, rng);
    const StateVector back = io::state_from_json(Json::parse(io::state_to_json(s).dump()));
    EXPECT_LT(phase_aligned_deviation(s, back), 1e-15);
    EXPECT_EQ(kind_of([] { io::state_from_json(Json::parse(R"({"num_qubits": 1, "amplitudes": [[1, 0]]})")); }),
              ErrorKind::DimensionMismatch);
    EXPECT_EQ(kind_of([] { io::state_from_json(Json::parse(R"({"amplitudes": "x"})")); }), ErrorKind::ParseError);
}

TEST(JsonIo, MatrixRoundTrip) {
    random::Engine rng(2);
    const CMatrix u = random::unitary(4, rng);
    EXPECT_LT(max_abs_diff(io::matrix_from_json(io::matrix_to_json(u)), u), 1e-15);
}

TEST(JsonIo, RestrictedOpRoundTrip) {
    random::Engine rng(3);
    const std::vector<RestrictedOp> ops{random::hpv_op(1, rng), random::wang_op(2, rng),
                                        random::hybrid_op(1, 1, rng), random::hybrid_op(1, 1, rng, false)};
    for (const RestrictedOp &op : ops) {
        const RestrictedOp back = io::restricted_op_from_json(Json::parse(io::restricted_op_to_json(op).dump()));
        EXPECT_EQ(back.name(), op.name());
        EXPECT_EQ(back.unitary_mode(), op.unitary_mode());
        EXPECT_LT(max_abs_diff(build(back), build(op)), 1e-15);
    }
    EXPECT_EQ(kind_of([] { io::restricted_op_from_json(Json::parse(R"({"variant": "other"})")); }),
              ErrorKind::ParseError);
}

TEST(JsonIo, RunReportShape) {
    random::Engine rng(4);
    const RestrictedOp op = random::hybrid_op(1, 0, rng);
    const StateVector xi = random::state(1, rng);
    const auto runs = run_protocol(op, xi);
    const auto fids = branch_fidelities(op, xi, runs);
    const Json rep = io::run_report("hybrid", 1, 0, runs, fids);
    EXPECT_EQ(rep["protocol"], "hybrid");
    ASSERT_EQ(rep["branches"].size(), 4u);
    EXPECT_EQ(rep["ledger"]["ebits"], 1);
    EXPECT_EQ(rep["branches"][0]["b"].size(), 1u);
    EXPECT_EQ(rep.dump(), io::run_report("hybrid", 1, 0, runs, fids).dump());

    std::ostringstream csv;
    io::write_branch_csv(csv, runs, fids);
    const std::string text = csv.str();
    EXPECT_EQ(text.substr(0, text.find('\n')), "branch,b,a,teleports,probability,fidelity");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
}

TEST(JsonIo, FileErrors) {
    EXPECT_EQ(kind_of([] { io::read_json_file("/nonexistent/file.json"); }), ErrorKind::ConfigError);
    const std::string path = ::testing::TempDir() + "bad.json";
    {
        std::ofstream(path) << "{ not json";
    }
    EXPECT_EQ(kind_of([&] { io::read_json_file(path); }), ErrorKind::ParseError);
}

} // namespace
} // namespace remoteop
