#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <variant>

#include "chlab/json_io.hpp"
#include "support/generators.hpp"

using namespace chlab;

namespace {

template <typename Fn>
void expect_error_containing(Fn&& fn, const std::vector<std::string>& fragments) {
    try {
        fn();
        FAIL_CHECK("expected a validation_error, none was thrown");
    } catch (const validation_error& e) {
        const std::string msg = e.what();
        for (const auto& fragment : fragments) {
            INFO("message: " << msg << " | fragment: " << fragment);
            CHECK(msg.find(fragment) != std::string::npos);
        }
    }
}

std::string emit_to_string(const auto& value, auto emit_fn) {
    std::ostringstream os;
    io::JsonEmitter e(os);
    emit_fn(e, value);
    e.finish();
    return os.str();
}

Behavior canonical_singlet_behavior() {
    return state_behavior(TwoQubitPureState::singlet(),
                          Scenario::from_planar_deg(0.0, 270.0, 135.0, 45.0));
}

}  // namespace

TEST_CASE("scenario files load in angle form") {
    const Scenario s = io::scenario_from_text(
        R"({"a1_deg": 0, "a2_deg": 270, "b1_deg": 135, "b2_deg": 45})", "t");
    const Scenario want = Scenario::from_planar_deg(0.0, 270.0, 135.0, 45.0);
    CHECK(s.a1.z == want.a1.z);
    CHECK(s.a2.x == want.a2.x);
    CHECK(s.b1.x == want.b1.x);
    CHECK(s.b2.x == want.b2.x);
}

TEST_CASE("scenario files load in vector form with rounded components") {
    const Scenario s = io::scenario_from_text(
        R"({"a1": [0, 0, 1], "a2": [0.707106781, 0, 0.707106781],)"
        R"( "b1": [1, 0, 0], "b2": [0, 1, 0]})",
        "t");
    CHECK(std::abs(theta_between(s.a1, s.a2) - 45.0) < 1e-6);
    CHECK(std::abs(theta_between(s.a1, s.b1) - 90.0) < 1e-6);
    // components were rescaled to an exact unit vector
    const double n2 = s.a2.x * s.a2.x + s.a2.y * s.a2.y + s.a2.z * s.a2.z;
    CHECK(std::abs(n2 - 1.0) < 1e-12);
}

TEST_CASE("scenario loader reports the offending field") {
    expect_error_containing([] { io::scenario_from_text("{}", "t"); },
                            {"t: need either a1_deg"});
    expect_error_containing(
        [] {
            io::scenario_from_text(
                R"({"a1": [0.7, 0, 0.7], "a2": [0,0,1], "b1": [0,0,1], "b2": [0,0,1]})", "t");
        },
        {"t.a1", "not a unit vector"});
    expect_error_containing(
        [] { io::scenario_from_text(R"({"a1_deg": 0, "a2_deg": 270, "b1_deg": 135})", "t"); },
        {"missing key \"b2_deg\""});
    expect_error_containing([] { io::scenario_from_text("not json at all", "t"); }, {"t: "});
}

TEST_CASE("behavior files round-trip through the emitter at nine decimals") {
    const Behavior original = canonical_singlet_behavior();
    const std::string text = emit_to_string(original, io::emit_behavior);
    const Behavior parsed = io::behavior_from_text(text, "t");
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j)
            CHECK(std::abs(parsed.joint[i][j] - original.joint[i][j]) <= 5.001e-10);
        CHECK(std::abs(parsed.single1[i] - original.single1[i]) <= 5.001e-10);
        CHECK(std::abs(parsed.single2[i] - original.single2[i]) <= 5.001e-10);
    }
    // a second emission of the parsed table is byte-identical
    CHECK(emit_to_string(parsed, io::emit_behavior) == text);
}

TEST_CASE("behavior loader validates shape and content") {
    expect_error_containing(
        [] {
            io::behavior_from_text(
                R"({"joint": [[0,0],[0,0]], "single1": [0,0,0], "single2": [0,0]})", "t");
        },
        {"t.single1", "expected an array of 2"});
    expect_error_containing(
        [] {
            io::behavior_from_text(R"({"joint": [[0,0],[0,0]], "single1": [0,0]})", "t");
        },
        {"missing key \"single2\""});
    // Frechet violation: a joint above both singles has no valid coupling
    CHECK_THROWS_AS(io::behavior_from_text(
                        R"({"joint": [[0.5,0],[0,0]], "single1": [0.2,0], "single2": [0.2,0]})",
                        "t"),
                    validation_error);
}

TEST_CASE("state files accept nine-decimal singlet amplitudes") {
    const TwoQubitPureState psi = io::state_from_text(
        R"({"amplitudes": [[0,0],[0.707106781,0],[-0.707106781,0],[0,0]]})", "t");
    const Scenario s = Scenario::from_planar_deg(0.0, 270.0, 135.0, 45.0);
    const auto got = behavior_vector(state_behavior(psi, s));
    const auto want = behavior_vector(canonical_singlet_behavior());
    for (int q = 0; q < 8; ++q) CHECK(std::abs(got[q] - want[q]) < 1e-12);
}

TEST_CASE("state loader rejects unnormalizable and malformed input") {
    expect_error_containing(
        [] {
            io::state_from_text(R"({"amplitudes": [[0.6,0],[0.5,0],[0.5,0],[0.5,0]]})", "t");
        },
        {"t: state is not normalized"});
    expect_error_containing(
        [] { io::state_from_text(R"({"amplitudes": [[0,0],[1,0],[0,0]]})", "t"); },
        {"t.amplitudes", "expected an array of 4"});
    expect_error_containing(
        [] { io::state_from_text(R"({"amplitudes": [[0,0],[1,0],[0,0],7]})", "t"); },
        {"t.amplitudes[3]", "expected an array of 2"});
}

TEST_CASE("factorized models round-trip through the emitter") {
    const FactorizedModel original = testgen::random_factorized(97, 0, 5);
    const std::string text = emit_to_string(original, [](io::JsonEmitter& e,
                                                         const FactorizedModel& m) {
        io::emit_model(e, m);
    });
    const io::Model parsed = io::model_from_text(text, "t");
    REQUIRE(std::holds_alternative<FactorizedModel>(parsed));
    const FactorizedModel& m = std::get<FactorizedModel>(parsed);
    REQUIRE(m.lambda_space.size() == original.lambda_space.size());
    double wsum = 0.0;
    for (std::size_t k = 0; k < m.lambda_space.size(); ++k) {
        CHECK(std::abs(m.lambda_space.weight(k) - original.lambda_space.weight(k)) < 1e-8);
        wsum += m.lambda_space.weight(k);
        for (int i = 0; i < 2; ++i) {
            CHECK(std::abs(m.r1[i][k] - original.r1[i][k]) <= 5.001e-10);
            CHECK(std::abs(m.r2[i][k] - original.r2[i][k]) <= 5.001e-10);
        }
    }
    CHECK(std::abs(wsum - 1.0) < 1e-12);  // reloaded weights are renormalized
}

TEST_CASE("sequential models round-trip with branch order preserved") {
    const Scenario s = Scenario::from_planar_deg(0.0, 270.0, 135.0, 45.0);
    const SequentialModel original = singlet_sequential_model(s);
    const std::string text = emit_to_string(original, [](io::JsonEmitter& e,
                                                         const SequentialModel& m) {
        io::emit_model(e, m);
    });
    const io::Model parsed = io::model_from_text(text, "t");
    REQUIRE(std::holds_alternative<SequentialModel>(parsed));
    const SequentialModel& m = std::get<SequentialModel>(parsed);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            CHECK(std::abs(m.r1[i][j][0] - original.r1[i][j][0]) <= 5.001e-10);
            CHECK(std::abs(m.r2_given_plus[i][j][0] - original.r2_given_plus[i][j][0]) <=
                  5.001e-10);
            CHECK(std::abs(m.r2_given_minus[i][j][0] - original.r2_given_minus[i][j][0]) <=
                  5.001e-10);
        }
    }
}

TEST_CASE("sequential model json indexes branches by side-1 outcome") {
    const std::string text = R"({
      "type": "sequential",
      "weights": [1.0],
      "r1": [[[0.5],[0.5]],[[0.5],[0.5]]],
      "r2": [ [[[1.0],[0.5]],[[0.5],[0.5]]], [[[0.0],[0.5]],[[0.5],[0.5]]] ]
    })";
    const io::Model parsed = io::model_from_text(text, "t");
    REQUIRE(std::holds_alternative<SequentialModel>(parsed));
    const SequentialModel& m = std::get<SequentialModel>(parsed);
    CHECK(m.r2_given_plus[0][0][0] == 1.0);   // r2[0]: conditioned on detection
    CHECK(m.r2_given_minus[0][0][0] == 0.0);  // r2[1]: conditioned on no detection
}

TEST_CASE("model loader reports exact indices and paths") {
    expect_error_containing(
        [] {
            io::model_from_text(
                R"({"type": "factorized", "weights": [0.5,0.5],)"
                R"( "r1": [[0.1],[0.2,0.3]], "r2": [[0.1,0.2],[0.3,0.4]]})",
                "t");
        },
        {"t.r1[0]", "expected 2 lambda entries, got 1"});
    expect_error_containing(
        [] {
            io::model_from_text(
                R"({"type": "factorized", "weights": ["a"], "r1": [[0],[0]], "r2": [[0],[0]]})",
                "t");
        },
        {"t.weights[0]", "expected a number"});
    expect_error_containing(
        [] {
            io::model_from_text(
                R"({"type": "quantum", "weights": [1], "r1": [[0],[0]], "r2": [[0],[0]]})",
                "t");
        },
        {"unknown model type \"quantum\""});
    expect_error_containing(
        [] {
            io::model_from_text(
                R"({"type": "factorized", "weights": [1],)"
                R"( "r1": [[0.5],[0.5]], "r2": [[0.5],[1.5]]})",
                "t");
        },
        {"r2[1][0]", "out of range"});
    expect_error_containing(
        [] {
            io::model_from_text(
                R"({"type": "factorized", "weights": [-0.25, 1.25],)"
                R"( "r1": [[0,0],[0,0]], "r2": [[0,0],[0,0]]})",
                "t");
        },
        {"weights[0]", "negative"});
}

TEST_CASE("missing files are reported by path") {
    expect_error_containing([] { io::load_scenario("/nonexistent/chlab-test.json"); },
                            {"/nonexistent/chlab-test.json", "cannot open file"});
}

TEST_CASE("the number format is fixed nine decimals with negative zero folded") {
    CHECK(io::JsonEmitter::format(0.5) == "0.500000000");
    CHECK(io::JsonEmitter::format(-0.0) == "0.000000000");
    CHECK(io::JsonEmitter::format(-2.5e-10) == "0.000000000");
    CHECK(io::JsonEmitter::format(-0.25) == "-0.250000000");
    CHECK(io::JsonEmitter::format(1.0 / 3.0) == "0.333333333");
    CHECK(io::JsonEmitter::format(0.20710678118654752) == "0.207106781");
}

TEST_CASE("the emitter lays out documents deterministically") {
    std::ostringstream os;
    io::JsonEmitter e(os);
    e.begin_object();
    e.key("x");
    e.number(0.5);
    e.key("arr");
    e.begin_array();
    e.integer(1);
    e.boolean(false);
    e.null();
    e.end_array();
    e.key("s");
    e.string("a\"b\\c");
    e.end_object();
    e.finish();
    CHECK(os.str() ==
          "{\n  \"x\": 0.500000000,\n  \"arr\": [\n    1,\n    false,\n    null\n  ],\n"
          "  \"s\": \"a\\\"b\\\\c\"\n}\n");
}

TEST_CASE("count reports carry one-based pair labels") {
    CountsTable t;
    t.source = "demo";
    t.n_per_pair = 5;
    t.seed = 9;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) t.pair[i][j] = {5, 2, 1, 1, 1};
    const std::string text = emit_to_string(t, io::emit_counts);
    CHECK(text.find("\"source\": \"demo\"") != std::string::npos);
    CHECK(text.find("\"i\": 1") != std::string::npos);
    CHECK(text.find("\"i\": 2") != std::string::npos);
    CHECK(text.find("\"i\": 0") == std::string::npos);
    CHECK(text.find("\"dd\": 2") != std::string::npos);
}

TEST_CASE("gap reports name both diagnostics explicitly") {
    IndependenceGaps g;
    g.oi = 0.3535533905932738;
    g.pi = 0.0;
    const std::string text = emit_to_string(g, io::emit_gaps);
    CHECK(text ==
          "{\n  \"outcome_independence_gap\": 0.353553391,\n"
          "  \"parameter_independence_gap\": 0.000000000\n}\n");
}
