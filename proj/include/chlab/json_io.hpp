#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "chlab/analysis.hpp"
#include "chlab/hvmodel.hpp"
#include "chlab/inequality.hpp"
#include "chlab/montecarlo.hpp"
#include "chlab/quantum.hpp"
#include "chlab/scenario.hpp"

// File input and report output.
//
// Input schemas (strict UTF-8 JSON, decimal numbers):
//   scenario  {"a1_deg": x, "a2_deg": x, "b1_deg": x, "b2_deg": x}
//             or {"a1": [x,y,z], "a2": ..., "b1": ..., "b2": ...}
//   behavior  {"joint": [[J11,J12],[J21,J22]], "single1": [p1,p2],
//              "single2": [q1,q2]}
//   state     {"amplitudes": [[re,im],[re,im],[re,im],[re,im]]}
//             in basis order 00, 01, 10, 11
//   model     {"type": "factorized", "weights": [K], "r1": [2][K], "r2": [2][K]}
//             or {"type": "sequential", "weights": [K], "r1": [2][2][K],
//                 "r2": [2][2][2][K]} where r1[i][j][k] is indexed by own
//                 setting i, remote setting j, lambda k, and r2[o] holds the
//                 branch conditioned on side-1 outcome o (0 = detected,
//                 1 = not detected), each branch indexed [i][j][k].
//
// Vectors, amplitudes and model weights written with rounded decimals are
// accepted up to a 1e-6 normalization defect and rescaled exactly once;
// anything further off is rejected. Out-of-range table entries are reported
// with their exact index.
//
// Output goes through JsonEmitter: fixed 9-decimal floats (negative zero
// normalized), two-space indentation, keys in a fixed order, so identical
// inputs give byte-identical reports.

namespace chlab::io {

using Model = std::variant<FactorizedModel, SequentialModel>;

Scenario load_scenario(const std::string& path);
Behavior load_behavior(const std::string& path);
TwoQubitPureState load_state(const std::string& path);
Model load_model(const std::string& path);

// Same parsers over in-memory text; context names the source in error messages.
Scenario scenario_from_text(const std::string& text, const std::string& context);
Behavior behavior_from_text(const std::string& text, const std::string& context);
TwoQubitPureState state_from_text(const std::string& text, const std::string& context);
Model model_from_text(const std::string& text, const std::string& context);

class JsonEmitter {
public:
    explicit JsonEmitter(std::ostream& os) : os_(os) {}

    void begin_object();
    void end_object();
    void begin_array();
    void end_array();
    void key(std::string_view k);

    void number(double v);
    void integer(std::uint64_t v);
    void integer(int v) { integer(std::uint64_t(v)); }
    void boolean(bool v);
    void string(std::string_view v);
    void null();

    // Finishes the document with a trailing newline.
    void finish();

    static std::string format(double v);  // "%.9f" with -0 folded to 0

private:
    struct Level {
        bool array = false;
        bool first = true;
    };

    void begin_value();
    void newline_indent();

    std::ostream& os_;
    std::vector<Level> stack_;
    bool have_key_ = false;
    bool done_ = false;
};

void emit_behavior(JsonEmitter& e, const Behavior& b);
void emit_ch_report(JsonEmitter& e, const CHReport& r);
void emit_model(JsonEmitter& e, const FactorizedModel& m);
void emit_model(JsonEmitter& e, const SequentialModel& m);
void emit_verdict(JsonEmitter& e, const FeasibilityVerdict& v);
void emit_fit(JsonEmitter& e, const FitResult& f);
void emit_gaps(JsonEmitter& e, const IndependenceGaps& g);
void emit_counts(JsonEmitter& e, const CountsTable& c);
void emit_estimates(JsonEmitter& e, const EstimatedBehavior& est);
void emit_vertex_table(JsonEmitter& e, const VertexTable& t);

}  // namespace chlab::io
