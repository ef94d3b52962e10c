#include "chlab/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace chlab::io {

namespace {

using nlohmann::json;

json parse(const std::string& text, const std::string& context) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw validation_error(context + ": " + e.what());
    }
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const json& field(const json& j, const char* key, const std::string& ctx) {
    const auto it = j.find(key);
    if (it == j.end()) throw validation_error(ctx + ": missing key \"" + key + "\"");
    return *it;
}

double number_at(const json& j, const std::string& ctx) {
    if (!j.is_number()) throw validation_error(ctx + ": expected a number");
    return j.get<double>();
}

const json& array_at(const json& j, std::size_t size, const std::string& ctx) {
    if (!j.is_array() || j.size() != size) {
        throw validation_error(ctx + ": expected an array of " + std::to_string(size) +
                               " elements");
    }
    return j;
}

std::vector<double> number_vector(const json& j, const std::string& ctx) {
    if (!j.is_array() || j.empty()) throw validation_error(ctx + ": expected a nonempty array");
    std::vector<double> out(j.size());
    for (std::size_t q = 0; q < j.size(); ++q)
        out[q] = number_at(j[q], ctx + "[" + std::to_string(q) + "]");
    return out;
}

Direction direction_at(const json& j, const std::string& ctx) {
    array_at(j, 3, ctx);
    const double x = number_at(j[0], ctx + "[0]");
    const double y = number_at(j[1], ctx + "[1]");
    const double z = number_at(j[2], ctx + "[2]");
    const double n2 = x * x + y * y + z * z;
    if (std::abs(n2 - 1.0) > 1e-6) {
        throw validation_error(ctx + ": not a unit vector (|v|^2 = " + std::to_string(n2) + ")");
    }
    return Direction::from_vector_normalized(x, y, z);
}

Scenario scenario_from_json(const json& j, const std::string& ctx) {
    if (!j.is_object()) throw validation_error(ctx + ": expected an object");
    if (j.contains("a1_deg")) {
        return Scenario::from_planar_deg(number_at(field(j, "a1_deg", ctx), ctx + ".a1_deg"),
                                         number_at(field(j, "a2_deg", ctx), ctx + ".a2_deg"),
                                         number_at(field(j, "b1_deg", ctx), ctx + ".b1_deg"),
                                         number_at(field(j, "b2_deg", ctx), ctx + ".b2_deg"));
    }
    if (j.contains("a1")) {
        return Scenario{direction_at(field(j, "a1", ctx), ctx + ".a1"),
                        direction_at(field(j, "a2", ctx), ctx + ".a2"),
                        direction_at(field(j, "b1", ctx), ctx + ".b1"),
                        direction_at(field(j, "b2", ctx), ctx + ".b2")};
    }
    throw validation_error(ctx + ": need either a1_deg.. angles or a1.. unit vectors");
}

Behavior behavior_from_json(const json& j, const std::string& ctx) {
    if (!j.is_object()) throw validation_error(ctx + ": expected an object");
    Behavior b;
    const json& joint = array_at(field(j, "joint", ctx), 2, ctx + ".joint");
    for (int i = 0; i < 2; ++i) {
        const json& row = array_at(joint[i], 2, ctx + ".joint[" + std::to_string(i) + "]");
        for (int jj = 0; jj < 2; ++jj) {
            b.joint[i][jj] = number_at(row[jj], ctx + ".joint[" + std::to_string(i) + "][" +
                                                    std::to_string(jj) + "]");
        }
    }
    const json& s1 = array_at(field(j, "single1", ctx), 2, ctx + ".single1");
    const json& s2 = array_at(field(j, "single2", ctx), 2, ctx + ".single2");
    for (int i = 0; i < 2; ++i) {
        b.single1[i] = number_at(s1[i], ctx + ".single1[" + std::to_string(i) + "]");
        b.single2[i] = number_at(s2[i], ctx + ".single2[" + std::to_string(i) + "]");
    }
    require_valid_behavior(b);
    return b;
}

TwoQubitPureState state_from_json(const json& j, const std::string& ctx) {
    if (!j.is_object()) throw validation_error(ctx + ": expected an object");
    const json& amps = array_at(field(j, "amplitudes", ctx), 4, ctx + ".amplitudes");
    std::array<std::complex<double>, 4> amp;
    double n2 = 0.0;
    for (int q = 0; q < 4; ++q) {
        const std::string actx = ctx + ".amplitudes[" + std::to_string(q) + "]";
        const json& pair = array_at(amps[q], 2, actx);
        amp[q] = {number_at(pair[0], actx + "[0]"), number_at(pair[1], actx + "[1]")};
        n2 += std::norm(amp[q]);
    }
    if (std::abs(n2 - 1.0) > 1e-6) {
        throw validation_error(ctx + ": state is not normalized (|psi|^2 = " +
                               std::to_string(n2) + ")");
    }
    const double scale = 1.0 / std::sqrt(n2);
    for (auto& a : amp) a *= scale;
    return TwoQubitPureState::from_amplitudes(amp);
}

std::array<std::vector<double>, 2> table_2xk(const json& j, const std::string& ctx,
                                             std::size_t k) {
    array_at(j, 2, ctx);
    std::array<std::vector<double>, 2> out;
    for (int i = 0; i < 2; ++i) {
        out[i] = number_vector(j[i], ctx + "[" + std::to_string(i) + "]");
        if (out[i].size() != k) {
            throw validation_error(ctx + "[" + std::to_string(i) + "]: expected " +
                                   std::to_string(k) + " lambda entries, got " +
                                   std::to_string(out[i].size()));
        }
    }
    return out;
}

SequentialModel::Table table_2x2xk(const json& j, const std::string& ctx, std::size_t k) {
    array_at(j, 2, ctx);
    SequentialModel::Table out;
    for (int i = 0; i < 2; ++i) {
        const std::string ictx = ctx + "[" + std::to_string(i) + "]";
        const auto pair = table_2xk(j[i], ictx, k);
        out[i][0] = pair[0];
        out[i][1] = pair[1];
    }
    return out;
}

Model model_from_json(const json& j, const std::string& ctx) {
    if (!j.is_object()) throw validation_error(ctx + ": expected an object");
    const json& type = field(j, "type", ctx);
    if (!type.is_string()) throw validation_error(ctx + ".type: expected a string");
    const std::string kind = type.get<std::string>();

    std::vector<double> weights = number_vector(field(j, "weights", ctx), ctx + ".weights");
    const std::size_t k = weights.size();
    // Files carry 9-decimal weights, so the sum can drift further off 1 than
    // the in-memory contract allows; rescale small defects exactly once here.
    double wsum = 0.0;
    for (const double w : weights) wsum += w;
    if (wsum > 0.0 && std::abs(wsum - 1.0) <= 1e-6 && wsum != 1.0) {
        for (double& w : weights) w /= wsum;
    }
    LambdaSpace space = LambdaSpace::from_weights(weights);

    if (kind == "factorized") {
        auto r1 = table_2xk(field(j, "r1", ctx), ctx + ".r1", k);
        auto r2 = table_2xk(field(j, "r2", ctx), ctx + ".r2", k);
        return FactorizedModel::make(std::move(space), std::move(r1), std::move(r2));
    }
    if (kind == "sequential") {
        auto r1 = table_2x2xk(field(j, "r1", ctx), ctx + ".r1", k);
        const json& r2 = array_at(field(j, "r2", ctx), 2, ctx + ".r2");
        auto plus = table_2x2xk(r2[0], ctx + ".r2[0]", k);
        auto minus = table_2x2xk(r2[1], ctx + ".r2[1]", k);
        return SequentialModel::make(std::move(space), std::move(r1), std::move(plus),
                                     std::move(minus));
    }
    throw validation_error(ctx + ".type: unknown model type \"" + kind +
                           "\" (expected factorized or sequential)");
}

}  // namespace

Scenario load_scenario(const std::string& path) {
    return scenario_from_json(parse(slurp(path), path), path);
}
Behavior load_behavior(const std::string& path) {
    return behavior_from_json(parse(slurp(path), path), path);
}
TwoQubitPureState load_state(const std::string& path) {
    return state_from_json(parse(slurp(path), path), path);
}
Model load_model(const std::string& path) {
    return model_from_json(parse(slurp(path), path), path);
}

Scenario scenario_from_text(const std::string& text, const std::string& context) {
    return scenario_from_json(parse(text, context), context);
}
Behavior behavior_from_text(const std::string& text, const std::string& context) {
    return behavior_from_json(parse(text, context), context);
}
TwoQubitPureState state_from_text(const std::string& text, const std::string& context) {
    return state_from_json(parse(text, context), context);
}
Model model_from_text(const std::string& text, const std::string& context) {
    return model_from_json(parse(text, context), context);
}

// --- emitter ----------------------------------------------------------------

std::string JsonEmitter::format(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", v);
    std::string s(buf);
    if (s.find_first_not_of("-0.") == std::string::npos && s.find('-') == 0) {
        s.erase(0, 1);  // -0.000000000 -> 0.000000000
    }
    return s;
}

void JsonEmitter::newline_indent() {
    os_ << '\n';
    for (std::size_t q = 0; q < stack_.size(); ++q) os_ << "  ";
}

void JsonEmitter::begin_value() {
    if (stack_.empty()) return;
    Level& top = stack_.back();
    if (top.array) {
        if (!top.first) os_ << ',';
        newline_indent();
    } else {
        // inside an object a value must follow a key; key() wrote the prefix
        have_key_ = false;
    }
    top.first = false;
}

void JsonEmitter::key(std::string_view k) {
    Level& top = stack_.back();
    if (!top.first) os_ << ',';
    newline_indent();
    top.first = false;
    os_ << '"' << k << "\": ";
    have_key_ = true;
}

void JsonEmitter::begin_object() {
    begin_value();
    os_ << '{';
    stack_.push_back({false, true});
}

void JsonEmitter::end_object() {
    const bool empty = stack_.back().first;
    stack_.pop_back();
    if (!empty) newline_indent();
    os_ << '}';
}

void JsonEmitter::begin_array() {
    begin_value();
    os_ << '[';
    stack_.push_back({true, true});
}

void JsonEmitter::end_array() {
    const bool empty = stack_.back().first;
    stack_.pop_back();
    if (!empty) newline_indent();
    os_ << ']';
}

void JsonEmitter::number(double v) {
    begin_value();
    os_ << format(v);
}

void JsonEmitter::integer(std::uint64_t v) {
    begin_value();
    os_ << v;
}

void JsonEmitter::boolean(bool v) {
    begin_value();
    os_ << (v ? "true" : "false");
}

void JsonEmitter::string(std::string_view v) {
    begin_value();
    os_ << '"';
    for (const char c : v) {
        switch (c) {
            case '"': os_ << "\\\""; break;
            case '\\': os_ << "\\\\"; break;
            case '\n': os_ << "\\n"; break;
            case '\t': os_ << "\\t"; break;
            default: os_ << c;
        }
    }
    os_ << '"';
}

void JsonEmitter::null() {
    begin_value();
    os_ << "null";
}

void JsonEmitter::finish() {
    if (!done_) os_ << '\n';
    done_ = true;
}

// --- report bodies ----------------------------------------------------------

void emit_behavior(JsonEmitter& e, const Behavior& b) {
    e.begin_object();
    e.key("joint");
    e.begin_array();
    for (int i = 0; i < 2; ++i) {
        e.begin_array();
        for (int j = 0; j < 2; ++j) e.number(b.joint[i][j]);
        e.end_array();
    }
    e.end_array();
    e.key("single1");
    e.begin_array();
    for (int i = 0; i < 2; ++i) e.number(b.single1[i]);
    e.end_array();
    e.key("single2");
    e.begin_array();
    for (int j = 0; j < 2; ++j) e.number(b.single2[j]);
    e.end_array();
    e.end_object();
}

void emit_ch_report(JsonEmitter& e, const CHReport& r) {
    e.begin_object();
    e.key("S");
    e.number(r.S);
    e.key("terms");
    e.begin_array();
    for (const double t : r.terms) e.number(t);
    e.end_array();
    e.key("lower_ok");
    e.boolean(r.lower_ok);
    e.key("upper_ok");
    e.boolean(r.upper_ok);
    e.key("tol");
    e.number(r.tol);
    e.end_object();
}

void emit_model(JsonEmitter& e, const FactorizedModel& m) {
    e.begin_object();
    e.key("type");
    e.string("factorized");
    e.key("weights");
    e.begin_array();
    for (const double w : m.lambda_space.weights()) e.number(w);
    e.end_array();
    e.key("r1");
    e.begin_array();
    for (int i = 0; i < 2; ++i) {
        e.begin_array();
        for (const double v : m.r1[i]) e.number(v);
        e.end_array();
    }
    e.end_array();
    e.key("r2");
    e.begin_array();
    for (int j = 0; j < 2; ++j) {
        e.begin_array();
        for (const double v : m.r2[j]) e.number(v);
        e.end_array();
    }
    e.end_array();
    e.end_object();
}

namespace {

void emit_table(JsonEmitter& e, const SequentialModel::Table& t) {
    e.begin_array();
    for (int i = 0; i < 2; ++i) {
        e.begin_array();
        for (int j = 0; j < 2; ++j) {
            e.begin_array();
            for (const double v : t[i][j]) e.number(v);
            e.end_array();
        }
        e.end_array();
    }
    e.end_array();
}

}  // namespace

void emit_model(JsonEmitter& e, const SequentialModel& m) {
    e.begin_object();
    e.key("type");
    e.string("sequential");
    e.key("weights");
    e.begin_array();
    for (const double w : m.lambda_space.weights()) e.number(w);
    e.end_array();
    e.key("r1");
    emit_table(e, m.r1);
    e.key("r2");
    e.begin_array();
    emit_table(e, m.r2_given_plus);
    emit_table(e, m.r2_given_minus);
    e.end_array();
    e.end_object();
}

void emit_verdict(JsonEmitter& e, const FeasibilityVerdict& v) {
    e.begin_object();
    e.key("feasible");
    e.boolean(v.feasible);
    e.key("weights");
    e.begin_array();
    for (const double w : v.weights) e.number(w);
    e.end_array();
    e.key("residual");
    e.number(v.residual);
    e.key("certificate");
    if (v.certificate) {
        e.begin_object();
        e.key("coeffs");
        e.begin_array();
        for (const double c : v.certificate->coeffs) e.number(c);
        e.end_array();
        e.key("offset");
        e.number(v.certificate->offset);
        e.key("value_on_target");
        e.number(v.certificate->value_on_target);
        e.key("vertex_max");
        e.number(v.certificate->vertex_max);
        e.end_object();
    } else {
        e.null();
    }
    e.end_object();
}

void emit_fit(JsonEmitter& e, const FitResult& f) {
    e.begin_object();
    e.key("residual_inf");
    e.number(f.residual_inf);
    e.key("residual_l2");
    e.number(f.residual_l2);
    e.key("evaluations");
    e.integer(f.evaluations);
    e.key("seed");
    e.integer(f.seed);
    e.key("model");
    emit_model(e, f.model);
    e.end_object();
}

void emit_gaps(JsonEmitter& e, const IndependenceGaps& g) {
    e.begin_object();
    e.key("outcome_independence_gap");
    e.number(g.oi);
    e.key("parameter_independence_gap");
    e.number(g.pi);
    e.end_object();
}

void emit_counts(JsonEmitter& e, const CountsTable& c) {
    e.begin_object();
    e.key("source");
    e.string(c.source);
    e.key("n_per_pair");
    e.integer(c.n_per_pair);
    e.key("seed");
    e.integer(c.seed);
    e.key("pairs");
    e.begin_array();
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const PairCounts& pc = c.pair[i][j];
            e.begin_object();
            e.key("i");
            e.integer(i + 1);
            e.key("j");
            e.integer(j + 1);
            e.key("n");
            e.integer(pc.n);
            e.key("dd");
            e.integer(pc.dd);
            e.key("dn");
            e.integer(pc.dn);
            e.key("nd");
            e.integer(pc.nd);
            e.key("nn");
            e.integer(pc.nn);
            e.end_object();
        }
    }
    e.end_array();
    e.end_object();
}

void emit_estimates(JsonEmitter& e, const EstimatedBehavior& est) {
    e.begin_object();
    e.key("behavior");
    emit_behavior(e, est.behavior);
    e.key("joint_se");
    e.begin_array();
    for (int i = 0; i < 2; ++i) {
        e.begin_array();
        for (int j = 0; j < 2; ++j) e.number(est.joint_se[i][j]);
        e.end_array();
    }
    e.end_array();
    e.key("single1_se");
    e.begin_array();
    for (int i = 0; i < 2; ++i) e.number(est.single1_se[i]);
    e.end_array();
    e.key("single2_se");
    e.begin_array();
    for (int j = 0; j < 2; ++j) e.number(est.single2_se[j]);
    e.end_array();
    e.key("pooling");
    e.string(est.pooling);
    e.end_object();
}

void emit_vertex_table(JsonEmitter& e, const VertexTable& t) {
    e.begin_object();
    e.key("vertices");
    e.begin_array();
    for (const VertexEntry& v : t.entries) {
        e.begin_object();
        e.key("id");
        e.integer(v.strategy.id);
        e.key("d1");
        e.begin_array();
        e.integer(v.strategy.d1[0]);
        e.integer(v.strategy.d1[1]);
        e.end_array();
        e.key("d2");
        e.begin_array();
        e.integer(v.strategy.d2[0]);
        e.integer(v.strategy.d2[1]);
        e.end_array();
        e.key("S");
        e.number(v.S);
        e.end_object();
    }
    e.end_array();
    e.key("max_S");
    e.number(t.max_S);
    e.key("min_S");
    e.number(t.min_S);
    e.end_object();
}

}  // namespace chlab::io
