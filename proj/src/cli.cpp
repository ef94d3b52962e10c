#include "chlab/cli.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "chlab/analysis.hpp"
#include "chlab/hvmodel.hpp"
#include "chlab/inequality.hpp"
#include "chlab/json_io.hpp"
#include "chlab/montecarlo.hpp"
#include "chlab/quantum.hpp"
#include "chlab/scenario.hpp"

namespace chlab::cli {

namespace {

struct Sink {
    std::string format = "json";
    std::string out_path;
    std::ostream* out = nullptr;

    void deliver(const std::string& payload) const {
        if (out_path.empty()) {
            *out << payload;
            return;
        }
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw validation_error(out_path + ": cannot open for writing");
        f << payload;
        if (!f.good()) throw validation_error(out_path + ": write failed");
    }

    void require_json(const std::string& sub) const {
        if (format != "json") {
            throw validation_error(sub + " emits JSON only; csv is defined for sweep and vertices");
        }
    }
};

void add_sink(CLI::App* sub, Sink& sink, const std::string& default_format = "json") {
    sink.format = default_format;
    sub->add_option("--format", sink.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", sink.out_path, "write the report to this file instead of stdout");
}

// Scenario input: the four planar angles together, or a file.
struct ScenarioArgs {
    double a = 0.0, a2 = 0.0, b = 0.0, b2 = 0.0;
    std::string path;
    CLI::Option* oa = nullptr;
    CLI::Option* oa2 = nullptr;
    CLI::Option* ob = nullptr;
    CLI::Option* ob2 = nullptr;

    void add(CLI::App* sub) {
        oa = sub->add_option("--a", a, "side-1 setting 1, planar degrees");
        oa2 = sub->add_option("--a2", a2, "side-1 setting 2, planar degrees");
        ob = sub->add_option("--b", b, "side-2 setting 1, planar degrees");
        ob2 = sub->add_option("--b2", b2, "side-2 setting 2, planar degrees");
        sub->add_option("--scenario", path, "scenario JSON file (angles or unit vectors)");
    }

    int angle_count() const {
        return int(oa->count() > 0) + int(oa2->count() > 0) + int(ob->count() > 0) +
               int(ob2->count() > 0);
    }

    bool any() const { return angle_count() > 0 || !path.empty(); }

    Scenario resolve() const {
        const int n = angle_count();
        if (!path.empty()) {
            if (n > 0) throw validation_error("give --a/--a2/--b/--b2 or --scenario, not both");
            return io::load_scenario(path);
        }
        if (n == 4) return Scenario::from_planar_deg(a, a2, b, b2);
        if (n == 0) {
            throw validation_error(
                "a scenario is required: --a --a2 --b --b2 or --scenario <file>");
        }
        throw validation_error("all four angles --a --a2 --b --b2 are required together");
    }
};

// State input: the singlet or an amplitudes file.
struct StateArgs {
    bool singlet = false;
    std::string path;

    void add(CLI::App* sub) {
        sub->add_flag("--singlet", singlet, "use the two-qubit singlet state");
        sub->add_option("--state", path, "pure-state JSON file (amplitudes)");
    }

    bool any() const { return singlet || !path.empty(); }

    TwoQubitPureState resolve() const {
        if (singlet && !path.empty()) {
            throw validation_error("give --singlet or --state, not both");
        }
        if (singlet) return TwoQubitPureState::singlet();
        if (!path.empty()) return io::load_state(path);
        throw validation_error("a state is required: --singlet or --state <file>");
    }
};

Behavior behavior_from_sources(const std::string& behavior_path, const StateArgs& state,
                               const ScenarioArgs& scenario) {
    if (!behavior_path.empty()) {
        if (state.any() || scenario.any()) {
            throw validation_error("--behavior replaces the state and scenario inputs");
        }
        return io::load_behavior(behavior_path);
    }
    return state_behavior(state.resolve(), scenario.resolve());
}

std::string ch_json(const CHReport& r) {
    std::ostringstream oss;
    io::JsonEmitter e(oss);
    io::emit_ch_report(e, r);
    e.finish();
    return oss.str();
}

void run_quantum(const StateArgs& state, const ScenarioArgs& scenario, const Sink& sink) {
    sink.require_json("quantum");
    const Behavior b = state_behavior(state.resolve(), scenario.resolve());
    std::ostringstream oss;
    io::JsonEmitter e(oss);
    io::emit_behavior(e, b);
    e.finish();
    sink.deliver(oss.str());
}

void run_ch(const std::string& behavior_path, const StateArgs& state,
            const ScenarioArgs& scenario, double tol, const Sink& sink) {
    sink.require_json("ch");
    const Behavior b = behavior_from_sources(behavior_path, state, scenario);
    sink.deliver(ch_json(ch_statistic(b, tol)));
}

void run_sweep(double from, double to, double step, double tol, const Sink& sink) {
    const TwoQubitPureState psi = TwoQubitPureState::singlet();
    const auto behavior_at = [&](double phi) { return state_behavior(psi, canonical_family(phi)); };
    const std::vector<SweepPoint> points = ch_sweep(behavior_at, from, to, step, tol);

    std::ostringstream oss;
    if (sink.format == "csv") {
        oss << "param_deg,S,lower_ok,upper_ok\n";
        for (const SweepPoint& p : points) {
            oss << io::JsonEmitter::format(p.param_deg) << ',' << io::JsonEmitter::format(p.report.S)
                << ',' << (p.report.lower_ok ? "true" : "false") << ','
                << (p.report.upper_ok ? "true" : "false") << '\n';
        }
    } else {
        io::JsonEmitter e(oss);
        e.begin_object();
        e.key("points");
        e.begin_array();
        for (const SweepPoint& p : points) {
            e.begin_object();
            e.key("param_deg");
            e.number(p.param_deg);
            e.key("S");
            e.number(p.report.S);
            e.key("lower_ok");
            e.boolean(p.report.lower_ok);
            e.key("upper_ok");
            e.boolean(p.report.upper_ok);
            e.end_object();
        }
        e.end_array();
        e.end_object();
        e.finish();
    }
    sink.deliver(oss.str());
}

void run_lhv(const std::string& model_path, double tol, const Sink& sink) {
    sink.require_json("lhv");
    if (model_path.empty()) throw validation_error("--model <file> is required");
    const io::Model m = io::load_model(model_path);
    const Behavior b =
        std::visit([](const auto& model) { return model_behavior(model); }, m);

    std::ostringstream oss;
    io::JsonEmitter e(oss);
    e.begin_object();
    e.key("behavior");
    io::emit_behavior(e, b);
    e.key("ch");
    io::emit_ch_report(e, ch_statistic(b, tol));
    e.end_object();
    e.finish();
    sink.deliver(oss.str());
}

SequentialModel sequential_from_file(const std::string& model_path) {
    if (model_path.empty()) throw validation_error("--model <file> is required");
    const io::Model m = io::load_model(model_path);
    if (const auto* factorized = std::get_if<FactorizedModel>(&m)) return as_sequential(*factorized);
    return std::get<SequentialModel>(m);
}

void run_audit(const std::string& model_path, const Sink& sink) {
    sink.require_json("audit");
    const SequentialModel m = sequential_from_file(model_path);

    std::ostringstream oss;
    io::JsonEmitter e(oss);
    e.begin_object();
    e.key("pairs");
    e.begin_array();
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const double joint = joint_prob_sequential(m, i, j);
            const double avg1 = side1_marginal_average(m, i, j);
            const double avg2 = side2_conditional_average(m, i, j);
            e.begin_object();
            e.key("i");
            e.integer(i + 1);
            e.key("j");
            e.integer(j + 1);
            e.key("joint");
            e.number(joint);
            e.key("side1_average");
            e.number(avg1);
            e.key("side2_conditional_average");
            e.number(avg2);
            e.key("product");
            e.number(avg1 * avg2);
            e.key("lambda_covariance");
            e.number(lambda_covariance(m, i, j));
            e.key("difference");
            e.number(joint - avg1 * avg2);
            e.end_object();
        }
    }
    e.end_array();
    e.end_object();
    e.finish();
    sink.deliver(oss.str());
}

void run_independence(const std::string& model_path, const StateArgs& state,
                      const ScenarioArgs& scenario, const Sink& sink) {
    sink.require_json("independence");
    IndependenceGaps g;
    if (!model_path.empty()) {
        if (state.any() || scenario.any()) {
            throw validation_error("--model replaces the state and scenario inputs");
        }
        g = independence_gaps(sequential_from_file(model_path));
    } else {
        g = independence_gaps(state.resolve(), scenario.resolve());
    }
    std::ostringstream oss;
    io::JsonEmitter e(oss);
    io::emit_gaps(e, g);
    e.finish();
    sink.deliver(oss.str());
}

void run_lp(const std::string& behavior_path, const StateArgs& state,
            const ScenarioArgs& scenario, double tol, const Sink& sink) {
    sink.require_json("lp");
    const Behavior b = behavior_from_sources(behavior_path, state, scenario);
    const FeasibilityVerdict v = local_feasibility(b, tol);
    std::ostringstream oss;
    io::JsonEmitter e(oss);
    io::emit_verdict(e, v);
    e.finish();
    sink.deliver(oss.str());
}

void run_fit(const std::string& behavior_path, const StateArgs& state,
             const ScenarioArgs& scenario, std::size_t lambda_count, std::uint64_t budget,
             int starts, std::uint64_t seed, const Sink& sink) {
    sink.require_json("fit");
    const Behavior b = behavior_from_sources(behavior_path, state, scenario);
    const FitResult f = fit_factorized(b, lambda_count, budget, seed, starts);
    std::ostringstream oss;
    io::JsonEmitter e(oss);
    io::emit_fit(e, f);
    e.finish();
    sink.deliver(oss.str());
}

void run_mc(const std::string& model_path, const std::string& behavior_path,
            const StateArgs& state, const ScenarioArgs& scenario, std::uint64_t n,
            std::uint64_t seed, double tol, const Sink& sink, std::ostream& err) {
    sink.require_json("mc");
    const int sources = int(!model_path.empty()) + int(!behavior_path.empty()) + int(state.any());
    if (sources != 1) {
        throw validation_error("give exactly one source: --model, --behavior, or a state");
    }

    CountsTable counts;
    if (!model_path.empty()) {
        const io::Model m = io::load_model(model_path);
        counts = std::visit([&](const auto& model) { return simulate(model, n, seed); }, m);
    } else if (!behavior_path.empty()) {
        counts = simulate(io::load_behavior(behavior_path), n, seed, "behavior");
    } else {
        const Behavior b = state_behavior(state.resolve(), scenario.resolve());
        counts = simulate(b, n, seed, state.singlet ? "singlet" : "state");
    }

    const EstimatedBehavior est = estimate_behavior(counts);

    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            err << "pair=(" << (i + 1) << "," << (j + 1) << ") n=" << counts.pair[i][j].n
                << " p12_hat=" << io::JsonEmitter::format(est.behavior.joint[i][j])
                << " se=" << io::JsonEmitter::format(est.joint_se[i][j]) << "\n";
        }
    }

    // Finite samples sit a few standard errors off the exact table, so the
    // validity slack scales with the largest standard error.
    double max_se = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) max_se = std::max(max_se, est.joint_se[i][j]);
        max_se = std::max({max_se, est.single1_se[i], est.single2_se[i]});
    }
    const double slack = std::max(1e-12, 10.0 * max_se);
    const CHReport report = ch_statistic(est.behavior, tol, slack);

    const double se_S = std::sqrt(
        est.joint_se[0][0] * est.joint_se[0][0] + est.joint_se[0][1] * est.joint_se[0][1] +
        est.joint_se[1][0] * est.joint_se[1][0] + est.joint_se[1][1] * est.joint_se[1][1] +
        est.single1_se[1] * est.single1_se[1] + est.single2_se[0] * est.single2_se[0]);

    std::ostringstream oss;
    io::JsonEmitter e(oss);
    e.begin_object();
    e.key("counts");
    io::emit_counts(e, counts);
    e.key("estimates");
    io::emit_estimates(e, est);
    e.key("ch");
    io::emit_ch_report(e, report);
    e.key("se_S");
    e.number(se_S);
    e.end_object();
    e.finish();
    sink.deliver(oss.str());
}

void run_vertices(const Sink& sink) {
    const VertexTable t = vertex_table();
    std::ostringstream oss;
    if (sink.format == "csv") {
        oss << "id,d1_0,d1_1,d2_0,d2_1,S\n";
        for (const VertexEntry& v : t.entries) {
            oss << v.strategy.id << ',' << v.strategy.d1[0] << ',' << v.strategy.d1[1] << ','
                << v.strategy.d2[0] << ',' << v.strategy.d2[1] << ','
                << io::JsonEmitter::format(v.S) << '\n';
        }
    } else {
        io::JsonEmitter e(oss);
        io::emit_vertex_table(e, t);
        e.finish();
    }
    sink.deliver(oss.str());
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"clauser-horne inequality laboratory: quantum predictions, hidden-variable "
                 "models, local-polytope feasibility, and seeded simulation"};
    app.require_subcommand(1);

    // quantum
    auto* quantum = app.add_subcommand("quantum", "behavior table of a pure state");
    StateArgs quantum_state;
    ScenarioArgs quantum_scenario;
    Sink quantum_sink;
    quantum_state.add(quantum);
    quantum_scenario.add(quantum);
    add_sink(quantum, quantum_sink);
    quantum->callback([&] { run_quantum(quantum_state, quantum_scenario, quantum_sink); });

    // ch
    auto* ch = app.add_subcommand("ch", "CH statistic and bound check");
    std::string ch_behavior;
    StateArgs ch_state;
    ScenarioArgs ch_scenario;
    Sink ch_sink;
    double ch_tol = 1e-9;
    ch->add_option("--behavior", ch_behavior, "behavior JSON file");
    ch_state.add(ch);
    ch_scenario.add(ch);
    ch->add_option("--tol", ch_tol, "bound tolerance")->check(CLI::PositiveNumber);
    add_sink(ch, ch_sink);
    ch->callback([&] { run_ch(ch_behavior, ch_state, ch_scenario, ch_tol, ch_sink); });

    // sweep
    auto* sweep = app.add_subcommand(
        "sweep", "CH statistic of the singlet over the one-parameter planar family");
    double sweep_from = 0.0, sweep_to = 90.0, sweep_step = 1.0, sweep_tol = 1e-9;
    Sink sweep_sink;
    sweep->add_option("--from", sweep_from, "first angle, degrees");
    sweep->add_option("--to", sweep_to, "last angle, degrees");
    sweep->add_option("--step", sweep_step, "grid step, degrees")->check(CLI::PositiveNumber);
    sweep->add_option("--tol", sweep_tol, "bound tolerance")->check(CLI::PositiveNumber);
    add_sink(sweep, sweep_sink, "csv");
    sweep->callback([&] { run_sweep(sweep_from, sweep_to, sweep_step, sweep_tol, sweep_sink); });

    // lhv
    auto* lhv = app.add_subcommand("lhv", "behavior and CH report of a hidden-variable model");
    std::string lhv_model;
    double lhv_tol = 1e-9;
    Sink lhv_sink;
    lhv->add_option("--model", lhv_model, "model JSON file");
    lhv->add_option("--tol", lhv_tol, "bound tolerance")->check(CLI::PositiveNumber);
    add_sink(lhv, lhv_sink);
    lhv->callback([&] { run_lhv(lhv_model, lhv_tol, lhv_sink); });

    // audit
    auto* audit = app.add_subcommand(
        "audit", "per-pair factorization audit: joint vs product of averages, covariance");
    std::string audit_model;
    Sink audit_sink;
    audit->add_option("--model", audit_model, "model JSON file");
    add_sink(audit, audit_sink);
    audit->callback([&] { run_audit(audit_model, audit_sink); });

    // independence
    auto* indep = app.add_subcommand(
        "independence", "outcome- and parameter-independence gaps of a model or state");
    std::string indep_model;
    StateArgs indep_state;
    ScenarioArgs indep_scenario;
    Sink indep_sink;
    indep->add_option("--model", indep_model, "model JSON file");
    indep_state.add(indep);
    indep_scenario.add(indep);
    add_sink(indep, indep_sink);
    indep->callback(
        [&] { run_independence(indep_model, indep_state, indep_scenario, indep_sink); });

    // lp
    auto* lp = app.add_subcommand("lp", "local-polytope membership with certificate");
    std::string lp_behavior;
    StateArgs lp_state;
    ScenarioArgs lp_scenario;
    Sink lp_sink;
    double lp_tol = 1e-9;
    lp->add_option("--behavior", lp_behavior, "behavior JSON file");
    lp_state.add(lp);
    lp_scenario.add(lp);
    lp->add_option("--tol", lp_tol, "feasibility tolerance")->check(CLI::PositiveNumber);
    add_sink(lp, lp_sink);
    lp->callback([&] { run_lp(lp_behavior, lp_state, lp_scenario, lp_tol, lp_sink); });

    // fit
    auto* fit = app.add_subcommand("fit", "best factorized approximation of a behavior");
    std::string fit_behavior;
    StateArgs fit_state;
    ScenarioArgs fit_scenario;
    Sink fit_sink;
    std::size_t fit_lambda = 1;
    std::uint64_t fit_budget = 20000;
    int fit_starts = 16;
    std::uint64_t fit_seed = 0;
    fit->add_option("--behavior", fit_behavior, "behavior JSON file");
    fit_state.add(fit);
    fit_scenario.add(fit);
    fit->add_option("--lambda", fit_lambda, "number of hidden values")
        ->check(CLI::PositiveNumber);
    fit->add_option("--budget", fit_budget, "objective evaluations per start")
        ->check(CLI::PositiveNumber);
    fit->add_option("--starts", fit_starts, "number of restarts")->check(CLI::PositiveNumber);
    fit->add_option("--seed", fit_seed, "search seed");
    add_sink(fit, fit_sink);
    fit->callback([&] {
        run_fit(fit_behavior, fit_state, fit_scenario, fit_lambda, fit_budget, fit_starts,
                fit_seed, fit_sink);
    });

    // mc
    auto* mc = app.add_subcommand("mc", "seeded simulation with estimates and CH report");
    std::string mc_model, mc_behavior;
    StateArgs mc_state;
    ScenarioArgs mc_scenario;
    Sink mc_sink;
    std::uint64_t mc_n = 1000000;
    std::uint64_t mc_seed = 0;
    double mc_tol = 1e-9;
    mc->add_option("--model", mc_model, "model JSON file");
    mc->add_option("--behavior", mc_behavior, "behavior JSON file");
    mc_state.add(mc);
    mc_scenario.add(mc);
    mc->add_option("--n", mc_n, "trials per setting pair")->check(CLI::PositiveNumber);
    mc->add_option("--seed", mc_seed, "simulation seed");
    mc->add_option("--tol", mc_tol, "bound tolerance")->check(CLI::PositiveNumber);
    add_sink(mc, mc_sink);
    mc->callback([&] {
        run_mc(mc_model, mc_behavior, mc_state, mc_scenario, mc_n, mc_seed, mc_tol, mc_sink, err);
    });

    // vertices
    auto* vertices =
        app.add_subcommand("vertices", "the 16 deterministic strategies and their CH values");
    Sink vertices_sink;
    add_sink(vertices, vertices_sink);
    vertices->callback([&] { run_vertices(vertices_sink); });

    for (Sink* s : {&quantum_sink, &ch_sink, &sweep_sink, &lhv_sink, &audit_sink, &indep_sink,
                    &lp_sink, &fit_sink, &mc_sink, &vertices_sink}) {
        s->out = &out;
    }

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("chlab");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(int(argv.size()), argv.data());
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    } catch (const validation_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace chlab::cli
