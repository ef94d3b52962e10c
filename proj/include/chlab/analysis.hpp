#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "chlab/hvmodel.hpp"
#include "chlab/quantum.hpp"
#include "chlab/scenario.hpp"

// Structural analysis of behaviors against the local set: the deterministic
// vertices, exact membership by linear programming with a separating witness
// on failure, best factorized approximation by direct search, and the outcome
// and parameter independence diagnostics that locate where a sequential model
// spends its nonlocality.

namespace chlab {

// Deterministic strategy: fixed detect/no-detect answer per local setting.
// id encodes the four bits as (d1(0) d1(1) d2(0) d2(1)) from the high bit.
struct DeterministicStrategy {
    int id = 0;
    std::array<int, 2> d1{};  // side-1 response per setting, 0 or 1
    std::array<int, 2> d2{};
};

std::array<DeterministicStrategy, 16> deterministic_strategies();

// The vertex behavior: joints d1(i)*d2(j), singles d1(i) and d2(j).
Behavior strategy_behavior(const DeterministicStrategy& v);

struct VertexEntry {
    DeterministicStrategy strategy;
    Behavior behavior;
    double S = 0.0;
};

struct VertexTable {
    std::array<VertexEntry, 16> entries;
    double max_S = 0.0;
    double min_S = 0.0;
};

VertexTable vertex_table();

// Affine witness over behavior vectors (component order as behavior_vector).
// A certificate of non-membership satisfies value <= 0 on every vertex, hence
// on every mixture of vertices, while the target sits strictly above 0.
struct Certificate {
    std::array<double, 8> coeffs{};
    double offset = 0.0;
    double value_on_target = 0.0;  // witness at the queried behavior
    double vertex_max = 0.0;       // max witness over the 16 vertices

    double evaluate(const Behavior& b) const;
};

struct FeasibilityVerdict {
    bool feasible = false;
    std::array<double, 16> weights{};        // mixture over vertices when feasible
    std::optional<Certificate> certificate;  // present exactly when infeasible
    double residual = 0.0;  // max |reconstruction - target| over the 8 components
};

// Exact membership test of a behavior in the convex hull of the deterministic
// vertices, via phase-1 simplex on the mixture equations. Feasible when the
// phase-1 objective is at most tol; otherwise the phase-1 duals are returned
// as a separating certificate.
FeasibilityVerdict local_feasibility(const Behavior& target, double tol = 1e-9);

struct FitResult {
    FactorizedModel model;
    double residual_inf = 0.0;
    double residual_l2 = 0.0;
    std::uint64_t evaluations = 0;  // objective evaluations spent, all starts
    std::uint64_t seed = 0;
};

// Best factorized approximation to a target behavior with lambda_count hidden
// values, by multi-start projected coordinate descent on the behavior-vector
// residual. Ordering of candidates is lexicographic (sup norm, then l2), so
// moves along a sup-norm plateau still make progress. budget caps objective
// evaluations per start; runs are deterministic in (seed, starts).
FitResult fit_factorized(const Behavior& target, std::size_t lambda_count, std::uint64_t budget,
                         std::uint64_t seed, int starts = 16);

// Outcome independence (oi): largest shift of the side-2 per-lambda response
// caused by conditioning on the side-1 outcome, against the unconditioned
// value. Parameter independence (pi): largest dependence of either side's
// per-lambda response on the remote setting. Both are sup norms over settings
// and lambda.
struct IndependenceGaps {
    double oi = 0.0;
    double pi = 0.0;
};

IndependenceGaps independence_gaps(const SequentialModel& m);

// A factorized model embeds with equal branches and setting-blind marginals,
// so both gaps are exactly zero by construction.
IndependenceGaps independence_gaps(const FactorizedModel& m);

// Gaps of the sequential decomposition a pure state induces: per pair, the
// side-1 marginal followed by the conditioned side-2 response. Conditioning on
// an outcome of probability below 1e-15 is skipped rather than divided by.
IndependenceGaps independence_gaps(const TwoQubitPureState& psi, const Scenario& s);

// Outcome-independence gap of a single analyzer pair, for sweeps over the
// separation angle. For the singlet this is |cos theta| / 2.
double pair_oi_gap(const TwoQubitPureState& psi, const Direction& a, const Direction& b);

// Collapses a sequential model whose gaps are within tol to a factorized one
// (branch averages). Rejects models with a genuine gap.
FactorizedModel to_factorized(const SequentialModel& m, double tol = 1e-9);

// The singlet written as a one-lambda sequential model: flat 1/2 side-1
// marginal, side-2 branches sin^2 and cos^2 of half the pair angle. Its
// behavior reproduces the projector engine's.
SequentialModel singlet_sequential_model(const Scenario& s);

}  // namespace chlab
