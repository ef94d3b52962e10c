#include "chlab/quantum.hpp"

#include <cmath>

namespace chlab {

namespace {

constexpr double kRadPerDeg = M_PI / 180.0;

double norm_squared(const std::array<std::complex<double>, 4>& amp) {
    double s = 0.0;
    for (const auto& a : amp) s += std::norm(a);
    return s;
}

Eigen::Vector4cd as_vector(const TwoQubitPureState& psi) {
    Eigen::Vector4cd v;
    v << psi.amp[0], psi.amp[1], psi.amp[2], psi.amp[3];
    return v;
}

// A x B on the product basis, row-major in (first qubit, second qubit).
Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

double expectation(const TwoQubitPureState& psi, const Eigen::Matrix4cd& op) {
    const Eigen::Vector4cd v = as_vector(psi);
    const std::complex<double> e = v.dot(op * v);  // conjugate-linear in the first argument
    double p = e.real();
    if (p < 0.0 && p > -1e-12) p = 0.0;  // zero probabilities round below zero
    return p;
}

double sin_sq_half_theta(const Direction& a, const Direction& b) {
    const double half_rad = 0.5 * theta_between(a, b) * kRadPerDeg;
    const double s = std::sin(half_rad);
    return s * s;
}

void require_normalized(const TwoQubitPureState& psi) {
    const double n2 = norm_squared(psi.amp);
    if (std::abs(n2 - 1.0) > 1e-12) {
        throw validation_error("two-qubit state is not normalized: |psi|^2 = " +
                               std::to_string(n2));
    }
}

}  // namespace

TwoQubitPureState TwoQubitPureState::from_amplitudes(
    const std::array<std::complex<double>, 4>& amp) {
    const double n2 = norm_squared(amp);
    if (std::abs(n2 - 1.0) > 1e-12) {
        throw validation_error("two-qubit state is not normalized: |psi|^2 = " +
                               std::to_string(n2));
    }
    return TwoQubitPureState{amp};
}

TwoQubitPureState TwoQubitPureState::singlet() {
    const double r = 1.0 / std::sqrt(2.0);
    return TwoQubitPureState{{std::complex<double>(0.0), std::complex<double>(r),
                              std::complex<double>(-r), std::complex<double>(0.0)}};
}

TwoQubitPureState TwoQubitPureState::product(std::complex<double> u0, std::complex<double> u1,
                                             std::complex<double> v0, std::complex<double> v1) {
    const double nu = std::sqrt(std::norm(u0) + std::norm(u1));
    const double nv = std::sqrt(std::norm(v0) + std::norm(v1));
    if (nu < 1e-14 || nv < 1e-14) {
        throw validation_error("cannot build a product state from a zero factor");
    }
    u0 /= nu; u1 /= nu; v0 /= nv; v1 /= nv;
    return TwoQubitPureState{{u0 * v0, u0 * v1, u1 * v0, u1 * v1}};
}

Eigen::Matrix2cd spin_up_projector(const Direction& n) {
    // (I + n.sigma)/2 with sigma the Pauli matrices.
    const std::complex<double> img(0.0, 1.0);
    Eigen::Matrix2cd p;
    p(0, 0) = 0.5 * (1.0 + n.z);
    p(0, 1) = 0.5 * (n.x - img * n.y);
    p(1, 0) = 0.5 * (n.x + img * n.y);
    p(1, 1) = 0.5 * (1.0 - n.z);
    return p;
}

double singlet_marginal() { return 0.5; }

double singlet_joint(const Direction& a, const Direction& b) {
    return 0.5 * sin_sq_half_theta(a, b);
}

double singlet_conditional(const Direction& a, const Direction& b, int conditioned_outcome) {
    if (conditioned_outcome != 1 && conditioned_outcome != -1) {
        throw validation_error("conditioned outcome must be +1 or -1");
    }
    const double s2 = sin_sq_half_theta(a, b);
    // The +1 branch is sin^2(theta/2); total probability with the 1/2 marginal
    // forces the -1 branch to cos^2(theta/2).
    return conditioned_outcome == 1 ? s2 : 1.0 - s2;
}

std::array<std::array<double, 2>, 2> outcome_probs(const TwoQubitPureState& psi,
                                                   const Direction& a, const Direction& b) {
    require_normalized(psi);
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    const Eigen::Matrix2cd pa = spin_up_projector(a);
    const Eigen::Matrix2cd pb = spin_up_projector(b);
    const Eigen::Matrix2cd ma = id - pa;
    const Eigen::Matrix2cd mb = id - pb;
    std::array<std::array<double, 2>, 2> out{};
    out[0][0] = expectation(psi, kron2(pa, pb));
    out[0][1] = expectation(psi, kron2(pa, mb));
    out[1][0] = expectation(psi, kron2(ma, pb));
    out[1][1] = expectation(psi, kron2(ma, mb));
    return out;
}

Behavior state_behavior(const TwoQubitPureState& psi, const Scenario& s) {
    require_normalized(psi);
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    Behavior b;
    for (int i = 0; i < 2; ++i) {
        b.single1[i] = expectation(psi, kron2(spin_up_projector(s.side1(i)), id));
        b.single2[i] = expectation(psi, kron2(id, spin_up_projector(s.side2(i))));
    }
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            b.joint[i][j] = expectation(
                psi, kron2(spin_up_projector(s.side1(i)), spin_up_projector(s.side2(j))));
        }
    }
    return b;
}

int schmidt_rank(const TwoQubitPureState& psi) {
    require_normalized(psi);
    const std::complex<double> det = psi.amp[0] * psi.amp[3] - psi.amp[1] * psi.amp[2];
    return std::abs(det) > 1e-10 ? 2 : 1;
}

}  // namespace chlab
