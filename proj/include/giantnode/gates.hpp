#pragma once

// Path-encoded photonic gate algebra on the unidirectional manifold.
//
// Basis order is fixed as (|up>, |down>): |up> = photon in the upper guide
// W_b, |down> = lower guide W_a.  A node acting on a right-moving photon is
//
//   U(delta_g, phi_g) = e^{-i delta_g} [ cos d,            i e^{ i phi_g} sin d ]
//                                      [ i e^{-i phi_g} sin d,           cos d ]
//
// with delta_g = atan(2 Gamma12 / Omega) and phi_g = alpha - theta1 + theta3,
// equal to the solver sub-block [[s34, s14], [s32, s12]] including the global
// phase.

#include "rng.hpp"
#include "routing.hpp"
#include "solver.hpp"
#include "types.hpp"

#include <cstdio>
#include <limits>
#include <vector>

namespace giantnode {

template <typename Scalar = double>
struct PathGate {
  using Complex = std::complex<Scalar>;
  using Mat2c = Eigen::Matrix<Complex, 2, 2>;

  Mat2c u = Mat2c::Identity();
  // provenance when built from a node (or the closed form); NaN otherwise
  Scalar delta_g = std::numeric_limits<Scalar>::quiet_NaN();
  Scalar phi_g = std::numeric_limits<Scalar>::quiet_NaN();
};

// closed-form gate from the rotation angle and phase
template <typename Scalar = double>
PathGate<Scalar> make_gate(Scalar delta_g, Scalar phi_g) {
  using Complex = std::complex<Scalar>;
  const Complex i1(0, 1);
  const Complex gp = std::exp(-i1 * delta_g);
  const Scalar c = std::cos(delta_g), s = std::sin(delta_g);
  PathGate<Scalar> g;
  g.u << gp * c, gp * i1 * std::exp(i1 * phi_g) * s,
      gp * i1 * std::exp(-i1 * phi_g) * s, gp * c;
  g.delta_g = delta_g;
  g.phi_g = phi_g;
  return g;
}

// gate from the operating strength: delta_g = atan(2 Gamma12 / Omega)
template <typename Scalar = double>
PathGate<Scalar> gate_from_strength(Scalar omega_int, Scalar phi_g,
                                    Scalar gamma12 = Scalar(1)) {
  return make_gate(std::atan2(Scalar(2) * gamma12, omega_int), phi_g);
}

// Residual of the unidirectional phase-matching constraints (odd-k manifold):
// distance of (theta2 - theta1 + phi_a + alpha) and (theta4 - theta3 + phi_b
// - alpha) from 0 mod 2pi, plus |phi_a - phi_b| mod 2pi and the distance of
// phi_a + phi_b from odd multiples of pi.
template <typename Scalar>
Scalar phase_match_residual(const NodeParams<Scalar>& p) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  auto dist0 = [](Scalar x) {  // distance from 0 mod 2pi
    const Scalar w = wrap_phase(x);
    return std::min(w, 2 * pi - w);
  };
  const Scalar fa = p.phi_eff_a(), fb = p.phi_eff_b();
  Scalar r = dist0(p.theta[1] - p.theta[0] + fa + p.alpha);
  r = std::max(r, dist0(p.theta[3] - p.theta[2] + fb - p.alpha));
  r = std::max(r, dist0(fa - fb));
  r = std::max(r, std::abs(dist0(fa + fb) - pi));  // phi_a + phi_b at odd k pi
  return r;
}

// Build the gate a phase-matched node applies to a right-moving photon.
// Refuses nodes off the manifold or off resonance; those go through
// gate_attempt instead, which never silently normalizes.
template <typename Scalar>
PathGate<Scalar> gate_from_node(const NodeParams<Scalar>& p,
                                Scalar residual_tol = Scalar(1e-9)) {
  const Scalar res = phase_match_residual(p);
  if (res > residual_tol) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", static_cast<double>(res));
    throw validation_error(std::string("phase-matching violation: residual ") + buf);
  }
  if (p.delta != Scalar(0))
    throw validation_error("path gates are defined at delta = 0 only; use gate_attempt");

  const auto s1 = solve_port(p, 1).row;
  const auto s3 = solve_port(p, 3).row;
  PathGate<Scalar> g;
  g.u << s3[3], s1[3], s3[1], s1[1];  // [[s34, s14], [s32, s12]]
  const Scalar gamma12 = p.g[0] * p.g[1];
  g.delta_g = std::atan2(Scalar(2) * gamma12, p.omega_int);
  g.phi_g = p.alpha - p.theta[0] + p.theta[2];
  return g;
}

// The same sub-block with no preconditions: off-manifold or lossy nodes give
// a (generally non-unitary) operator, reported together with its defect.
template <typename Scalar>
struct GateAttempt {
  typename PathGate<Scalar>::Mat2c u;
  Scalar unitarity_defect;  // ||u^dag u - I||_max
};

template <typename Scalar>
GateAttempt<Scalar> gate_attempt(const NodeParams<Scalar>& p) {
  using Mat2c = typename PathGate<Scalar>::Mat2c;
  const auto s1 = solve_port(p, 1).row;
  const auto s3 = solve_port(p, 3).row;
  GateAttempt<Scalar> a;
  a.u << s3[3], s1[3], s3[1], s1[1];
  a.unitarity_defect = (a.u.adjoint() * a.u - Mat2c::Identity()).cwiseAbs().maxCoeff();
  return a;
}

// Cascade product in the paper's left-to-right notation: compose({U1, U2})
// = U1 * U2, so the sigma_x, sigma_y pair gives +i sigma_z.
template <typename Scalar>
PathGate<Scalar> compose(const std::vector<PathGate<Scalar>>& gates) {
  if (gates.empty()) throw validation_error("compose requires at least one gate");
  PathGate<Scalar> out;
  out.u = gates.front().u;
  for (std::size_t i = 1; i < gates.size(); ++i) out.u *= gates[i].u;
  return out;
}

// Controlled path gate on (auxiliary qubit) x (path qubit): the aux |0>
// branch scatters at omega_on (ideally large -> identity), the |1> branch at
// omega_off (0 -> sigma_x).  omega_off = 0, omega_on -> inf gives a CNOT up
// to branch-wise phases.
template <typename Scalar = double>
Eigen::Matrix<std::complex<Scalar>, 4, 4> controlled_gate(Scalar omega_on,
                                                          Scalar omega_off,
                                                          Scalar phi_g = 0) {
  if (omega_on < Scalar(0) || omega_off < Scalar(0))
    throw validation_error("controlled_gate strengths must be >= 0");
  using Mat4c = Eigen::Matrix<std::complex<Scalar>, 4, 4>;
  const auto on = gate_from_strength(omega_on, phi_g);
  const auto off = gate_from_strength(omega_off, phi_g);
  Mat4c cg = Mat4c::Zero();
  cg.template block<2, 2>(0, 0) = on.u;
  cg.template block<2, 2>(2, 2) = off.u;
  return cg;
}

// ---------------------------------------------------------------------------
// state-average gate fidelity

template <typename Scalar = double>
struct GateFidelity {
  Scalar state_average;  // mean |<psi| V^dag U |psi>|^2 over the state set
  Scalar closed_form;    // (|Tr V^dag U|^2 + d) / (d (d + 1))
};

// Closed-form Haar average for a d-dimensional unitary pair.
template <typename Scalar, int N>
Scalar gate_fidelity_closed(const Eigen::Matrix<std::complex<Scalar>, N, N>& actual,
                            const Eigen::Matrix<std::complex<Scalar>, N, N>& ideal) {
  const Scalar d = Scalar(N);
  const std::complex<Scalar> tr = (ideal.adjoint() * actual).trace();
  return (std::norm(tr) + d) / (d * (d + 1));
}

// the 6 single-qubit cardinal states |0>, |1>, |+>, |->, |+i>, |-i>
template <typename Scalar = double>
std::vector<Eigen::Matrix<std::complex<Scalar>, 2, 1>> cardinal_states() {
  using Complex = std::complex<Scalar>;
  using Vec2c = Eigen::Matrix<Complex, 2, 1>;
  const Scalar r = Scalar(1) / std::sqrt(Scalar(2));
  std::vector<Vec2c> states(6);
  states[0] << Complex(1, 0), Complex(0, 0);
  states[1] << Complex(0, 0), Complex(1, 0);
  states[2] << Complex(r, 0), Complex(r, 0);
  states[3] << Complex(r, 0), Complex(-r, 0);
  states[4] << Complex(r, 0), Complex(0, r);
  states[5] << Complex(r, 0), Complex(0, -r);
  return states;
}

// Mean fidelity over an explicit state set.
template <typename Scalar, int N>
Scalar gate_fidelity_over(
    const Eigen::Matrix<std::complex<Scalar>, N, N>& actual,
    const Eigen::Matrix<std::complex<Scalar>, N, N>& ideal,
    const std::vector<Eigen::Matrix<std::complex<Scalar>, N, 1>>& states) {
  if (states.empty()) throw validation_error("gate fidelity needs a nonempty state set");
  const Eigen::Matrix<std::complex<Scalar>, N, N> m = ideal.adjoint() * actual;
  Scalar acc = 0;
  for (const auto& psi : states) acc += std::norm((psi.adjoint() * m * psi).value());
  return acc / Scalar(states.size());
}

// Default scoring for 2x2 gates: 6 cardinal states plus n_haar seeded
// Haar-random states, with the closed-form Haar average alongside.
template <typename Scalar>
GateFidelity<Scalar> gate_fidelity(const Eigen::Matrix<std::complex<Scalar>, 2, 2>& actual,
                                   const Eigen::Matrix<std::complex<Scalar>, 2, 2>& ideal,
                                   int n_haar = 100, std::uint64_t seed = 20240901ULL) {
  auto states = cardinal_states<Scalar>();
  SplitMix64 rng(seed);
  states.reserve(states.size() + n_haar);
  for (int i = 0; i < n_haar; ++i) states.push_back(haar_qubit<Scalar>(rng));
  return {gate_fidelity_over<Scalar, 2>(actual, ideal, states),
          gate_fidelity_closed<Scalar, 2>(actual, ideal)};
}

}  // namespace giantnode
