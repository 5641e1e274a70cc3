#pragma once

// Targeted-routing regimes and figures of merit.
//
// Two operating manifolds, both with phi_a = phi_b = pi/2 and equal couplings:
//   * trans-waveguide: photon entering the lower guide exits entirely through
//     the upper guide; requires Omega = -2 cos(2 theta2 + alpha) Gamma12 with
//     theta1 = -theta2 and theta4 - theta3 = 2 alpha + theta2 - theta1
//     (feasible only where the cosine is <= 0)
//   * unidirectional: anti-reflection (s11 = s13 = s31 = s33 = 0); requires
//     phi_a = phi_b = k pi/2 with odd k and per-guide offsets
//     theta2 - theta1 = -k pi/2 - alpha, theta4 - theta3 = -k pi/2 + alpha

#include "solver.hpp"
#include "types.hpp"

namespace giantnode {

// |S13 - S14| / (S13 + S14); 0/0 (no emission into the upper guide) -> 0
template <typename Scalar>
Scalar unidirectional_coefficient(const ScatteringMatrix<Scalar>& sm) {
  const auto P = sm.prob();
  const Scalar s13 = P(0, 2), s14 = P(0, 3);
  const Scalar sum = s13 + s14;
  if (sum == Scalar(0)) return Scalar(0);
  return std::abs(s13 - s14) / sum;
}

template <typename Scalar = double>
struct RoutingFidelities {
  Scalar f_dire;   // (S12 + S14) / row sum: fraction routed rightward
  Scalar f_trans;  // (S13 + S14) / row sum: fraction routed to the upper guide
};

template <typename Scalar>
RoutingFidelities<Scalar> routing_fidelities(const ScatteringMatrix<Scalar>& sm) {
  const auto P = sm.prob();
  const Scalar sum = P.row(0).sum();
  if (sum <= Scalar(0))
    throw domain_error("routing fidelity undefined: total port-1 output is zero");
  return {(P(0, 1) + P(0, 3)) / sum, (P(0, 2) + P(0, 3)) / sum};
}

// Build the trans-waveguide operating point.  theta3 defaults to theta2 (the
// paper's plotted slice); gamma/delta let robustness sweeps reuse the
// generator.  Gamma12 = g^2 = 1 in the units used here.
template <typename Scalar = double>
NodeParams<Scalar> trans_waveguide_params(Scalar alpha, Scalar theta2,
                                          std::optional<Scalar> theta3 = {},
                                          Eigen::Matrix<Scalar, 2, 1> gamma_e =
                                              Eigen::Matrix<Scalar, 2, 1>::Zero(),
                                          Scalar delta = 0) {
  constexpr Scalar half_pi = std::numbers::pi_v<Scalar> / 2;
  const Scalar cosv = std::cos(Scalar(2) * theta2 + alpha);
  if (cosv > Scalar(0))
    throw infeasible_error("no physical trans-waveguide point: required Omega < 0");

  NodeParams<Scalar> p;
  const Scalar t1 = -theta2;
  const Scalar t3 = theta3.value_or(theta2);
  const Scalar t4 = t3 + Scalar(2) * alpha + theta2 - t1;
  p.g.setOnes();
  p.theta << t1, theta2, t3, t4;
  p.omega_int = Scalar(-2) * cosv;
  p.alpha = alpha;
  p.gamma_e = gamma_e;
  p.phi << half_pi, half_pi;
  p.delta = delta;
  return normalize_params(p);
}

// Build the unidirectional (anti-reflection) operating point.
template <typename Scalar = double>
NodeParams<Scalar> unidirectional_params(Scalar alpha, Scalar theta1, Scalar theta3,
                                         int k = 1, Scalar omega_int = 0,
                                         Eigen::Matrix<Scalar, 2, 1> gamma_e =
                                             Eigen::Matrix<Scalar, 2, 1>::Zero(),
                                         Scalar delta = 0) {
  if (k % 2 == 0)
    throw infeasible_error(
        "anti-reflection requires odd k: even phase sums do not cancel reflections");
  const Scalar half = Scalar(k) * std::numbers::pi_v<Scalar> / 2;

  NodeParams<Scalar> p;
  p.g.setOnes();
  p.theta << theta1, theta1 - half - alpha, theta3, theta3 - half + alpha;
  p.omega_int = omega_int;
  p.alpha = alpha;
  p.gamma_e = gamma_e;
  p.phi << half, half;
  p.delta = delta;
  return normalize_params(p);
}

// Locate the Omega where the trans-waveguide split is exactly 50:50, by
// bisection on S13 - S14 over Omega in (0, 4 Gamma12].  On the feasible
// manifold Omega = -2 cos(2 theta2 + alpha), so the scan runs over alpha at
// fixed theta2 = theta3 = pi.
template <typename Scalar = double>
Scalar beamsplitter_root(Scalar tol = Scalar(1e-12), int max_iter = 200) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  auto split = [&](Scalar omega) {
    // alpha with cos(alpha) = -omega/2 at theta2 = pi; the manifold caps the
    // reachable Omega at 2 Gamma12, so the scan saturates above that
    const Scalar alpha = std::acos(std::clamp(-omega / 2, Scalar(-1), Scalar(1)));
    const auto p = trans_waveguide_params<Scalar>(alpha, pi);
    const auto P = scattering_matrix(p).prob();
    return P(0, 2) - P(0, 3);
  };
  Scalar lo = Scalar(1e-9), hi = Scalar(4);
  Scalar flo = split(lo);
  for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
    const Scalar mid = (lo + hi) / 2;
    const Scalar fm = split(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return (lo + hi) / 2;
}

// Detuning at which the trans-waveguide conversion efficiency S13 + S14 falls
// to 1/2, located by bisection; of order Gamma at the 50:50 operating point.
template <typename Scalar = double>
Scalar efficiency_half_crossing(Scalar alpha, Scalar theta2, Scalar hi = Scalar(8),
                                Scalar tol = Scalar(1e-10)) {
  auto eff = [&](Scalar delta) {
    const auto p = trans_waveguide_params<Scalar>(alpha, theta2, {},
                                                  Eigen::Matrix<Scalar, 2, 1>::Zero(), delta);
    const auto P = scattering_matrix(p).prob();
    return P(0, 2) + P(0, 3) - Scalar(0.5);
  };
  Scalar lo = 0;
  if (eff(lo) < 0) throw domain_error("efficiency below 1/2 already at delta = 0");
  while (eff(hi) > 0) hi *= 2;
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const Scalar mid = (lo + hi) / 2;
    (eff(mid) > 0 ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

}  // namespace giantnode
