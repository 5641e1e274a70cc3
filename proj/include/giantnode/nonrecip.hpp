#pragma once

// Nonreciprocity metrics and the four-port circulator.
//
// The circulator operating point reuses the unidirectional phase matching;
// detuning selects the handedness: delta = -Omega gives the counterclockwise
// cycle 1->4->3->2->1, delta = +Omega the clockwise cycle 1->2->3->4->1.
// Rows below are input ports, columns output ports, like ScatteringMatrix.

#include "routing.hpp"
#include "solver.hpp"
#include "types.hpp"

namespace giantnode {

// (S_ij - S_ji) / (S_ij + S_ji) for one ordered port pair (1-based)
template <typename Scalar>
Scalar nonreciprocity(const ScatteringMatrix<Scalar>& sm, int i, int j) {
  if (i < 1 || i > 4 || j < 1 || j > 4 || i == j)
    throw validation_error("nonreciprocity needs two distinct ports in 1..4");
  const auto P = sm.prob();
  const Scalar fwd = P(i - 1, j - 1), bwd = P(j - 1, i - 1);
  const Scalar sum = fwd + bwd;
  if (sum == Scalar(0))
    throw domain_error("nonreciprocity undefined: no transmission either way");
  return (fwd - bwd) / sum;
}

enum class CirculatorMode { ccw, cw, none };

inline const char* to_string(CirculatorMode m) {
  switch (m) {
    case CirculatorMode::ccw: return "ccw";
    case CirculatorMode::cw: return "cw";
    default: return "none";
  }
}

// Ideal probability matrices (row = input): ccw sends 1->4, 2->1, 3->2, 4->3.
template <typename Scalar = double>
Eigen::Matrix<Scalar, 4, 4> ideal_circulator(CirculatorMode mode) {
  Eigen::Matrix<Scalar, 4, 4> t = Eigen::Matrix<Scalar, 4, 4>::Zero();
  if (mode == CirculatorMode::ccw) {
    t(0, 3) = t(1, 0) = t(2, 1) = t(3, 2) = Scalar(1);
  } else if (mode == CirculatorMode::cw) {
    t(0, 1) = t(1, 2) = t(2, 3) = t(3, 0) = Scalar(1);
  } else {
    throw validation_error("ideal_circulator: mode must be ccw or cw");
  }
  return t;
}

// Operating parameters: unidirectional phases with the working strength and
// the handedness-selecting detuning.
template <typename Scalar = double>
NodeParams<Scalar> circulator_params(Scalar alpha, Scalar theta1, Scalar theta3,
                                     Scalar omega_int = Scalar(5),
                                     Scalar delta = Scalar(-5)) {
  return unidirectional_params<Scalar>(alpha, theta1, theta3, 1, omega_int,
                                       Eigen::Matrix<Scalar, 2, 1>::Zero(), delta);
}

// Overlap fidelity with the ideal cycle: sum of probability captured by the
// ideal permutation, normalized by Tr[T_id T_id^T] = 4.  Both matrices are
// kept in the same (row = input) orientation, which makes the score equal to
// the elementwise overlap regardless of which orientation convention is
// chosen, as long as it is applied to both.
template <typename Scalar>
Scalar circulator_fidelity(const ScatteringMatrix<Scalar>& sm, CirculatorMode mode) {
  const auto tid = ideal_circulator<Scalar>(mode);
  return (sm.prob().cwiseProduct(tid)).sum() / Scalar(4);
}

template <typename Scalar>
Scalar circulator_fidelity(const Eigen::Matrix<Scalar, 4, 4>& prob, CirculatorMode mode) {
  const auto tid = ideal_circulator<Scalar>(mode);
  return (prob.cwiseProduct(tid)).sum() / Scalar(4);
}

// Classify which cycle a scattering matrix realizes, if any.
template <typename Scalar>
CirculatorMode classify_mode(const ScatteringMatrix<Scalar>& sm,
                             Scalar threshold = Scalar(0.9)) {
  const Scalar f_ccw = circulator_fidelity(sm, CirculatorMode::ccw);
  const Scalar f_cw = circulator_fidelity(sm, CirculatorMode::cw);
  if (f_ccw >= threshold && f_ccw >= f_cw) return CirculatorMode::ccw;
  if (f_cw >= threshold) return CirculatorMode::cw;
  return CirculatorMode::none;
}

// Exact probability matrix on the circulator manifold at delta = Omega *
// (ccw: -1, cw: +1): the cycle carries weight W = Omega^2/(1+Omega^2) on the
// two "through" legs and the 1->4 / 3->2 legs are exact; the complement L =
// 1/(1+Omega^2) leaks to the reverse legs.  Used as a test oracle.
template <typename Scalar = double>
Eigen::Matrix<Scalar, 4, 4> circulator_mode_matrix(Scalar omega_int, CirculatorMode mode) {
  const Scalar l = Scalar(1) / (Scalar(1) + omega_int * omega_int);
  const Scalar w = Scalar(1) - l;
  Eigen::Matrix<Scalar, 4, 4> t = Eigen::Matrix<Scalar, 4, 4>::Zero();
  // ccw at delta = -Omega: row1 -> port4 exactly; row3 -> port2 exactly;
  // rows 2 and 4 carry the leak
  t(0, 3) = Scalar(1);
  t(1, 0) = w;
  t(1, 2) = l;
  t(2, 1) = Scalar(1);
  t(3, 0) = l;
  t(3, 2) = w;
  if (mode == CirculatorMode::cw) t.transposeInPlace();
  return t;
}

}  // namespace giantnode
