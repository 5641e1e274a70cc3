#pragma once

// Path-encoded photon teleportation between two giant-atom nodes.
//
// State space: (node-1 qubit) (x) (photon path) (x) (node-N qubit), dimension
// 8, photon basis ordered (|up>, |down>) like PathGate.  The photon starts in
// |down>, node N in |0>, the input state sits on node 1.  Protocol: H on node
// N, controlled path gate at node 1, controlled path gate at node N, photon
// measurement in {up, down} followed by a conditional sigma_x on node N, then
// an X-basis measurement of node 1 (H + Z measurement) followed by a
// conditional sigma_z on node N.  With exact gates every branch returns the
// input on node N.
//
// Controlled gates: the auxiliary qubit selects the node's interatomic
// strength, |0> -> U(omega_on) (identity as omega_on -> inf), |1> ->
// U(omega_off) (sigma_x at omega_off = 0).  Photon loss enters through the
// sub-unitary scattering block of a node with gamma_e > 0; branch
// probabilities then sum to the heralding probability and reported fidelities
// are conditioned on the herald.

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "gates.hpp"
#include "rng.hpp"
#include "routing.hpp"
#include "solver.hpp"
#include "types.hpp"

namespace giantnode {

enum class MeasureMode { enumerated, sampled };

inline const char* to_string(MeasureMode m) {
  return m == MeasureMode::enumerated ? "enumerated" : "sampled";
}

// Controlled-gate working point shared by both nodes.
template <typename Scalar = double>
struct TeleportGates {
  // interatomic strength on the "do nothing" branch; infinity = exact identity
  Scalar omega_on = std::numeric_limits<Scalar>::infinity();
  // strength on the "flip the path" branch; 0 = exact sigma_x
  Scalar omega_off = 0;
  // photon dissipation rate of both atomic levels (makes the gates sub-unitary)
  Scalar gamma = 0;
};

// One path-gate branch at strength omega.  Lossless gates come from the
// closed form (and survive omega = inf); lossy ones from the scattering
// solver at the phase-matched point with gamma_e = gamma on both levels.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 2, 2> teleport_branch_gate(Scalar omega, Scalar gamma) {
  if (omega < Scalar(0)) throw validation_error("negative gate strength omega");
  if (gamma < Scalar(0)) throw validation_error("negative dissipation rate gamma");
  if (gamma == Scalar(0)) return gate_from_strength(omega, Scalar(0)).u;
  if (!std::isfinite(omega))
    throw validation_error(
        "lossy gates need finite omega_on: the sub-unitary block comes from the solver");
  auto p = unidirectional_params<Scalar>(Scalar(0), Scalar(0), Scalar(0), 1, omega,
                                         Eigen::Matrix<Scalar, 2, 1>::Constant(gamma));
  return gate_attempt(p).u;
}

namespace detail {

template <typename Scalar>
using Vec8c = Eigen::Matrix<std::complex<Scalar>, 8, 1>;
template <typename Scalar>
using Mat8c = Eigen::Matrix<std::complex<Scalar>, 8, 8>;

template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 2, 2> hadamard() {
  Eigen::Matrix<std::complex<Scalar>, 2, 2> h;
  const Scalar r = Scalar(1) / std::sqrt(Scalar(2));
  h << r, r, r, -r;
  return h;
}

// index = q1*4 + photon*2 + qN, photon 0 = up
inline int tele_index(int q1, int photon, int qn) { return q1 * 4 + photon * 2 + qn; }

// controlled path gate with the control qubit in front: |0><0| (x) Uon + |1><1| (x) Uoff
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 4, 4> control_first(
    const Eigen::Matrix<std::complex<Scalar>, 2, 2>& uon,
    const Eigen::Matrix<std::complex<Scalar>, 2, 2>& uoff) {
  Eigen::Matrix<std::complex<Scalar>, 4, 4> m =
      Eigen::Matrix<std::complex<Scalar>, 4, 4>::Zero();
  m.template topLeftCorner<2, 2>() = uon;
  m.template bottomRightCorner<2, 2>() = uoff;
  return m;
}

// same gate on a (photon (x) control) pair, control behind the photon
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 4, 4> control_last(
    const Eigen::Matrix<std::complex<Scalar>, 2, 2>& uon,
    const Eigen::Matrix<std::complex<Scalar>, 2, 2>& uoff) {
  Eigen::Matrix<std::complex<Scalar>, 4, 4> m =
      Eigen::Matrix<std::complex<Scalar>, 4, 4>::Zero();
  for (int c = 0; c < 2; ++c) {
    const auto& u = (c == 0) ? uon : uoff;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) m(a * 2 + c, b * 2 + c) = u(a, b);
  }
  return m;
}

// run the circuit up to (and including) both controlled gates
template <typename Scalar>
Vec8c<Scalar> entangled_state(const Eigen::Matrix<std::complex<Scalar>, 2, 1>& q1_init,
                              const TeleportGates<Scalar>& gates) {
  using C = std::complex<Scalar>;
  using M2 = Eigen::Matrix<C, 2, 2>;
  const M2 uon = teleport_branch_gate(gates.omega_on, gates.gamma);
  const M2 uoff = teleport_branch_gate(gates.omega_off, gates.gamma);
  const M2 id2 = M2::Identity();

  Eigen::Matrix<C, 2, 1> photon;
  photon << C(0), C(1);  // |down>
  Eigen::Matrix<C, 2, 1> qn;
  qn << C(1), C(0);  // |0>

  Vec8c<Scalar> psi =
      Eigen::kroneckerProduct(q1_init, Eigen::kroneckerProduct(photon, qn).eval()).eval();
  // H on node N
  psi = Eigen::kroneckerProduct(Eigen::Matrix<C, 4, 4>::Identity(), hadamard<Scalar>()) * psi;
  // node 1 controls the photon
  psi = Eigen::kroneckerProduct(control_first(uon, uoff), id2) * psi;
  // node N controls the photon
  psi = Eigen::kroneckerProduct(id2, control_last(uon, uoff)) * psi;
  return psi;
}

}  // namespace detail

// Which classical corrections the receiver applies; disabling one is only
// useful to demonstrate that the protocol then fails.
struct Corrections {
  bool sigma_x = true;  // on node N when the photon is found |up>
  bool sigma_z = true;  // on node N when node 1's X-basis outcome is |1>
};

template <typename Scalar = double>
struct TeleportBranch {
  int photon_outcome = 0;  // 0 = up, 1 = down
  int q1_outcome = 0;      // Z outcome after the Hadamard
  bool corrected_x = false;
  bool corrected_z = false;
  Scalar probability = 0;  // exact branch probability (sums to the herald)
  Scalar fidelity = 0;     // |<input|output>|^2 after corrections
  Eigen::Matrix<std::complex<Scalar>, 2, 1> output;  // normalized node-N state
  long long shots = 0;     // sampled-mode occupancy
};

template <typename Scalar = double>
struct TeleportResult {
  std::array<TeleportBranch<Scalar>, 4> branches;
  Scalar fidelity = 0;         // herald-conditioned average fidelity
  Scalar fidelity_stderr = 0;  // nonzero only in sampled mode
  Scalar herald = 1;           // heralding probability (enumerated) or fraction (sampled)
  long long shots = 0;         // total sampled shots (0 in enumerated mode)
  Eigen::Matrix<std::complex<Scalar>, 2, 1> output;  // dominant-branch output
};

template <typename Scalar = double>
TeleportResult<Scalar> run_teleport(const Eigen::Matrix<std::complex<Scalar>, 2, 1>& input,
                                    const TeleportGates<Scalar>& gates = {},
                                    std::uint64_t seed = 1,
                                    MeasureMode mode = MeasureMode::enumerated,
                                    long long shots = 10000, Corrections corr = {}) {
  using C = std::complex<Scalar>;
  using M2 = Eigen::Matrix<C, 2, 2>;
  using V2 = Eigen::Matrix<C, 2, 1>;
  if (std::abs(input.norm() - Scalar(1)) > Scalar(1e-9))
    throw validation_error("teleport input state must be normalized");
  if (mode == MeasureMode::sampled && shots < 1)
    throw validation_error("sampled mode needs at least one shot");

  auto psi = detail::entangled_state<Scalar>(input, gates);

  M2 sx, sz;
  sx << C(0), C(1), C(1), C(0);
  sz << C(1), C(0), C(0), C(-1);
  const auto h = detail::hadamard<Scalar>();

  TeleportResult<Scalar> res;
  Scalar herald = 0, mean_acc = 0;
  int slot = 0;
  for (int ph = 0; ph < 2; ++ph) {
    // project the photon, correct, rotate node 1 into the X basis
    detail::Vec8c<Scalar> psi1 = detail::Vec8c<Scalar>::Zero();
    for (int q1 = 0; q1 < 2; ++q1)
      for (int qn = 0; qn < 2; ++qn) {
        const int idx = detail::tele_index(q1, ph, qn);
        psi1(idx) = psi(idx);
      }
    const bool do_x = (ph == 0) && corr.sigma_x;
    if (do_x) {
      for (int q1 = 0; q1 < 2; ++q1) {
        std::swap(psi1(detail::tele_index(q1, ph, 0)), psi1(detail::tele_index(q1, ph, 1)));
      }
    }
    detail::Vec8c<Scalar> psi2 = detail::Vec8c<Scalar>::Zero();
    for (int b = 0; b < 2; ++b)
      for (int qn = 0; qn < 2; ++qn)
        for (int a = 0; a < 2; ++a)
          psi2(detail::tele_index(a, ph, qn)) += h(a, b) * psi1(detail::tele_index(b, ph, qn));

    for (int q1 = 0; q1 < 2; ++q1) {
      V2 v;
      v << psi2(detail::tele_index(q1, ph, 0)), psi2(detail::tele_index(q1, ph, 1));
      const bool do_z = (q1 == 1) && corr.sigma_z;
      if (do_z) v = sz * v;
      const Scalar pr = v.squaredNorm();
      auto& br = res.branches[slot++];
      br.photon_outcome = ph;
      br.q1_outcome = q1;
      br.corrected_x = do_x;
      br.corrected_z = do_z;
      br.probability = pr;
      if (pr > Scalar(0)) {
        br.output = v / v.norm();
        br.fidelity = std::norm(input.dot(br.output));
      } else {
        br.output = V2::Zero();
        br.fidelity = 0;
      }
      herald += pr;
      mean_acc += pr * br.fidelity;
    }
  }
  if (herald <= Scalar(0)) throw domain_error("teleport herald probability is zero");

  if (mode == MeasureMode::enumerated) {
    res.fidelity = mean_acc / herald;
    res.herald = herald;
  } else {
    SplitMix64 rng(seed);
    long long heralded = 0;
    Scalar sum = 0, sumsq = 0;
    for (long long s = 0; s < shots; ++s) {
      const Scalar u = Scalar(rng.uniform());
      Scalar acc = 0;
      int hit = -1;
      for (int b = 0; b < 4; ++b) {
        acc += res.branches[b].probability;
        if (u < acc) {
          hit = b;
          break;
        }
      }
      if (hit < 0) continue;  // photon lost, shot not heralded
      ++res.branches[hit].shots;
      ++heralded;
      const Scalar f = res.branches[hit].fidelity;
      sum += f;
      sumsq += f * f;
    }
    if (heralded == 0) throw domain_error("no heralded shots; raise the shot count");
    res.shots = shots;
    res.herald = Scalar(heralded) / Scalar(shots);
    res.fidelity = sum / Scalar(heralded);
    if (heralded > 1) {
      const Scalar var =
          std::max(Scalar(0), (sumsq - Scalar(heralded) * res.fidelity * res.fidelity) /
                                  Scalar(heralded - 1));
      res.fidelity_stderr = std::sqrt(var / Scalar(heralded));
    }
  }

  int best = 0;
  for (int b = 1; b < 4; ++b)
    if (res.branches[b].probability > res.branches[best].probability) best = b;
  res.output = res.branches[best].output;
  return res;
}

template <typename Scalar = double>
struct EntangleBranch {
  int photon_outcome = 0;
  Scalar probability = 0;
  Scalar fidelity = 0;  // overlap with (|00> + |11>)/sqrt(2) after correction
  long long shots = 0;
};

template <typename Scalar = double>
struct EntangleResult {
  std::array<EntangleBranch<Scalar>, 2> branches;
  Scalar bell_fidelity = 0;    // herald-conditioned
  Scalar fidelity_stderr = 0;  // sampled mode
  Scalar herald = 1;
  long long shots = 0;
};

// Run the protocol up to the photon measurement with node 1 prepared in |+>;
// reports the Bell fidelity of the heralded two-node state.
template <typename Scalar = double>
EntangleResult<Scalar> entangle_nodes(const TeleportGates<Scalar>& gates = {},
                                      std::uint64_t seed = 1,
                                      MeasureMode mode = MeasureMode::enumerated,
                                      long long shots = 10000) {
  using C = std::complex<Scalar>;
  using V2 = Eigen::Matrix<C, 2, 1>;
  V2 plus;
  plus << C(1) / std::sqrt(Scalar(2)), C(1) / std::sqrt(Scalar(2));
  auto psi = detail::entangled_state<Scalar>(plus, gates);

  Eigen::Matrix<C, 4, 1> bell = Eigen::Matrix<C, 4, 1>::Zero();
  bell(0) = bell(3) = C(1) / std::sqrt(Scalar(2));

  EntangleResult<Scalar> res;
  Scalar herald = 0, mean_acc = 0;
  for (int ph = 0; ph < 2; ++ph) {
    // joint (node1, nodeN) amplitudes at this photon outcome, sigma_x applied on up
    Eigen::Matrix<C, 4, 1> v;
    for (int q1 = 0; q1 < 2; ++q1)
      for (int qn = 0; qn < 2; ++qn) {
        const int flip = (ph == 0) ? 1 - qn : qn;
        v(q1 * 2 + qn) = psi(detail::tele_index(q1, ph, flip));
      }
    const Scalar pr = v.squaredNorm();
    auto& br = res.branches[ph];
    br.photon_outcome = ph;
    br.probability = pr;
    br.fidelity = pr > Scalar(0) ? std::norm(bell.dot(v)) / pr : Scalar(0);
    herald += pr;
    mean_acc += pr * br.fidelity;
  }
  if (herald <= Scalar(0)) throw domain_error("entangling herald probability is zero");

  if (mode == MeasureMode::enumerated) {
    res.bell_fidelity = mean_acc / herald;
    res.herald = herald;
  } else {
    SplitMix64 rng(seed);
    long long heralded = 0;
    Scalar sum = 0, sumsq = 0;
    for (long long s = 0; s < shots; ++s) {
      const Scalar u = Scalar(rng.uniform());
      int hit = u < res.branches[0].probability
                    ? 0
                    : (u < res.branches[0].probability + res.branches[1].probability ? 1 : -1);
      if (hit < 0) continue;
      ++res.branches[hit].shots;
      ++heralded;
      const Scalar f = res.branches[hit].fidelity;
      sum += f;
      sumsq += f * f;
    }
    if (heralded == 0) throw domain_error("no heralded shots; raise the shot count");
    res.shots = shots;
    res.herald = Scalar(heralded) / Scalar(shots);
    res.bell_fidelity = sum / Scalar(heralded);
    if (heralded > 1) {
      const Scalar var = std::max(
          Scalar(0),
          (sumsq - Scalar(heralded) * res.bell_fidelity * res.bell_fidelity) /
              Scalar(heralded - 1));
      res.fidelity_stderr = std::sqrt(var / Scalar(heralded));
    }
  }
  return res;
}

}  // namespace giantnode
