#pragma once

// Exact single-photon scattering for the four-port giant-atom node.
//
// General path: a 10x10 complex linear system per incident port, unknowns
//   [ s_n->1, s_n->2, s_n->3, s_n->4, Wa_R, Wa_L, Wb_R, Wb_L, u_e1, u_e2 ]
// built from the eight field-jump conditions at the four coupling points plus
// the two atomic steady-state equations (delta-matching with the arithmetic
// mean of left/right field limits).
//
// Cross-check path: the closed-form symmetric-case amplitudes, evaluated
// projectively in (u_e1, u_e2) so benign zero-denominator points of the beta
// ratio still evaluate; only a genuine dark mode (both numerator and
// denominator zero) is refused.

#include "types.hpp"

#include <Eigen/Dense>

#include <optional>

namespace giantnode {

template <typename Scalar>
struct LinearSystem {
  using Complex = std::complex<Scalar>;
  Eigen::Matrix<Complex, 10, 10> A;
  Eigen::Matrix<Complex, 10, 1> b;
};

template <typename Scalar>
struct SolverSolution {
  using Complex = std::complex<Scalar>;
  Eigen::Matrix<Complex, 4, 1> row;  // s_{n->1..4}
  Eigen::Matrix<Complex, 4, 1> w;    // Wa_R, Wa_L, Wb_R, Wb_L
  Eigen::Matrix<Complex, 2, 1> u;    // u_e1, u_e2
  std::optional<Complex> beta;       // u_e2 / u_e1, absent when u_e1 = 0
};

// induced one-norm (max column abs sum)
template <typename Derived>
typename Derived::RealScalar one_norm(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

// Assemble the port-n system.  Row layout: four right/left-mover jump
// conditions per guide (rows 0-7), then the two atomic equations (rows 8-9).
// For ports 2-4 the incoming plane wave moves to the matching guide/direction;
// the unknown segment amplitudes stay the same.
template <typename Scalar>
LinearSystem<Scalar> assemble_system(const NodeParams<Scalar>& p, int port) {
  using Complex = std::complex<Scalar>;
  if (port < 1 || port > 4) throw validation_error("port must be 1..4");

  const Complex i1(0, 1);
  const Scalar fa = p.phi_eff_a();
  const Scalar fb = p.phi_eff_b();
  const Complex ea = std::exp(i1 * fa);  // e^{i k d_a} at the working detuning
  const Complex eb = std::exp(i1 * fb);
  const Complex G1 = p.g[0] * std::exp(i1 * p.theta[0]);
  const Complex G2 = p.g[1] * std::exp(i1 * p.theta[1]);
  const Complex G3 = p.g[2] * std::exp(i1 * p.theta[2]);
  const Complex G4 = p.g[3] * std::exp(i1 * p.theta[3]);
  const Complex c1 = std::conj(G1), c2 = std::conj(G2);
  const Complex c3 = std::conj(G3), c4 = std::conj(G4);

  const Scalar inc_aR = port == 1 ? 1 : 0;  // rightward incidence, lower guide
  const Scalar inc_aL = port == 2 ? 1 : 0;  // leftward incidence, lower guide
  const Scalar inc_bR = port == 3 ? 1 : 0;
  const Scalar inc_bL = port == 4 ? 1 : 0;

  LinearSystem<Scalar> sys;
  auto& A = sys.A;
  auto& b = sys.b;
  A.setZero();
  b.setZero();

  // indices into the unknown vector
  enum { S1, S2, S3, S4, WAR, WAL, WBR, WBL, U1, U2 };

  // right-mover jumps, lower guide: at x=0 (couples u_e2 via G1), at x=d_a (u_e1 via G2)
  A(0, WAR) = -i1;
  A(0, U2) = G1;
  b(0) = -i1 * inc_aR;
  A(1, S2) = -i1 * ea;
  A(1, WAR) = i1 * ea;
  A(1, U1) = G2;
  // left-mover jumps, lower guide
  A(2, S1) = -i1;
  A(2, WAL) = i1;
  A(2, U2) = G1;
  A(3, WAL) = -i1 / ea;
  A(3, U1) = G2;
  b(3) = -i1 * inc_aL / ea;
  // right-mover jumps, upper guide: at x=0 (u_e1 via G3), at x=d_b (u_e2 via G4)
  A(4, WBR) = -i1;
  A(4, U1) = G3;
  b(4) = -i1 * inc_bR;
  A(5, S4) = -i1 * eb;
  A(5, WBR) = i1 * eb;
  A(5, U2) = G4;
  // left-mover jumps, upper guide
  A(6, S3) = -i1;
  A(6, WBL) = i1;
  A(6, U1) = G3;
  A(7, WBL) = -i1 / eb;
  A(7, U2) = G4;
  b(7) = -i1 * inc_bL / eb;

  // atomic equation for u_e1: couples to Wb at x=0 (G3) and Wa at x=d_a (G2);
  // field values are the mean of left/right limits at the coupling point
  const Complex h2 = Scalar(0.5) * c2;
  const Complex h3 = Scalar(0.5) * c3;
  A(8, U1) = Complex(p.delta, p.gamma_e[0] / 2);
  A(8, U2) = -p.omega_int * std::exp(i1 * p.alpha);
  A(8, WBR) -= h3;
  A(8, S3) -= h3;
  A(8, WBL) -= h3;
  A(8, WAR) -= h2 * ea;
  A(8, S2) -= h2 * ea;
  A(8, WAL) -= h2 / ea;
  b(8) = h3 * inc_bR + h2 * inc_aL / ea;

  // atomic equation for u_e2: couples to Wa at x=0 (G1) and Wb at x=d_b (G4)
  const Complex h1 = Scalar(0.5) * c1;
  const Complex h4 = Scalar(0.5) * c4;
  A(9, U2) = Complex(p.delta, p.gamma_e[1] / 2);
  A(9, U1) = -p.omega_int * std::exp(-i1 * p.alpha);
  A(9, WAR) -= h1;
  A(9, S1) -= h1;
  A(9, WAL) -= h1;
  A(9, WBR) -= h4 * eb;
  A(9, S4) -= h4 * eb;
  A(9, WBL) -= h4 / eb;
  b(9) = h1 * inc_aR + h4 * inc_bL / eb;

  return sys;
}

inline constexpr double singularity_cond_threshold = 1e12;

template <typename Scalar>
SolverSolution<Scalar> solve_port(const NodeParams<Scalar>& p, int port) {
  using Complex = std::complex<Scalar>;
  SolverSolution<Scalar> sol;

  // A fully decoupled node passes the photon untouched.  Solved directly
  // because the atom block of the assembled system is singular whenever
  // delta = +-Omega even though the photonic physics is trivial.
  if ((p.g.array() == Scalar(0)).all()) {
    sol.row.setZero();
    sol.w.setZero();
    sol.u.setZero();
    const int through[] = {0, 1, 0, 3, 2};  // 1->2, 2->1, 3->4, 4->3
    sol.row[through[port]] = Complex(1, 0);
    if (port == 1) sol.w[0] = Complex(1, 0);
    if (port == 2) sol.w[1] = Complex(1, 0);
    if (port == 3) sol.w[2] = Complex(1, 0);
    if (port == 4) sol.w[3] = Complex(1, 0);
    return sol;
  }

  const auto sys = assemble_system(p, port);
  Eigen::PartialPivLU<Eigen::Matrix<Complex, 10, 10>> lu(sys.A);

  // one-norm condition estimate; the system is tiny, the explicit inverse is fine
  const Scalar norm_a = one_norm(sys.A);
  const Eigen::Matrix<Complex, 10, 10> inv = lu.inverse();
  const Scalar norm_inv = one_norm(inv);
  const Scalar cond = norm_a * norm_inv;
  if (!std::isfinite(cond) || cond > Scalar(singularity_cond_threshold))
    throw singular_error(static_cast<double>(cond));

  const Eigen::Matrix<Complex, 10, 1> x = lu.solve(sys.b);
  sol.row = x.template segment<4>(0);
  sol.w = x.template segment<4>(4);
  sol.u = x.template segment<2>(8);
  if (std::abs(sol.u[0]) > Scalar(0)) sol.beta = sol.u[1] / sol.u[0];
  return sol;
}

template <typename Scalar>
ScatteringMatrix<Scalar> scattering_matrix(const NodeParams<Scalar>& p) {
  ScatteringMatrix<Scalar> sm;
  for (int port = 1; port <= 4; ++port)
    sm.s.row(port - 1) = solve_port(p, port).row.transpose();
  return sm;
}

// ---------------------------------------------------------------------------
// closed-form symmetric case: g equal, theta2 = theta3, theta1 = theta4,
// phi_a = phi_b = theta2 - theta1 =: theta.

template <typename Scalar>
void require_symmetric_case(const NodeParams<Scalar>& p) {
  const Scalar tol = Scalar(1e-9);
  const Scalar g0 = p.g[0];
  if ((p.g.array() - g0).abs().maxCoeff() > tol)
    throw validation_error("closed form requires equal couplings g1..g4");
  auto phase_dist = [](Scalar a, Scalar b) {
    Scalar d = wrap_phase(a - b);
    return std::min(d, Scalar(2 * std::numbers::pi_v<Scalar>) - d);
  };
  if (phase_dist(p.theta[1], p.theta[2]) > tol || phase_dist(p.theta[0], p.theta[3]) > tol)
    throw validation_error("closed form requires theta2 = theta3 and theta1 = theta4");
  const Scalar theta = p.theta[1] - p.theta[0];
  if (phase_dist(p.phi_eff_a(), theta) > tol || phase_dist(p.phi_eff_b(), theta) > tol)
    throw validation_error("closed form requires phi_a = phi_b = theta2 - theta1");
}

// numerator and denominator of the excited-state amplitude ratio beta = u_e2/u_e1
template <typename Scalar>
std::pair<std::complex<Scalar>, std::complex<Scalar>> beta_parts(const NodeParams<Scalar>& p) {
  using Complex = std::complex<Scalar>;
  const Complex i1(0, 1);
  const Scalar gamma0 = p.g[0] * p.g[0];
  const Scalar theta = p.theta[1] - p.theta[0];
  const Complex num = Complex(p.delta, p.gamma_e[0] / 2) +
                      p.omega_int * std::exp(-i1 * p.alpha) +
                      Scalar(2) * i1 * gamma0 * (Scalar(1) - std::exp(Scalar(2) * i1 * theta));
  const Complex den = Complex(p.delta, p.gamma_e[1] / 2) + p.omega_int * std::exp(i1 * p.alpha);
  return {num, den};
}

template <typename Scalar>
std::complex<Scalar> beta(const NodeParams<Scalar>& p) {
  require_symmetric_case(p);
  const auto [num, den] = beta_parts(p);
  if (std::abs(den) == Scalar(0))
    throw domain_error("closed-form singular; use general solver");
  return num / den;
}

// Port-1 row of the symmetric-case closed form.  Evaluated with
// (u_e1, u_e2) proportional to (den, num), which reduces to the textbook
// beta-ratio expressions when den != 0 and stays finite when only the
// denominator vanishes.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 4, 1> closed_form_row1(const NodeParams<Scalar>& p) {
  using Complex = std::complex<Scalar>;
  require_symmetric_case(p);

  const Complex i1(0, 1);
  const Scalar gamma0 = p.g[0] * p.g[0];
  const Scalar theta = p.theta[1] - p.theta[0];
  const auto [num, den] = beta_parts(p);
  if (std::abs(num) == Scalar(0) && std::abs(den) == Scalar(0))
    throw domain_error("closed-form singular; use general solver");

  const Complex eio = std::exp(i1 * theta);
  const Complex e2io = eio * eio;
  // common denominator of every amplitude, scaled by den
  const Complex dd = den * Complex(p.delta, p.gamma_e[0] / 2) -
                     num * p.omega_int * std::exp(i1 * p.alpha) +
                     Scalar(2) * i1 * gamma0 * (den + num);

  Eigen::Matrix<Complex, 4, 1> row;
  row[0] = -i1 * gamma0 * (e2io * den + num) / dd;
  row[1] = Scalar(1) - i1 * gamma0 * (den + num) / dd;
  row[2] = -i1 * gamma0 * (den + num) * eio / dd;
  row[3] = -i1 * gamma0 * (eio * den + num / eio) / dd;
  return row;
}

// Combined entry point: closed form when the symmetric premise holds and the
// evaluation is regular, otherwise (or on a dark point) the general solver.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 4, 1> scattering_row1(const NodeParams<Scalar>& p) {
  try {
    return closed_form_row1(p);
  } catch (const validation_error&) {
    // not the symmetric case
  } catch (const domain_error&) {
    // dark point of the closed form; let the general solver decide
  }
  return solve_port(p, 1).row;
}

}  // namespace giantnode
