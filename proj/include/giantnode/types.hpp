#pragma once

// Core value types for the four-port giant-atom node.
//
// Conventions used throughout the library:
//   * group velocity v_g = 1; couplings g_i are in units such that Gamma_i = g_i^2,
//     and all rates (omega_int, gamma_e, delta) are in units of Gamma0 = g0^2
//   * ports: 1 = lower-left, 2 = lower-right, 3 = upper-left, 4 = upper-right
//   * scattering amplitudes are stored row = input port: s(n,m) = s_{n+1 -> m+1}

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>

namespace giantnode {

inline constexpr double complex_tol = 1e-10;  // default tolerance for amplitude comparisons

// ---------------------------------------------------------------------------
// error taxonomy: validation errors are caller mistakes (CLI exit 1),
// domain errors are legitimate parameter regimes the model cannot serve
// (CLI exit 2).

struct validation_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct domain_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// singular 10x10 system at a bound-state / dark-mode parameter point
struct singular_error : domain_error {
  double cond_estimate;
  explicit singular_error(double cond)
      : domain_error("resonance singularity (cond ~ " + format_cond(cond) + ")"),
        cond_estimate(cond) {}

private:
  static std::string format_cond(double c) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", c);
    return buf;
  }
};

// a requested operating condition has no physical parameter set
struct infeasible_error : domain_error {
  using domain_error::domain_error;
};

template <typename Scalar>
Scalar wrap_phase(Scalar phase) {
  constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  Scalar w = std::fmod(phase, two_pi);
  if (w < Scalar(0)) w += two_pi;
  // fmod can return exactly two_pi after the correction when phase is a tiny negative number
  if (w >= two_pi) w -= two_pi;
  return w;
}

// ---------------------------------------------------------------------------
// NodeParams: everything the scattering model needs to know about one node.

template <typename Scalar = double>
struct NodeParams {
  using Real = Scalar;
  using Complex = std::complex<Scalar>;
  using Vector4 = Eigen::Matrix<Scalar, 4, 1>;
  using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

  Vector4 g = Vector4::Ones();       // coupling strengths g1..g4, Gamma_i = g_i^2
  Vector4 theta = Vector4::Zero();   // coupling phases theta1..theta4 [rad]
  Scalar omega_int = 0;              // interatomic coupling strength Omega (Gamma0 units)
  Scalar alpha = 0;                  // interatomic coupling phase [rad]
  Vector2 gamma_e = Vector2::Zero(); // external dissipation rates gamma_e1, gamma_e2
  Vector2 phi = Vector2::Zero();     // propagation phases phi_a, phi_b at resonance [rad]
  Scalar delta = 0;                  // detuning of the incident photon (Gamma0 units)
  Vector2 tau = Vector2::Zero();     // optional retardation times; effective phase = phi + tau*delta

  // effective propagation phases at the current detuning
  Scalar phi_eff_a() const { return phi[0] + tau[0] * delta; }
  Scalar phi_eff_b() const { return phi[1] + tau[1] * delta; }
};

// Wrap all phases into [0, 2pi) and validate sign constraints.  Idempotent.
template <typename Scalar>
NodeParams<Scalar> normalize_params(NodeParams<Scalar> p) {
  static const char* g_names[] = {"g1", "g2", "g3", "g4"};
  for (int i = 0; i < 4; ++i) {
    if (p.g[i] < Scalar(0))
      throw validation_error(std::string("negative coupling strength ") + g_names[i]);
    p.theta[i] = wrap_phase(p.theta[i]);
  }
  if (p.omega_int < Scalar(0))
    throw validation_error("negative interatomic strength omega_int");
  for (int i = 0; i < 2; ++i) {
    if (p.gamma_e[i] < Scalar(0))
      throw validation_error(std::string("negative dissipation rate gamma_e") +
                             char('1' + i));
    p.phi[i] = wrap_phase(p.phi[i]);
  }
  p.alpha = wrap_phase(p.alpha);
  return p;
}

// ---------------------------------------------------------------------------
// ScatteringMatrix: 4x4 complex amplitudes, row = input port.

template <typename Scalar = double>
struct ScatteringMatrix {
  using Complex = std::complex<Scalar>;
  using Mat4c = Eigen::Matrix<Complex, 4, 4>;
  using Mat4 = Eigen::Matrix<Scalar, 4, 4>;

  Mat4c s = Mat4c::Zero();  // s(n,m) = amplitude port n+1 -> port m+1

  Mat4 prob() const { return s.cwiseAbs2(); }

  // ||S S^dag - I||_inf; zero for a flux-conserving (gamma = 0) node
  Scalar unitarity_defect() const {
    return (s * s.adjoint() - Mat4c::Identity()).cwiseAbs().maxCoeff();
  }
};

}  // namespace giantnode
