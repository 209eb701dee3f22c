#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "soliton/loop_algebra.hpp"
#include "soliton/su2.hpp"

namespace soliton {

struct MediumParams {
  double beta = 1.0;
  double gamma = 1.0;
  double omega0 = 1.0;
  double sigma = 0.5;
  double r_init = 1.0;

  /// Throws InvalidArgument.
  void validate() const;
  /// Lorentzian line shape.
  double g(double w) const;
};

/// Spectral parameter nu = i m and the constant vector c = (c1, i c2).
struct SpectralPoint {
  double m = 1.0;
  cplx c1 = 1.0;
  cplx c2 = 1.0;
  bool parity_enforced = true;

  std::array<cplx, 2> c_vector() const { return {c1, kI * c2}; }
};

/// Level-n dressing data. Everything that depends on (zeta, tau) is produced
/// by snapshot(); loop holds Q_n at zeta = tau = 0 for inspection.
struct BTState {
  int level = 0;
  MediumParams medium;
  std::vector<SpectralPoint> points;
  LoopElement loop;

  std::vector<double> m_list() const;
  OmegaDenominator denominator() const;
};

/// Everything about the level-n solution at one (zeta, tau).
struct Snapshot {
  double zeta = 0.0, tau = 0.0;
  cplx e0 = 0.0;
  /// h1 H + f1 F numerators (lambda part) and e1 E numerator (constant part)
  /// over the common omega-denominator.
  SpectralPotentials pot;
  /// Dressing data per level: K_k = N_k H N_k^{-1} and Phi_k.
  std::vector<Su2Vector> k;
  std::vector<std::array<cplx, 2>> phi;

  /// lambda h0 H + e0 E + omega integral, in closed form.
  LoopElement loop(int max_order = kDefaultMaxOrder) const;
  /// Q^(0) and Q^(1) evaluated at lambda.
  Mat2 q0(cplx lambda) const;
  Mat2 q1(cplx lambda) const;
};

inline constexpr double kH0 = 0.5;

BTState vacuum_state(const MediumParams& medium);

/// Vacuum omega-integral I(lambda) = int h1(w) / (w^2 - lambda^2) dw in closed
/// form for Im lambda > 0, continued analytically. Throws NearPole.
cplx dispersion(const MediumParams& medium, cplx lambda);

/// v1 = m I(i m).
double dispersion_v(const MediumParams& medium, double m);

/// diag(exp(i theta), exp(-i theta)) with theta = lambda (h0 tau - (h0 + I(lambda)) zeta).
Mat2 vacuum_wavefunction(const MediumParams& medium, cplx lambda, double zeta, double tau);

/// Psi_{n+1}(lambda) = G_n ... G_1 Psi_vacuum(lambda) at (zeta, tau).
Mat2 wavefunction(const BTState& state, cplx lambda, double zeta, double tau);
Mat2 wavefunction(const BTState& state, const Snapshot& snap, cplx lambda);

struct BTMatrices {
  Mat2 n;
  /// G(lambda) = lambda I - m N H N^{-1}
  LoopElement g;
  Su2Vector k;
  std::array<cplx, 2> phi;
};

/// Dressing matrices for adding `point` on top of `state` at (zeta, tau).
/// Throws ZeroEigenvector.
BTMatrices bt_matrices(const BTState& state, const SpectralPoint& point, double zeta, double tau);

/// N built from Phi; K = N H N^{-1}.
Mat2 n_matrix(const std::array<cplx, 2>& phi);
Su2Vector k_vector(const std::array<cplx, 2>& phi);

/// Im(phi1) Im(phi2) + Re(phi1) Re(phi2)
double reality_condition(const std::array<cplx, 2>& phi);

/// Level n+1. Throws PoleCollision, ZeroEigenvector, RealityViolation.
BTState bt_step(const BTState& state, const SpectralPoint& point);

/// Build level n from the vacuum in one go.
BTState build_solitons(const MediumParams& medium, std::span<const SpectralPoint> points);

Snapshot snapshot(const BTState& state, double zeta, double tau);

struct Potentials {
  cplx e0 = 0.0;
  OmegaPotential h1, f1, e1;
  /// Relative least-squares residual of the numerator fit.
  double fit_residual = 0.0;
};

/// Numerators recovered by sampling the pointwise Theorem recursion at
/// 2n+4 real nodes. Throws FitResidualTooLarge.
Potentials potentials(const BTState& state, double zeta, double tau);

struct PotentialValues {
  Su2Vector lambda_part;  // h1 H + f1 F
  Su2Vector const_part;   // e1 E
};

/// Pointwise potentials at w from the value-level recursion (no polynomial algebra).
PotentialValues potential_values(const BTState& state, cplx w, double zeta, double tau);

struct FieldValues {
  cplx e, r, s, u;
};

/// e = (beta + 2 e0)/gamma, R = -2 h1/(gamma w g), S = -2 f1/(gamma w g), U = 4 e1/(gamma w^2 g).
/// At w = 0 the removable singularity is cancelled; OmegaZero when it is not removable.
FieldValues physical_fields(const BTState& state, const Snapshot& snap, double w);
FieldValues physical_fields(const BTState& state, double w, double zeta, double tau);

/// CSV with columns zeta,tau,omega,e,R,S,U (real parts, 17 significant digits).
void write_fields_csv(std::ostream& out, const BTState& state, std::span<const double> zeta,
                      std::span<const double> tau, std::span<const double> omega);

/// Closed-form one-soliton potentials for the golden comparison.
struct OneSoliton {
  double x1;
  double e0;
  double h1, f1, e1;
};
OneSoliton one_soliton(const MediumParams& medium, const SpectralPoint& point, double w, double zeta,
                       double tau);

/// JSON: medium, spectral points and the reference loop.
std::string serialize(const BTState& state);
BTState deserialize_state(const std::string& text);

}  // namespace soliton
