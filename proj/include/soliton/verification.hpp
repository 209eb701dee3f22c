#pragma once

#include <functional>
#include <span>
#include <vector>

#include "soliton/backlund.hpp"
#include "soliton/quadrature.hpp"

namespace soliton {

/// Evaluation grid: zeta and tau nodes plus the omega rule for <.>_g.
struct Grid {
  std::vector<double> zeta, tau;
  LorentzRule omega;

  static Grid uniform(double zeta0, double zeta1, int nz, double tau0, double tau1, int nt,
                      const MediumParams& medium, int omega_nodes);
  /// Strictly increasing nodes, positive weights summing to 1 (1e-10). Throws InvalidArgument.
  void validate() const;
};

/// Physical fields frozen at one (zeta, tau) and evaluable in omega.
struct FieldSlice {
  cplx e = 0.0;
  std::function<FieldValues(double)> at;
};
using FieldSource = std::function<FieldSlice(double zeta, double tau)>;

FieldSource soliton_fields(const BTState& state);

/// w S_w at one snapshot as a rational function of w with roots +-i m_k.
RationalFunction omega_s_rational(const BTState& state, const Snapshot& snap);

/// Max-norm of d_zeta Q0 + d_tau Q1 - [Q0, Q1] by central differences. Throws NearPole.
double lax_residual(const BTState& state, cplx lambda, double zeta, double tau, double h_fd = 1e-4);

struct PdeResidual {
  double mb1 = 0.0, mb2 = 0.0, mb3 = 0.0, mb4 = 0.0;
  double max() const;
};

/// Residuals of the four field equations at (zeta, tau) by central differences;
/// the Maxwell source is the adaptive Lorentzian average of w S_w, the Bloch
/// residuals are maxima over the omega nodes.
PdeResidual pde_residual(const FieldSource& fields, const MediumParams& medium, std::span<const double> omega,
                         double zeta, double tau, double h = 1e-5);

/// Square grid zeta0 + i d, tau0 + j d, d = length / (points - 1).
struct PdeGrid {
  double zeta0 = 0.0, tau0 = 0.0, length = 10.0;
  int points = 201;
  int omega_nodes = 64;
  /// Largest rotation angle |Omega| h of one RK4 Bloch substep.
  double max_phase = 0.02;
};

struct PdeSolution {
  std::vector<double> zeta, tau;
  LorentzRule rule;
  std::vector<double> e;  // e[i * tau.size() + j] at (zeta_i, tau_j)
  /// Largest |R^2 + S^2 + U^2/4 - its value at tau0| over every node.
  double bloch_drift = 0.0;

  double e_at(std::size_t i, std::size_t j) const { return e[i * tau.size() + j]; }
};

/// Marches in zeta. Along each row the Bloch equations advance in tau by RK4
/// per omega node, and e follows the unit-speed characteristics with a
/// trapezoidal source (predictor-corrector). The boundary supplies e on the
/// inflow edges zeta = zeta0 and tau = tau0 and the Bloch variables at tau0.
/// Throws StepOverflow.
PdeSolution pde_integrate(const MediumParams& medium, const FieldSource& boundary, const PdeGrid& grid);

/// Relative L2 distance of (e - beta/gamma) between the solution and the
/// exact fields over the whole grid.
double pde_error(const PdeSolution& sol, const FieldSource& exact, const MediumParams& medium);

struct PoleReport {
  double fit_residual = 0.0;
  double max_even = 0.0;  // relative to the largest numerator coefficient
  int max_degree = 0;
  int degree_bound = 0;
  bool denominator_ok = false;
  bool pass = false;
};

PoleReport pole_structure_check(const BTState& state, double zeta, double tau);
PoleReport pole_structure_check(const Potentials& pot, int n);

/// Max |Im| of e, R, S, U over the grid.
double reality_sweep(const BTState& state, std::span<const double> zeta, std::span<const double> tau,
                     std::span<const double> omega);

}  // namespace soliton
