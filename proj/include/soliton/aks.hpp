#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "soliton/loop_algebra.hpp"

namespace soliton {

/// M_k(X) = prod_{i=1}^{2(n+2)} (lambda - alpha_i)^k X
LoopElement m_operator(const LoopElement& x, const PoleSet& poles, int k);

/// Phi_k(X) = (M_k(X), X) / 2
cplx phi_k(const LoopElement& x, const PoleSet& poles, int k);
LoopElement grad_phi_k(const LoopElement& x, const PoleSet& poles, int k);

/// dX/dt_k = [Pi_b M_k(X), X]
LoopElement aks_rhs(const LoopElement& x, const PoleSet& poles, int k);

/// Coordinates of
///   X = lambda (h0 H + f0 F) + e0 E + sum_j P_j / D^j,   D = prod_{i=1}^{n+2} (lambda^2 - alpha_i^2),
///   P_j = sum_{m=0}^{j(n+1)} lambda^{2m+1} (h[j-1][m] H + f[j-1][m] F) + lambda^{2m} e[j-1][m] E.
struct ExtendedState {
  int n = 0;
  int j_max = 1;
  cplx h0 = 0.0, f0 = 0.0, e0 = 0.0;
  std::vector<std::vector<cplx>> h, f, e;

  static ExtendedState zero(int n, int j_max);

  /// Highest index m at pole order j.
  int top(int j) const { return j * (n + 1); }

  /// h_j^{p}, f_j^{p} (odd p) and e_j^{p} (even p) in upper-index
  /// labelling; zero outside the stored range.
  cplx h_coord(int j, int power) const;
  cplx f_coord(int j, int power) const;
  cplx e_coord(int j, int power) const;

  std::vector<cplx> flatten() const;
  void assign(std::span<const cplx> v);
  double max_abs() const;
};

ExtendedState operator+(const ExtendedState& a, const ExtendedState& b);
ExtendedState operator*(cplx s, const ExtendedState& a);

LoopElement to_loop(const ExtendedState& s, const PoleSet& poles);

/// Canonical right inverse of to_loop: remainders of repeated division by D
/// fill the highest pole order first. Exact inverse when j_max = 1. Throws
/// DomainError when x is not of the extended form.
ExtendedState from_loop(const LoopElement& x, const PoleSet& poles, int j_max);

/// Coordinate form of [P_0, X] with the improper E terms reduced.
ExtendedState extended_flow_rhs(const ExtendedState& s, const PoleSet& poles);

enum class FunctionalKind { h0, f0, e0, h1_top, f1_top, e1_top, boldH, boldF, boldE, hamiltonian };

struct FunctionalId {
  FunctionalKind kind = FunctionalKind::e0;
  int n_index = 0;  // N for bold kinds
};

/// Reads the named coefficient. On a LoopElement, bold functionals are
/// intrinsic only for N <= 1 (InvalidFunctional otherwise); on an
/// ExtendedState any N is read from the coordinates.
cplx functional_value(const LoopElement& x, const PoleSet& poles, FunctionalId id);
cplx functional_value(const ExtendedState& s, const PoleSet& poles, FunctionalId id);
LoopElement functional_gradient(const LoopElement& x, const PoleSet& poles, FunctionalId id);

cplx higher_functional(const LoopElement& x, const PoleSet& poles, int n_index, FunctionalKind kind);
LoopElement higher_functional_gradient(const LoopElement& x, const PoleSet& poles, int n_index,
                                       FunctionalKind kind);

/// {A,B}(X) = -(X, [Pi_b grad A, Pi_b grad B])
cplx poisson_bracket(const LoopElement& x, const LoopElement& grad_a, const LoopElement& grad_b);
cplx poisson_bracket(const LoopElement& x, const PoleSet& poles, FunctionalId a, FunctionalId b);

/// |{Phi_j, Phi_k}(X)|
double involution_check(const LoopElement& x, const PoleSet& poles, int j, int k);

/// Largest difference between the extended flow and {coordinate, H} for the
/// coordinates e0, h_1^{2n+3}, f_1^{2n+3}, e_1^{2n+2}, with H = e0^2 + 2(h0 h_1^{2n+3} + f0 f_1^{2n+3}).
double canonical_flow_check(const ExtendedState& s, const PoleSet& poles);

struct FlowConfig {
  int k = 0;
  double t_end = 1.0;
  double step = 1e-3;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<LoopElement> x;
  std::vector<cplx> phi0, phi1;
};

/// Classical RK4 with a fixed step: on the extended coordinates for k = 0,
/// on the canonical-form coefficients of the loop for k > 0. Throws StepOverflow.
Trajectory integrate_flow(const ExtendedState& s0, const PoleSet& poles, const FlowConfig& config);

/// t, Phi_0, Phi_1 and the real parts of h0, f0, e0, h_1^{2n+3}, f_1^{2n+3}, e_1^{2n+2}.
void write_trajectory_csv(std::ostream& out, const Trajectory& tr, const PoleSet& poles);

struct InvolutionEntry {
  int j, k;
  double max_abs;
};

/// Max |{Phi_j, Phi_k}| over `samples` random truncated elements, (j,k) in {0..k_max}^2.
std::vector<InvolutionEntry> involution_sweep(const PoleSet& poles, int k_max, int samples,
                                              unsigned long long seed);
void write_involution_csv(std::ostream& out, std::span<const InvolutionEntry> entries);

/// Random extended state with coefficients uniform in [-scale, scale].
ExtendedState random_extended_state(int n, int j_max, unsigned long long seed, double scale = 1.0);

}  // namespace soliton
