#pragma once

#include <functional>
#include <vector>

#include "soliton/backlund.hpp"
#include "soliton/polynomial.hpp"

namespace soliton {

/// Nodes and weights for <f>_g: Gauss-Legendre on (0,1) pushed through the
/// inverse Lorentzian CDF, so sum(weights) = 1 and node density follows g.
struct LorentzRule {
  std::vector<double> omega;
  std::vector<double> weight;

  double apply(const std::function<double(double)>& f) const;
};

/// count in {8, 16, 32, 64, 128}; InvalidArgument otherwise.
LorentzRule lorentzian_rule(const MediumParams& medium, int count);

/// <f>_g by adaptive Gauss-Kronrod over the whole line, using
/// w = w0 + sigma tan(theta). Throws NonConvergent.
double lorentzian_average(const std::function<double(double)>& f, const MediumParams& medium,
                          double tol = 1e-10);

/// num(w) / (lead * prod (w - roots[k])), simple roots off the real axis.
struct RationalFunction {
  poly::Poly num;
  std::vector<cplx> roots;
  cplx lead = 1.0;

  cplx eval(cplx w) const;
};

/// <r>_g by residues in the upper half plane. Needs deg num <= number of
/// roots; DomainError otherwise, NearPole for a root on the real axis.
cplx lorentzian_average(const RationalFunction& r, const MediumParams& medium);

}  // namespace soliton
