#pragma once

#include <span>
#include <vector>

#include "soliton/su2.hpp"

namespace soliton::poly {

/// Scalar polynomial, coefficient k multiplies x^k.
using Poly = std::vector<cplx>;

cplx eval(std::span<const cplx> p, cplx x);
Poly multiply(std::span<const cplx> a, std::span<const cplx> b);
Poly add(std::span<const cplx> a, std::span<const cplx> b);
Poly scale(std::span<const cplx> a, cplx s);

/// Monic polynomial prod_k (x - roots[k]).
Poly from_roots(std::span<const cplx> roots);

/// Drop trailing coefficients with |c| <= tol.
void trim(Poly& p, double tol = 0.0);

/// Divide by (x - a) with Horner's scheme. Returns the remainder p(a);
/// p is replaced by the quotient.
cplx synthetic_divide(Poly& p, cplx a);

/// p(x) / (x-a)^order written as q(x) + sum_r c_r / (x-a)^r.
struct PoleExpansion {
  Poly quotient;
  std::vector<cplx> pole;  // pole[r-1] multiplies (x-a)^{-r}
};
PoleExpansion expand_over_pole(Poly p, cplx a, int order);

/// Quotient and remainder of p / d for monic d.
std::pair<Poly, Poly> divmod_monic(std::span<const cplx> p, std::span<const cplx> d);

double binomial(int n, int k);

}  // namespace soliton::poly
