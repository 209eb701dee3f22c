#include "soliton/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace soliton::poly {

cplx eval(std::span<const cplx> p, cplx x) {
  cplx acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Poly multiply(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

Poly add(std::span<const cplx> a, std::span<const cplx> b) {
  Poly out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

Poly scale(std::span<const cplx> a, cplx s) {
  Poly out(a.begin(), a.end());
  for (auto& c : out) c *= s;
  return out;
}

Poly from_roots(std::span<const cplx> roots) {
  Poly p{1.0};
  for (cplx r : roots) {
    Poly next(p.size() + 1, 0.0);
    for (std::size_t k = 0; k < p.size(); ++k) {
      next[k + 1] += p[k];
      next[k] -= r * p[k];
    }
    p = std::move(next);
  }
  return p;
}

void trim(Poly& p, double tol) {
  while (!p.empty() && std::abs(p.back()) <= tol) p.pop_back();
}

cplx synthetic_divide(Poly& p, cplx a) {
  if (p.empty()) return 0.0;
  const std::size_t n = p.size();
  Poly q(n - 1, 0.0);
  cplx acc = 0.0;
  for (std::size_t k = n; k-- > 0;) {
    acc = acc * a + p[k];
    if (k > 0) q[k - 1] = acc;
  }
  p = std::move(q);
  return acc;
}

PoleExpansion expand_over_pole(Poly p, cplx a, int order) {
  PoleExpansion out;
  out.pole.assign(static_cast<std::size_t>(order), 0.0);
  // Successive remainders are the Taylor coefficients of p about a.
  for (int i = 0; i < order; ++i) {
    out.pole[static_cast<std::size_t>(order - 1 - i)] = synthetic_divide(p, a);
  }
  out.quotient = std::move(p);
  return out;
}

std::pair<Poly, Poly> divmod_monic(std::span<const cplx> p, std::span<const cplx> d) {
  Poly rem(p.begin(), p.end());
  const std::size_t dn = d.size();
  if (rem.size() < dn) return {Poly{}, rem};
  Poly quot(rem.size() - dn + 1, 0.0);
  for (std::size_t k = rem.size(); k-- >= dn;) {
    const cplx c = rem[k];
    const std::size_t shift = k - (dn - 1);
    quot[shift] = c;
    for (std::size_t i = 0; i < dn; ++i) rem[shift + i] -= c * d[i];
    rem[k] = 0.0;
    if (k == dn - 1) break;
  }
  rem.resize(dn - 1);
  return {quot, rem};
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace soliton::poly
