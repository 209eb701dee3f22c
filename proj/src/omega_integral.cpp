#include <cmath>
#include <numbers>

#include "soliton/error.hpp"
#include "soliton/loop_algebra.hpp"

namespace soliton {

namespace {

bool upper_half(cplx w) { return w.imag() > 0.0; }

template <class Num>
Su2Vector eval_su2(const Num& num, cplx w) {
  Su2Vector acc;
  for (auto it = num.rbegin(); it != num.rend(); ++it) {
    acc = w * acc;
    acc += *it;
  }
  return acc;
}

int effective_degree(const std::vector<Su2Vector>& num) {
  int d = static_cast<int>(num.size()) - 1;
  while (d >= 0 && num[static_cast<std::size_t>(d)].max_abs() == 0.0) --d;
  return d;
}

}  // namespace

LoopElement omega_integral_to_loop(const SpectralPotentials& p, int max_order) {
  const auto& den = p.den;
  den.check_distinct();
  const auto roots = den.roots();
  const int den_degree = static_cast<int>(roots.size());

  std::vector<cplx> dprime(roots.size(), 1.0);
  for (std::size_t a = 0; a < roots.size(); ++a)
    for (std::size_t b = 0; b < roots.size(); ++b)
      if (a != b) dprime[a] *= roots[a] - roots[b];

  if (effective_degree(p.lambda_num) > den_degree - 1 ||
      effective_degree(p.const_num) > den_degree) {
    throw Error(ErrorKind::DomainError, "omega numerator degree too high for a convergent integral");
  }

  const cplx pi_i = kI * std::numbers::pi;
  LoopElement out(max_order);

  // lambda * int B / (Den (w^2 - lambda^2)) = sum_p A_p lambda J(w_p, lambda)
  for (std::size_t a = 0; a < roots.size(); ++a) {
    const cplx w = roots[a];
    const Gl2Vector amp(eval_su2(p.lambda_num, w));
    const cplx s = 1.0 / dprime[a];
    if (upper_half(w)) {
      out.add_pole(-w, 1, (-pi_i * s) * amp);
    } else {
      out.add_pole(w, 1, (pi_i * s) * amp);
    }
  }

  // C(w) = c0 + w q(w)
  Su2Vector c0 = p.const_num.empty() ? Su2Vector{} : p.const_num[0];
  std::vector<Su2Vector> q;
  if (p.const_num.size() > 1) q.assign(p.const_num.begin() + 1, p.const_num.end());

  for (std::size_t a = 0; a < roots.size(); ++a) {
    const cplx w = roots[a];
    const cplx s = 1.0 / dprime[a];
    const Gl2Vector bq(eval_su2(q, w));
    if (upper_half(w)) {
      out.add_pole(-w, 1, (pi_i * s) * bq);
    } else {
      out.add_pole(w, 1, (pi_i * s) * bq);
    }
    if (c0.max_abs() > 0.0) {
      const Gl2Vector cc(c0);
      const cplx r = pi_i * s / w;
      if (upper_half(w)) {
        out.add_pole(0.0, 1, -r * cc);
        out.add_pole(-w, 1, r * cc);
      } else {
        out.add_pole(w, 1, r * cc);
        out.add_pole(0.0, 1, -r * cc);
      }
    }
  }
  return canonicalize(std::move(out));
}

LoopElement omega_integral_to_loop(const OmegaPotential& h, const OmegaPotential& f,
                                   const OmegaPotential& e, int max_order) {
  SpectralPotentials p;
  p.den = h.den;
  const std::size_t nl = std::max(h.numerator.size(), f.numerator.size());
  p.lambda_num.resize(nl);
  for (std::size_t k = 0; k < h.numerator.size(); ++k) p.lambda_num[k].h = h.numerator[k];
  for (std::size_t k = 0; k < f.numerator.size(); ++k) p.lambda_num[k].f = f.numerator[k];
  p.const_num.resize(e.numerator.size());
  for (std::size_t k = 0; k < e.numerator.size(); ++k) p.const_num[k].e = e.numerator[k];
  return omega_integral_to_loop(p, max_order);
}

}  // namespace soliton
