#include "soliton/aks.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "soliton/error.hpp"

namespace soliton {

namespace {

int pole_index(const PoleSet& poles, cplx alpha) {
  const auto& all = poles.all();
  for (std::size_t i = 0; i < all.size(); ++i) {
    const double scale = std::max({1.0, std::abs(alpha), std::abs(all[i])});
    if (std::abs(all[i] - alpha) <= poles.merge_tol() * scale) return static_cast<int>(i);
  }
  return -1;
}

std::vector<cplx> repeated_roots(const PoleSet& poles, int k, int skip = -1) {
  std::vector<cplx> out;
  const auto& all = poles.all();
  for (std::size_t i = 0; i < all.size(); ++i)
    if (static_cast<int>(i) != skip)
      for (int r = 0; r < k; ++r) out.push_back(all[i]);
  return out;
}

// First `count` Taylor coefficients of p about a.
poly::Poly taylor(const poly::Poly& p, cplx a, int count) {
  const auto ex = poly::expand_over_pole(p, a, count);
  poly::Poly t(static_cast<std::size_t>(count));
  for (int s = 0; s < count; ++s) t[static_cast<std::size_t>(s)] = ex.pole[static_cast<std::size_t>(count - 1 - s)];
  return t;
}

// Laurent coefficients c[r-1] of (lambda - beta)^{-r}, r = 1..j, of p / D^j at the
// root beta = poles.all()[idx]. p must be proper relative to D^j.
poly::Poly laurent_over_dj(const poly::Poly& p, const PoleSet& poles, int idx, int j) {
  const cplx beta = poles.all()[static_cast<std::size_t>(idx)];
  const poly::Poly r = poly::from_roots(repeated_roots(poles, j, idx));
  const poly::Poly tp = taylor(p, beta, j), tr = taylor(r, beta, j);
  // series quotient q = tp / tr
  poly::Poly q(static_cast<std::size_t>(j), 0.0);
  for (int s = 0; s < j; ++s) {
    cplx acc = tp[static_cast<std::size_t>(s)];
    for (int u = 0; u < s; ++u) acc -= q[static_cast<std::size_t>(u)] * tr[static_cast<std::size_t>(s - u)];
    q[static_cast<std::size_t>(s)] = acc / tr[0];
  }
  poly::Poly c(static_cast<std::size_t>(j));
  for (int rr = 1; rr <= j; ++rr) c[static_cast<std::size_t>(rr - 1)] = q[static_cast<std::size_t>(j - rr)];
  return c;
}

// Partial fractions of the su(2)-valued proper fraction [h H + f F + e E](lambda) / D^j.
void add_over_dj(LoopElement& out, const poly::Poly& h, const poly::Poly& f, const poly::Poly& e,
                 const PoleSet& poles, int j) {
  const int count = static_cast<int>(poles.all().size());
  for (int idx = 0; idx < count; ++idx) {
    const poly::Poly ch = laurent_over_dj(h, poles, idx, j), cf = laurent_over_dj(f, poles, idx, j),
                     ce = laurent_over_dj(e, poles, idx, j);
    for (int r = 1; r <= j; ++r) {
      const std::size_t u = static_cast<std::size_t>(r - 1);
      out.add_pole(poles.all()[static_cast<std::size_t>(idx)], r, Gl2Vector{0.0, ch[u], cf[u], ce[u]});
    }
  }
}

double element_scale(const LoopElement& x) { return std::max(1.0, x.scale()); }

cplx& coord(std::vector<std::vector<cplx>>& v, int j, int m) {
  return v[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(m)];
}

}  // namespace

// ---------------------------------------------------------------- invariant functions

LoopElement m_operator(const LoopElement& x, const PoleSet& poles, int k) {
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "m_operator needs k >= 0");
  if (k == 0) return x;
  const poly::Poly p = poly::from_roots(repeated_roots(poles, k));
  LoopElement out(x.max_order, x.merge_tol);
  for (std::size_t m = 0; m < x.poly.size(); ++m)
    for (std::size_t t = 0; t < p.size(); ++t) out.add_poly(m + t, p[t] * x.poly[m]);

  for (const auto& pt : x.poles) {
    const int idx = pole_index(poles, pt.alpha);
    if (idx < 0) {
      LoopElement single(x.max_order, x.merge_tol);
      single.poles.push_back(pt);
      out = out + multiply_scalar_poly(single, p);
      continue;
    }
    // p = (lambda - beta)^k r exactly, so the pole order drops by k.
    const poly::Poly r = poly::from_roots(repeated_roots(poles, k, idx));
    for (std::size_t jj = 0; jj < pt.coeffs.size(); ++jj) {
      const int j = static_cast<int>(jj) + 1;
      const Gl2Vector& c = pt.coeffs[jj];
      if (j <= k) {
        const poly::Poly q = poly::multiply(r, poly::from_roots(std::vector<cplx>(static_cast<std::size_t>(k - j), pt.alpha)));
        for (std::size_t t = 0; t < q.size(); ++t) out.add_poly(t, q[t] * c);
      } else {
        const auto ex = poly::expand_over_pole(r, pt.alpha, j - k);
        for (std::size_t t = 0; t < ex.quotient.size(); ++t) out.add_poly(t, ex.quotient[t] * c);
        for (std::size_t u = 0; u < ex.pole.size(); ++u) out.add_pole(pt.alpha, static_cast<int>(u) + 1, ex.pole[u] * c);
      }
    }
  }
  double ps = 0.0;
  for (cplx c : p) ps = std::max(ps, std::abs(c));
  return canonicalize(std::move(out), x.scale() * ps);
}

cplx phi_k(const LoopElement& x, const PoleSet& poles, int k) {
  return 0.5 * inner_product(m_operator(x, poles, k), x);
}

LoopElement grad_phi_k(const LoopElement& x, const PoleSet& poles, int k) { return m_operator(x, poles, k); }

LoopElement aks_rhs(const LoopElement& x, const PoleSet& poles, int k) {
  return commutator(proj_b(m_operator(x, poles, k)), x);
}

// ---------------------------------------------------------------- extended coordinates

ExtendedState ExtendedState::zero(int n, int j_max) {
  if (n < 0 || j_max < 1) throw Error(ErrorKind::InvalidArgument, "extended state needs n >= 0, j_max >= 1");
  ExtendedState s;
  s.n = n;
  s.j_max = j_max;
  for (int j = 1; j <= j_max; ++j) {
    const std::size_t len = static_cast<std::size_t>(j * (n + 1) + 1);
    s.h.emplace_back(len, 0.0);
    s.f.emplace_back(len, 0.0);
    s.e.emplace_back(len, 0.0);
  }
  return s;
}

namespace {

cplx read_coord(const ExtendedState& s, const std::vector<std::vector<cplx>>& v, int j, int power, int parity) {
  if (j < 1 || j > s.j_max || power < 0 || (power % 2) != parity) return 0.0;
  const int m = (power - parity) / 2;
  if (m > s.top(j)) return 0.0;
  return v[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(m)];
}

}  // namespace

cplx ExtendedState::h_coord(int j, int power) const { return read_coord(*this, h, j, power, 1); }
cplx ExtendedState::f_coord(int j, int power) const { return read_coord(*this, f, j, power, 1); }
cplx ExtendedState::e_coord(int j, int power) const { return read_coord(*this, e, j, power, 0); }

std::vector<cplx> ExtendedState::flatten() const {
  std::vector<cplx> v{h0, f0, e0};
  for (int j = 0; j < j_max; ++j) {
    const auto js = static_cast<std::size_t>(j);
    v.insert(v.end(), h[js].begin(), h[js].end());
    v.insert(v.end(), f[js].begin(), f[js].end());
    v.insert(v.end(), e[js].begin(), e[js].end());
  }
  return v;
}

void ExtendedState::assign(std::span<const cplx> v) {
  std::size_t i = 0;
  h0 = v[i++];
  f0 = v[i++];
  e0 = v[i++];
  for (int j = 0; j < j_max; ++j) {
    const auto js = static_cast<std::size_t>(j);
    for (auto& c : h[js]) c = v[i++];
    for (auto& c : f[js]) c = v[i++];
    for (auto& c : e[js]) c = v[i++];
  }
}

double ExtendedState::max_abs() const {
  double m = 0.0;
  for (cplx c : flatten()) m = std::max(m, std::abs(c));
  return m;
}

ExtendedState operator+(const ExtendedState& a, const ExtendedState& b) {
  ExtendedState out = a;
  auto va = a.flatten();
  const auto vb = b.flatten();
  for (std::size_t i = 0; i < va.size(); ++i) va[i] += vb[i];
  out.assign(va);
  return out;
}

ExtendedState operator*(cplx s, const ExtendedState& a) {
  ExtendedState out = a;
  auto v = a.flatten();
  for (auto& c : v) c *= s;
  out.assign(v);
  return out;
}

LoopElement to_loop(const ExtendedState& s, const PoleSet& poles) {
  if (poles.soliton_count() != s.n) throw Error(ErrorKind::InvalidArgument, "pole set does not match state");
  LoopElement out(std::max(kDefaultMaxOrder, s.j_max));
  out.add_poly(1, Gl2Vector{0.0, s.h0, s.f0, 0.0});
  out.add_poly(0, Gl2Vector{0.0, 0.0, 0.0, s.e0});
  for (int j = 1; j <= s.j_max; ++j) {
    const std::size_t deg = static_cast<std::size_t>(2 * s.top(j) + 2);
    poly::Poly ph(deg, 0.0), pf(deg, 0.0), pe(deg, 0.0);
    for (int m = 0; m <= s.top(j); ++m) {
      const auto mi = static_cast<std::size_t>(m);
      ph[2 * mi + 1] = s.h[static_cast<std::size_t>(j - 1)][mi];
      pf[2 * mi + 1] = s.f[static_cast<std::size_t>(j - 1)][mi];
      pe[2 * mi] = s.e[static_cast<std::size_t>(j - 1)][mi];
    }
    add_over_dj(out, ph, pf, pe, poles, j);
  }
  return canonicalize(std::move(out), std::max(1.0, s.max_abs()));
}

ExtendedState from_loop(const LoopElement& x, const PoleSet& poles, int j_max) {
  const double tol = 1e-10 * element_scale(x);
  if (x.poly.size() > 2) throw Error(ErrorKind::DomainError, "element has polynomial degree above 1");
  const Gl2Vector p0 = x.poly_coeff(0), p1 = x.poly_coeff(1);
  if (std::abs(p0.id) + std::abs(p0.h) + std::abs(p0.f) > tol || std::abs(p1.id) + std::abs(p1.e) > tol)
    throw Error(ErrorKind::DomainError, "polynomial part is not lambda (h0 H + f0 F) + e0 E");
  for (const auto& pt : x.poles) {
    if (pole_index(poles, pt.alpha) < 0) throw Error(ErrorKind::DomainError, "pole outside the pole set");
    if (static_cast<int>(pt.coeffs.size()) > j_max) throw Error(ErrorKind::DomainError, "pole order above j_max");
  }
  ExtendedState s = ExtendedState::zero(poles.soliton_count(), j_max);
  s.h0 = p1.h;
  s.f0 = p1.f;
  s.e0 = p0.e;

  const LoopElement r = m_operator(proj_a(x), poles, j_max);
  const poly::Poly d = poles.d_polynomial();
  auto component = [&](cplx Gl2Vector::*field) {
    poly::Poly p;
    for (const auto& c : r.poly) p.push_back(c.*field);
    return p;
  };
  poly::Poly rh = component(&Gl2Vector::h), rf = component(&Gl2Vector::f), re = component(&Gl2Vector::e);
  const poly::Poly rid = component(&Gl2Vector::id);
  for (cplx c : rid)
    if (std::abs(c) > tol) throw Error(ErrorKind::DomainError, "pole part has an identity component");

  for (int j = j_max; j >= 1; --j) {
    poly::Poly ph, pf, pe;
    if (j > 1) {
      auto [qh, remh] = poly::divmod_monic(rh, d);
      auto [qf, remf] = poly::divmod_monic(rf, d);
      auto [qe, reme] = poly::divmod_monic(re, d);
      ph = remh, pf = remf, pe = reme;
      rh = qh, rf = qf, re = qe;
    } else {
      ph = rh, pf = rf, pe = re;
    }
    const int top = s.top(j);
    for (std::size_t p = 0; p < std::max({ph.size(), pf.size(), pe.size()}); ++p) {
      const cplx vh = p < ph.size() ? ph[p] : 0.0, vf = p < pf.size() ? pf[p] : 0.0,
                 ve = p < pe.size() ? pe[p] : 0.0;
      const int m = static_cast<int>(p) / 2;
      if (p % 2 == 1) {
        if (std::abs(ve) > tol) throw Error(ErrorKind::DomainError, "E coefficient at an odd power");
        if (m > top) {
          if (std::abs(vh) + std::abs(vf) > tol) throw Error(ErrorKind::DomainError, "numerator degree too high");
          continue;
        }
        coord(s.h, j, m) = vh;
        coord(s.f, j, m) = vf;
      } else {
        if (std::abs(vh) + std::abs(vf) > tol) throw Error(ErrorKind::DomainError, "H/F coefficient at an even power");
        if (m > top) {
          if (std::abs(ve) > tol) throw Error(ErrorKind::DomainError, "numerator degree too high");
          continue;
        }
        coord(s.e, j, m) = ve;
      }
    }
  }
  return s;
}

ExtendedState extended_flow_rhs(const ExtendedState& s, const PoleSet& poles) {
  ExtendedState out = ExtendedState::zero(s.n, s.j_max);
  const poly::Poly d = poles.d_polynomial();
  const int dn = 2 * (s.n + 2);
  // c lambda^{base} (lambda^{2n+4} - D) / D^j into the E coordinates of order j
  auto add_reduction = [&](int j, int base, cplx c) {
    for (int p = 0; p < dn; p += 2) coord(out.e, j, (base + p) / 2) -= c * d[static_cast<std::size_t>(p)];
  };
  for (int j = 1; j <= s.j_max; ++j) {
    for (int m = 0; m <= s.top(j); ++m) {
      const auto js = static_cast<std::size_t>(j - 1), ms = static_cast<std::size_t>(m);
      const cplx h = s.h[js][ms], f = s.f[js][ms], e = s.e[js][ms];
      coord(out.h, j, m) += 2.0 * (s.f0 * e - s.e0 * f);
      coord(out.f, j, m) += 2.0 * (s.e0 * h - s.h0 * e);
      const cplx de = 2.0 * (s.h0 * f - s.f0 * h);
      if (m < s.top(j)) {
        coord(out.e, j, m + 1) += de;
      } else if (j == 1) {
        // lambda^{2n+4} / D = 1 + (lambda^{2n+4} - D) / D
        out.e0 += de;
        add_reduction(1, 0, de);
      } else {
        // lambda^{2j(n+1)+2} / D^j = lambda^{2(j-1)(n+1)} / D^{j-1} + lambda^{2(j-1)(n+1)} (lambda^{2n+4} - D) / D^j
        coord(out.e, j - 1, s.top(j - 1)) += de;
        add_reduction(j, 2 * s.top(j - 1), de);
      }
    }
  }
  return out;
}

ExtendedState random_extended_state(int n, int j_max, unsigned long long seed, double scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  ExtendedState s = ExtendedState::zero(n, j_max);
  auto v = s.flatten();
  for (auto& c : v) c = u(rng);
  s.assign(v);
  return s;
}

// ---------------------------------------------------------------- functionals

namespace {

bool is_bold(FunctionalKind k) {
  return k == FunctionalKind::boldH || k == FunctionalKind::boldF || k == FunctionalKind::boldE;
}

}  // namespace

cplx functional_value(const LoopElement& x, const PoleSet& poles, FunctionalId id) {
  const cplx s = poles.sum_alpha_sq();
  switch (id.kind) {
    case FunctionalKind::h0: return x.poly_coeff(1).h;
    case FunctionalKind::f0: return x.poly_coeff(1).f;
    case FunctionalKind::e0: return x.poly_coeff(0).e;
    case FunctionalKind::h1_top: return x.laurent_at_infinity(1).h;
    case FunctionalKind::f1_top: return x.laurent_at_infinity(1).f;
    case FunctionalKind::e1_top: return x.laurent_at_infinity(2).e;
    case FunctionalKind::hamiltonian: {
      const cplx e0 = x.poly_coeff(0).e, h0 = x.poly_coeff(1).h, f0 = x.poly_coeff(1).f;
      const Gl2Vector l1 = x.laurent_at_infinity(1);
      return e0 * e0 + 2.0 * (h0 * l1.h + f0 * l1.f);
    }
    default: break;
  }
  if (id.n_index < 0 || id.n_index > 1)
    throw Error(ErrorKind::InvalidFunctional, "bold functionals with N >= 2 are not determined by the loop element");
  const bool odd = id.kind != FunctionalKind::boldE;
  const int r = odd ? 1 : 2;
  const Gl2Vector lo = x.laurent_at_infinity(r);
  Gl2Vector v = lo;
  if (id.n_index == 1) v = x.laurent_at_infinity(r + 2) - s * lo;
  switch (id.kind) {
    case FunctionalKind::boldH: return v.h;
    case FunctionalKind::boldF: return v.f;
    default: return v.e;
  }
}

cplx functional_value(const ExtendedState& st, const PoleSet& poles, FunctionalId id) {
  const int n = st.n;
  const int big = 2 * (n + 2);
  switch (id.kind) {
    case FunctionalKind::h0: return st.h0;
    case FunctionalKind::f0: return st.f0;
    case FunctionalKind::e0: return st.e0;
    case FunctionalKind::h1_top: return st.h_coord(1, 2 * n + 3);
    case FunctionalKind::f1_top: return st.f_coord(1, 2 * n + 3);
    case FunctionalKind::e1_top: return st.e_coord(1, 2 * n + 2);
    case FunctionalKind::hamiltonian:
      return st.e0 * st.e0 + 2.0 * (st.h0 * st.h_coord(1, 2 * n + 3) + st.f0 * st.f_coord(1, 2 * n + 3));
    default: break;
  }
  (void)poles;
  if (id.n_index < 0) throw Error(ErrorKind::InvalidFunctional, "N must be nonnegative");
  cplx acc = 0.0;
  for (int j = 1; j <= id.n_index + 1; ++j) {
    switch (id.kind) {
      case FunctionalKind::boldH: acc += st.h_coord(j, j * big - 2 * id.n_index - 1); break;
      case FunctionalKind::boldF: acc += st.f_coord(j, j * big - 2 * id.n_index - 1); break;
      default: acc += st.e_coord(j, j * big - 2 * id.n_index - 2); break;
    }
  }
  return acc;
}

LoopElement functional_gradient(const LoopElement& x, const PoleSet& poles, FunctionalId id) {
  const int n = poles.soliton_count();
  const cplx s = poles.sum_alpha_sq();
  const Gl2Vector H = Gl2Vector::H(), F = Gl2Vector::F(), E = Gl2Vector::E();
  auto mono = [&](const Gl2Vector& c, int power) { return LoopElement::monomial(c, power, x.max_order); };
  auto top_over_d = [&](bool use_h) {
    // -1/2 lambda^{2n+3} / D times H or F
    poly::Poly num(static_cast<std::size_t>(2 * n + 4), 0.0);
    num[static_cast<std::size_t>(2 * n + 3)] = -0.5;
    const poly::Poly zero;
    LoopElement out(x.max_order, x.merge_tol);
    add_over_dj(out, use_h ? num : zero, use_h ? zero : num, zero, poles, 1);
    return canonicalize(std::move(out), 1.0);
  };
  switch (id.kind) {
    case FunctionalKind::h0: return top_over_d(true);
    case FunctionalKind::f0: return top_over_d(false);
    case FunctionalKind::e0: return mono(-0.5 * E, 0);
    case FunctionalKind::h1_top: return mono(-0.5 * H, 1);
    case FunctionalKind::f1_top: return mono(-0.5 * F, 1);
    case FunctionalKind::e1_top: return mono(-0.5 * E, 2);
    case FunctionalKind::hamiltonian: {
      const cplx e0 = x.poly_coeff(0).e, h0 = x.poly_coeff(1).h, f0 = x.poly_coeff(1).f;
      const Gl2Vector l1 = x.laurent_at_infinity(1);
      return 2.0 * e0 * mono(-0.5 * E, 0) + 2.0 * l1.h * top_over_d(true) + 2.0 * h0 * mono(-0.5 * H, 1) +
             2.0 * l1.f * top_over_d(false) + 2.0 * f0 * mono(-0.5 * F, 1);
    }
    default: break;
  }
  if (id.n_index < 0 || id.n_index > 1)
    throw Error(ErrorKind::InvalidFunctional, "bold functionals with N >= 2 are not determined by the loop element");
  const Gl2Vector b = id.kind == FunctionalKind::boldH ? H : id.kind == FunctionalKind::boldF ? F : E;
  const int base = id.kind == FunctionalKind::boldE ? 2 : 1;
  const LoopElement g0 = mono(-0.5 * b, base);
  if (id.n_index == 0) return g0;
  return mono(-0.5 * b, base + 2) - s * g0;
}

cplx higher_functional(const LoopElement& x, const PoleSet& poles, int n_index, FunctionalKind kind) {
  if (!is_bold(kind)) throw Error(ErrorKind::InvalidFunctional, "not a higher-order functional");
  return functional_value(x, poles, {kind, n_index});
}

LoopElement higher_functional_gradient(const LoopElement& x, const PoleSet& poles, int n_index,
                                       FunctionalKind kind) {
  if (!is_bold(kind)) throw Error(ErrorKind::InvalidFunctional, "not a higher-order functional");
  return functional_gradient(x, poles, {kind, n_index});
}

// ---------------------------------------------------------------- brackets

cplx poisson_bracket(const LoopElement& x, const LoopElement& grad_a, const LoopElement& grad_b) {
  return -inner_product(x, commutator(proj_b(grad_a), proj_b(grad_b)));
}

cplx poisson_bracket(const LoopElement& x, const PoleSet& poles, FunctionalId a, FunctionalId b) {
  return poisson_bracket(x, functional_gradient(x, poles, a), functional_gradient(x, poles, b));
}

double involution_check(const LoopElement& x, const PoleSet& poles, int j, int k) {
  if (j == k) return 0.0;
  return std::abs(poisson_bracket(x, grad_phi_k(x, poles, j), grad_phi_k(x, poles, k)));
}

double canonical_flow_check(const ExtendedState& s, const PoleSet& poles) {
  const LoopElement x = to_loop(s, poles);
  const ExtendedState rhs = extended_flow_rhs(s, poles);
  const FunctionalId ham{FunctionalKind::hamiltonian, 0};
  const int n = s.n;
  const std::pair<FunctionalKind, cplx> pairs[] = {
      {FunctionalKind::e0, rhs.e0},
      {FunctionalKind::h1_top, rhs.h_coord(1, 2 * n + 3)},
      {FunctionalKind::f1_top, rhs.f_coord(1, 2 * n + 3)},
      {FunctionalKind::e1_top, rhs.e_coord(1, 2 * n + 2)},
  };
  double worst = std::max(std::abs(rhs.h0), std::abs(rhs.f0));
  for (const auto& [kind, value] : pairs)
    worst = std::max(worst, std::abs(poisson_bracket(x, poles, {kind, 0}, ham) - value));
  return worst;
}

// ---------------------------------------------------------------- integration

namespace {

void check_finite(const LoopElement& x, double t) {
  const double s = x.scale();
  if (!std::isfinite(s)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "non-finite state at t = %g", t);
    throw Error(ErrorKind::StepOverflow, buf);
  }
}

}  // namespace

Trajectory integrate_flow(const ExtendedState& s0, const PoleSet& poles, const FlowConfig& cfg) {
  if (!(cfg.step > 0.0) || cfg.t_end < 0.0 || cfg.k < 0)
    throw Error(ErrorKind::InvalidArgument, "flow needs step > 0, t_end >= 0, k >= 0");
  const long steps = cfg.t_end == 0.0 ? 0 : static_cast<long>(std::ceil(cfg.t_end / cfg.step - 1e-9));
  const double h = steps == 0 ? 0.0 : cfg.t_end / static_cast<double>(steps);

  Trajectory tr;
  auto record = [&](double t, const LoopElement& x) {
    check_finite(x, t);
    tr.t.push_back(t);
    tr.x.push_back(x);
    tr.phi0.push_back(phi_k(x, poles, 0));
    tr.phi1.push_back(phi_k(x, poles, 1));
  };

  if (cfg.k == 0) {
    ExtendedState s = s0;
    record(0.0, to_loop(s, poles));
    for (long i = 1; i <= steps; ++i) {
      const ExtendedState k1 = extended_flow_rhs(s, poles);
      const ExtendedState k2 = extended_flow_rhs(s + (0.5 * h) * k1, poles);
      const ExtendedState k3 = extended_flow_rhs(s + (0.5 * h) * k2, poles);
      const ExtendedState k4 = extended_flow_rhs(s + h * k3, poles);
      s = s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      record(static_cast<double>(i) * h, to_loop(s, poles));
    }
    return tr;
  }

  LoopElement x = to_loop(s0, poles);
  record(0.0, x);
  for (long i = 1; i <= steps; ++i) {
    const LoopElement k1 = aks_rhs(x, poles, cfg.k);
    const LoopElement k2 = aks_rhs(x + (0.5 * h) * k1, poles, cfg.k);
    const LoopElement k3 = aks_rhs(x + (0.5 * h) * k2, poles, cfg.k);
    const LoopElement k4 = aks_rhs(x + h * k3, poles, cfg.k);
    x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    record(static_cast<double>(i) * h, x);
  }
  return tr;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& tr, const PoleSet& poles) {
  out << "t,phi0,phi1,h0,f0,e0,h1_top,f1_top,e1_top\n";
  char buf[512];
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    const LoopElement& x = tr.x[i];
    auto v = [&](FunctionalKind k) { return functional_value(x, poles, {k, 0}).real(); };
    std::snprintf(buf, sizeof buf, "%.16e,%.16e,%.16e,%.16e,%.16e,%.16e,%.16e,%.16e,%.16e\n", tr.t[i],
                  tr.phi0[i].real(), tr.phi1[i].real(), v(FunctionalKind::h0), v(FunctionalKind::f0),
                  v(FunctionalKind::e0), v(FunctionalKind::h1_top), v(FunctionalKind::f1_top),
                  v(FunctionalKind::e1_top));
    out << buf;
  }
}

std::vector<InvolutionEntry> involution_sweep(const PoleSet& poles, int k_max, int samples,
                                              unsigned long long seed) {
  std::vector<InvolutionEntry> out;
  for (int j = 0; j <= k_max; ++j)
    for (int k = 0; k <= k_max; ++k) out.push_back({j, k, 0.0});
  for (int s = 0; s < samples; ++s) {
    const LoopElement x =
        to_loop(random_extended_state(poles.soliton_count(), 1, seed + static_cast<unsigned long long>(s)), poles);
    for (auto& e : out) e.max_abs = std::max(e.max_abs, involution_check(x, poles, e.j, e.k));
  }
  return out;
}

void write_involution_csv(std::ostream& out, std::span<const InvolutionEntry> entries) {
  out << "j,k,max_abs\n";
  char buf[96];
  for (const auto& e : entries) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.16e\n", e.j, e.k, e.max_abs);
    out << buf;
  }
}

}  // namespace soliton
