#include "soliton/loop_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "soliton/error.hpp"

namespace soliton {

namespace {

constexpr double kSamePole = 8.0 * std::numeric_limits<double>::epsilon();

double pole_scale(cplx a, cplx b) { return std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

// ---------------------------------------------------------------- PoleSet

PoleSet::PoleSet(std::vector<double> m_list, double omega0, double sigma, double merge_tol)
    : m_(std::move(m_list)), omega0_(omega0), sigma_(sigma), merge_tol_(merge_tol) {
  if (!(sigma_ > 0.0)) throw Error(ErrorKind::InvalidArgument, "sigma must be positive");
  for (double m : m_) {
    if (!(m > 0.0)) throw Error(ErrorKind::InvalidArgument, "spectral m must be positive");
    half_.emplace_back(0.0, m);
  }
  half_.emplace_back(omega0_, -sigma_);
  half_.emplace_back(omega0_, sigma_);
  all_ = half_;
  for (cplx a : half_) all_.push_back(-a);
  for (std::size_t i = 0; i < all_.size(); ++i) {
    for (std::size_t j = i + 1; j < all_.size(); ++j) {
      if (std::abs(all_[i] - all_[j]) <= merge_tol_ * pole_scale(all_[i], all_[j])) {
        throw Error(ErrorKind::PoleCollision, "pole set contains coincident poles");
      }
    }
  }
}

cplx PoleSet::sum_alpha_sq() const {
  cplx s = 0.0;
  for (cplx a : half_) s += a * a;
  return s;
}

poly::Poly PoleSet::d_polynomial() const { return poly::from_roots(all_); }

// ---------------------------------------------------------------- LoopElement

LoopElement LoopElement::monomial(const Gl2Vector& c, int power, int max_order) {
  LoopElement x(max_order);
  x.add_poly(static_cast<std::size_t>(power), c);
  return x;
}

LoopElement LoopElement::pole_term(const Gl2Vector& c, cplx alpha, int order, int max_order) {
  LoopElement x(max_order);
  x.add_pole(alpha, order, c);
  return x;
}

double LoopElement::scale() const {
  double s = 0.0;
  for (const auto& c : poly) s = std::max(s, c.max_abs());
  for (const auto& p : poles)
    for (const auto& c : p.coeffs) s = std::max(s, c.max_abs());
  return s;
}

Gl2Vector LoopElement::poly_coeff(std::size_t m) const {
  return m < poly.size() ? poly[m] : Gl2Vector{};
}

int LoopElement::find_pole(cplx alpha) const {
  for (std::size_t k = 0; k < poles.size(); ++k) {
    const double d = std::abs(poles[k].alpha - alpha);
    const double s = pole_scale(poles[k].alpha, alpha);
    if (d <= kSamePole * s) return static_cast<int>(k);
    if (d <= merge_tol * s) {
      throw Error(ErrorKind::PoleCollision, "poles closer than merge tolerance but not identical");
    }
  }
  return -1;
}

void LoopElement::add_pole(cplx alpha, int order, const Gl2Vector& c) {
  if (order < 1) throw Error(ErrorKind::InvalidArgument, "pole order must be >= 1");
  if (order > max_order) {
    if (c.is_zero()) return;
    throw Error(ErrorKind::OrderOverflow, "pole order " + std::to_string(order) +
                                              " exceeds bound " + std::to_string(max_order));
  }
  int k = find_pole(alpha);
  if (k < 0) {
    poles.push_back({alpha, {}});
    k = static_cast<int>(poles.size()) - 1;
  }
  auto& coeffs = poles[static_cast<std::size_t>(k)].coeffs;
  if (coeffs.size() < static_cast<std::size_t>(order)) coeffs.resize(static_cast<std::size_t>(order));
  coeffs[static_cast<std::size_t>(order - 1)] += c;
}

void LoopElement::add_poly(std::size_t power, const Gl2Vector& c) {
  if (poly.size() <= power) poly.resize(power + 1);
  poly[power] += c;
}

Gl2Vector LoopElement::laurent_at_infinity(int r) const {
  Gl2Vector out;
  for (const auto& p : poles) {
    for (int j = 1; j <= std::min<int>(r, static_cast<int>(p.coeffs.size())); ++j) {
      const cplx w = poly::binomial(r - 1, r - j) * std::pow(p.alpha, r - j);
      out += w * p.coeffs[static_cast<std::size_t>(j - 1)];
    }
  }
  return out;
}

LoopElement canonicalize(LoopElement x, double scale) {
  if (scale <= 0.0) scale = x.scale();
  const double tol = kPruneTol * scale;
  while (!x.poly.empty() && x.poly.back().max_abs() <= tol) x.poly.pop_back();
  for (auto& p : x.poles)
    while (!p.coeffs.empty() && p.coeffs.back().max_abs() <= tol) p.coeffs.pop_back();
  std::erase_if(x.poles, [](const PoleTerm& p) { return p.coeffs.empty(); });
  return x;
}

namespace {

LoopElement add_raw(const LoopElement& x, const LoopElement& y, cplx sy) {
  LoopElement out = x;
  out.max_order = std::max(x.max_order, y.max_order);
  for (std::size_t m = 0; m < y.poly.size(); ++m) out.add_poly(m, sy * y.poly[m]);
  for (const auto& p : y.poles)
    for (std::size_t j = 0; j < p.coeffs.size(); ++j)
      out.add_pole(p.alpha, static_cast<int>(j + 1), sy * p.coeffs[j]);
  return out;
}

// lambda^m / (lambda - a)^j
poly::PoleExpansion mono_over_pole(int m, cplx a, int j) {
  poly::Poly p(static_cast<std::size_t>(m + 1), 0.0);
  p.back() = 1.0;
  return poly::expand_over_pole(std::move(p), a, j);
}

// Accumulate (coefficient) * lambda^m / (lambda - a)^j into out.
void accumulate_mono_pole(LoopElement& out, int m, cplx a, int j, const Gl2Vector& c) {
  const auto ex = mono_over_pole(m, a, j);
  for (std::size_t t = 0; t < ex.quotient.size(); ++t) out.add_poly(t, ex.quotient[t] * c);
  for (std::size_t r = 0; r < ex.pole.size(); ++r)
    if (ex.pole[r] != 0.0) out.add_pole(a, static_cast<int>(r + 1), ex.pole[r] * c);
}

// c / ((lambda - a)^i (lambda - b)^j) with a != b, by partial fractions.
void accumulate_pole_pole(LoopElement& out, cplx a, int i, cplx b, int j, const Gl2Vector& c) {
  const cplx inv_ab = 1.0 / (a - b);
  for (int k = 0; k < i; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const cplx w = sign * poly::binomial(j + k - 1, k) * std::pow(inv_ab, j + k);
    out.add_pole(a, i - k, w * c);
  }
  const cplx inv_ba = -inv_ab;
  for (int k = 0; k < j; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const cplx w = sign * poly::binomial(i + k - 1, k) * std::pow(inv_ba, i + k);
    out.add_pole(b, j - k, w * c);
  }
}

bool same_pole(cplx a, cplx b, double merge_tol) {
  const double d = std::abs(a - b);
  const double s = pole_scale(a, b);
  if (d <= kSamePole * s) return true;
  if (d <= merge_tol * s) {
    throw Error(ErrorKind::PoleCollision, "poles closer than merge tolerance but not identical");
  }
  return false;
}

}  // namespace

LoopElement add(const LoopElement& x, const LoopElement& y) {
  return canonicalize(add_raw(x, y, 1.0), std::max(x.scale(), y.scale()));
}

LoopElement subtract(const LoopElement& x, const LoopElement& y) {
  return canonicalize(add_raw(x, y, -1.0), std::max(x.scale(), y.scale()));
}

LoopElement scale(const LoopElement& x, cplx s) {
  LoopElement out = x;
  for (auto& c : out.poly) c *= s;
  for (auto& p : out.poles)
    for (auto& c : p.coeffs) c *= s;
  return canonicalize(std::move(out), x.scale() * std::abs(s));
}

LoopElement operator+(const LoopElement& x, const LoopElement& y) { return add(x, y); }
LoopElement operator-(const LoopElement& x, const LoopElement& y) { return subtract(x, y); }
LoopElement operator*(cplx s, const LoopElement& x) { return scale(x, s); }

LoopElement multiply(const LoopElement& x, const LoopElement& y) {
  LoopElement out(std::max(x.max_order, y.max_order), std::max(x.merge_tol, y.merge_tol));
  for (std::size_t m = 0; m < x.poly.size(); ++m)
    for (std::size_t k = 0; k < y.poly.size(); ++k) out.add_poly(m + k, x.poly[m] * y.poly[k]);

  for (std::size_t m = 0; m < x.poly.size(); ++m)
    for (const auto& p : y.poles)
      for (std::size_t j = 0; j < p.coeffs.size(); ++j)
        accumulate_mono_pole(out, static_cast<int>(m), p.alpha, static_cast<int>(j + 1),
                             x.poly[m] * p.coeffs[j]);

  for (const auto& p : x.poles)
    for (std::size_t j = 0; j < p.coeffs.size(); ++j)
      for (std::size_t m = 0; m < y.poly.size(); ++m)
        accumulate_mono_pole(out, static_cast<int>(m), p.alpha, static_cast<int>(j + 1),
                             p.coeffs[j] * y.poly[m]);

  for (const auto& p : x.poles) {
    for (const auto& q : y.poles) {
      const bool same = same_pole(p.alpha, q.alpha, out.merge_tol);
      for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
        for (std::size_t j = 0; j < q.coeffs.size(); ++j) {
          const Gl2Vector c = p.coeffs[i] * q.coeffs[j];
          if (same) {
            out.add_pole(p.alpha, static_cast<int>(i + j + 2), c);
          } else {
            accumulate_pole_pole(out, p.alpha, static_cast<int>(i + 1), q.alpha,
                                 static_cast<int>(j + 1), c);
          }
        }
      }
    }
  }
  return canonicalize(std::move(out), x.scale() * y.scale());
}

LoopElement commutator(const LoopElement& x, const LoopElement& y) {
  const LoopElement xy = multiply(x, y);
  const LoopElement yx = multiply(y, x);
  return canonicalize(add_raw(xy, yx, -1.0), std::max(xy.scale(), yx.scale()));
}

LoopElement multiply_scalar_poly(const LoopElement& x, std::span<const cplx> p) {
  LoopElement out(x.max_order, x.merge_tol);
  for (std::size_t m = 0; m < x.poly.size(); ++m)
    for (std::size_t k = 0; k < p.size(); ++k) out.add_poly(m + k, p[k] * x.poly[m]);
  for (const auto& pt : x.poles) {
    for (std::size_t j = 0; j < pt.coeffs.size(); ++j) {
      auto ex = poly::expand_over_pole(poly::Poly(p.begin(), p.end()), pt.alpha,
                                       static_cast<int>(j + 1));
      for (std::size_t t = 0; t < ex.quotient.size(); ++t) out.add_poly(t, ex.quotient[t] * pt.coeffs[j]);
      for (std::size_t r = 0; r < ex.pole.size(); ++r)
        if (ex.pole[r] != 0.0) out.add_pole(pt.alpha, static_cast<int>(r + 1), ex.pole[r] * pt.coeffs[j]);
    }
  }
  double ps = 0.0;
  for (cplx c : p) ps = std::max(ps, std::abs(c));
  return canonicalize(std::move(out), x.scale() * ps);
}

Gl2Vector product_constant_term(const LoopElement& x, const LoopElement& y) {
  Gl2Vector out;
  if (!x.poly.empty() && !y.poly.empty()) out += x.poly[0] * y.poly[0];
  // lambda^m / (lambda - a)^j has constant polynomial term only when m >= j.
  auto const_term = [](int m, cplx a, int j) -> cplx {
    if (m < j) return 0.0;
    const auto ex = mono_over_pole(m, a, j);
    return ex.quotient.empty() ? cplx{0.0} : ex.quotient[0];
  };
  for (std::size_t m = 0; m < x.poly.size(); ++m)
    for (const auto& p : y.poles)
      for (std::size_t j = 0; j < p.coeffs.size(); ++j) {
        const cplx w = const_term(static_cast<int>(m), p.alpha, static_cast<int>(j + 1));
        if (w != 0.0) out += w * (x.poly[m] * p.coeffs[j]);
      }
  for (const auto& p : x.poles)
    for (std::size_t j = 0; j < p.coeffs.size(); ++j)
      for (std::size_t m = 0; m < y.poly.size(); ++m) {
        const cplx w = const_term(static_cast<int>(m), p.alpha, static_cast<int>(j + 1));
        if (w != 0.0) out += w * (p.coeffs[j] * y.poly[m]);
      }
  return out;
}

cplx inner_product(const LoopElement& x, const LoopElement& y) {
  const Gl2Vector c = product_constant_term(x, y);
  return 2.0 * c.id;
}

LoopElement proj_a(const LoopElement& x) {
  LoopElement out = x;
  out.poly.clear();
  return out;
}

LoopElement proj_b(const LoopElement& x) {
  LoopElement out = x;
  out.poles.clear();
  return out;
}

LoopElement proj_a_perp(const LoopElement& x) {
  LoopElement out = x;
  if (out.poly.size() > 1) out.poly.resize(1);
  return out;
}

LoopElement translate(const LoopElement& x, const Gl2Vector& x1) {
  for (std::size_t m = 1; m < x.poly.size(); ++m)
    if (!x.poly[m].is_zero()) throw Error(ErrorKind::DomainError, "translate requires x in a-perp");
  LoopElement out = x;
  out.add_poly(1, x1);
  return canonicalize(std::move(out), std::max(x.scale(), x1.max_abs()));
}

Mat2 evaluate(const LoopElement& x, cplx lambda) {
  Gl2Vector acc;
  cplx pw = 1.0;
  for (const auto& c : x.poly) {
    acc += pw * c;
    pw *= lambda;
  }
  for (const auto& p : x.poles) {
    const cplx d = lambda - p.alpha;
    if (std::abs(d) <= x.merge_tol * std::max(1.0, std::abs(p.alpha))) {
      throw Error(ErrorKind::NearPole, "evaluation point coincides with a pole");
    }
    const cplx inv = 1.0 / d;
    cplx w = inv;
    for (const auto& c : p.coeffs) {
      acc += w * c;
      w *= inv;
    }
  }
  return to_matrix(acc);
}

double max_coeff_diff(const LoopElement& x, const LoopElement& y) {
  return add_raw(x, y, -1.0).scale();
}

LoopElement qext_block(const Su2Vector& lambda_coeff, const Su2Vector& const_coeff, cplx alpha,
                       int order, int max_order) {
  const LoopElement up = LoopElement::pole_term(Gl2Vector::identity(), alpha, 1, max_order);
  const LoopElement dn = LoopElement::pole_term(Gl2Vector::identity(), -alpha, 1, max_order);
  LoopElement denom = LoopElement::monomial(Gl2Vector::identity(), 0, max_order);
  for (int j = 0; j < order; ++j) denom = multiply(multiply(denom, up), dn);
  LoopElement num(max_order);
  num.add_poly(0, Gl2Vector(const_coeff));
  num.add_poly(1, Gl2Vector(lambda_coeff));
  return multiply(num, denom);
}

// ---------------------------------------------------------------- omega side

std::vector<cplx> OmegaDenominator::roots() const {
  std::vector<cplx> r{{omega0, sigma}, {omega0, -sigma}};
  for (double m : m_list) {
    r.emplace_back(0.0, m);
    r.emplace_back(0.0, -m);
  }
  return r;
}

poly::Poly OmegaDenominator::polynomial() const {
  const auto r = roots();
  return poly::from_roots(r);
}

cplx OmegaDenominator::eval(cplx w) const {
  cplx d = (w - omega0) * (w - omega0) + sigma * sigma;
  for (double m : m_list) d *= w * w + m * m;
  return d;
}

void OmegaDenominator::check_distinct(double merge_tol) const {
  const auto r = roots();
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = i + 1; j < r.size(); ++j)
      if (std::abs(r[i] - r[j]) <= merge_tol * pole_scale(r[i], r[j]))
        throw Error(ErrorKind::PoleCollision, "omega-denominator roots coincide");
}

cplx OmegaPotential::eval(cplx w) const { return poly::eval(numerator, w) / den.eval(w); }

std::vector<cplx> OmegaPotential::odd_coefficients() const {
  std::vector<cplx> out;
  for (std::size_t k = 1; k < numerator.size(); k += 2) out.push_back(numerator[k]);
  return out;
}

double OmegaPotential::max_even_coefficient() const {
  double m = 0.0;
  for (std::size_t k = 0; k < numerator.size(); k += 2) m = std::max(m, std::abs(numerator[k]));
  return m;
}

int OmegaPotential::degree() const {
  int d = static_cast<int>(numerator.size()) - 1;
  while (d >= 0 && numerator[static_cast<std::size_t>(d)] == 0.0) --d;
  return d;
}

namespace {

OmegaPotential component(const std::vector<Su2Vector>& num, const OmegaDenominator& den,
                         cplx Su2Vector::*field) {
  OmegaPotential p;
  p.den = den;
  for (const auto& c : num) p.numerator.push_back(c.*field);
  return p;
}

}  // namespace

OmegaPotential SpectralPotentials::h1() const { return component(lambda_num, den, &Su2Vector::h); }
OmegaPotential SpectralPotentials::f1() const { return component(lambda_num, den, &Su2Vector::f); }
OmegaPotential SpectralPotentials::e1() const { return component(const_num, den, &Su2Vector::e); }

double SpectralPotentials::off_pattern() const {
  double m = 0.0;
  for (const auto& c : lambda_num) m = std::max(m, std::abs(c.e));
  for (const auto& c : const_num) m = std::max({m, std::abs(c.h), std::abs(c.f)});
  return m;
}

}  // namespace soliton
