#include "soliton/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "soliton/error.hpp"

namespace soliton {

namespace {

template <unsigned N>
void legendre_unit(std::vector<double>& x, std::vector<double>& w) {
  using rule = boost::math::quadrature::gauss<double, N>;
  const auto& a = rule::abscissa();
  const auto& b = rule::weights();
  for (std::size_t i = 0; i < a.size(); ++i) {
    // map [-1,1] to (0,1)
    if (a[i] == 0.0) {
      x.push_back(0.5);
      w.push_back(0.5 * b[i]);
      continue;
    }
    x.push_back(0.5 * (1.0 - a[i]));
    w.push_back(0.5 * b[i]);
    x.push_back(0.5 * (1.0 + a[i]));
    w.push_back(0.5 * b[i]);
  }
}

}  // namespace

double LorentzRule::apply(const std::function<double(double)>& f) const {
  double acc = 0.0;
  for (std::size_t q = 0; q < omega.size(); ++q) acc += weight[q] * f(omega[q]);
  return acc;
}

LorentzRule lorentzian_rule(const MediumParams& medium, int count) {
  std::vector<double> u, w;
  switch (count) {
    case 8: legendre_unit<8>(u, w); break;
    case 16: legendre_unit<16>(u, w); break;
    case 32: legendre_unit<32>(u, w); break;
    case 64: legendre_unit<64>(u, w); break;
    case 128: legendre_unit<128>(u, w); break;
    default: throw Error(ErrorKind::InvalidArgument, "unsupported node count " + std::to_string(count));
  }
  std::vector<std::size_t> order(u.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return u[a] < u[b]; });
  LorentzRule rule;
  for (std::size_t i : order) {
    rule.omega.push_back(medium.omega0 + medium.sigma * std::tan(std::numbers::pi * (u[i] - 0.5)));
    rule.weight.push_back(w[i]);
  }
  return rule;
}

double lorentzian_average(const std::function<double(double)>& f, const MediumParams& medium, double tol) {
  using boost::math::quadrature::gauss_kronrod;
  const double half = 0.5 * std::numbers::pi;
  auto integrand = [&](double theta) { return f(medium.omega0 + medium.sigma * std::tan(theta)) / std::numbers::pi; };
  double err = 0.0;
  const double value = gauss_kronrod<double, 31>::integrate(integrand, -half, half, 15, tol, &err);
  if (!std::isfinite(value) || err > 100.0 * tol * std::max(1.0, std::abs(value)))
    throw Error(ErrorKind::NonConvergent, "Lorentzian average error estimate " + std::to_string(err));
  return value;
}

cplx RationalFunction::eval(cplx w) const {
  cplx d = lead;
  for (cplx r : roots) d *= w - r;
  return poly::eval(num, w) / d;
}

cplx lorentzian_average(const RationalFunction& r, const MediumParams& medium) {
  poly::Poly num = r.num;
  double nmax = 0.0;
  for (cplx c : num) nmax = std::max(nmax, std::abs(c));
  poly::trim(num, 1e-14 * nmax);
  if (static_cast<int>(num.size()) - 1 > static_cast<int>(r.roots.size()))
    throw Error(ErrorKind::DomainError, "rational function grows at infinity");
  const cplx upper(medium.omega0, medium.sigma);
  double scale = 1.0;
  for (cplx z : r.roots) scale = std::max(scale, std::abs(z));
  cplx acc = r.eval(upper);  // residue of g at w0 + i sigma is 1/(2 pi i)
  for (std::size_t k = 0; k < r.roots.size(); ++k) {
    const cplx z = r.roots[k];
    if (std::abs(z.imag()) < 1e-12 * scale) throw Error(ErrorKind::NearPole, "root on the real axis");
    if (z.imag() < 0.0) continue;
    if (std::abs(z - upper) < 1e-9 * scale) throw Error(ErrorKind::PoleCollision, "root meets the line centre");
    cplx d = r.lead;
    for (std::size_t l = 0; l < r.roots.size(); ++l)
      if (l != k) d *= z - r.roots[l];
    const cplx res = poly::eval(num, z) / d;
    const cplx g = medium.sigma / (std::numbers::pi * ((z - medium.omega0) * (z - medium.omega0) + medium.sigma * medium.sigma));
    acc += 2.0 * std::numbers::pi * kI * g * res;
  }
  return acc;
}

}  // namespace soliton
