#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>
#include <sstream>

#include "soliton/backlund.hpp"
#include "soliton/error.hpp"
#include "test_support.hpp"

using namespace soliton;
using soliton::testing::mat_diff;

namespace {

MediumParams medium() { return {1.0, 1.0, 1.0, 0.5, 1.0}; }

SpectralPoint point(double m, double c1 = 1.0, double c2 = 1.0) { return {m, c1, c2, true}; }

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

cplx integrate_real_line(auto f) {
  using boost::math::quadrature::gauss_kronrod;
  const double inf = std::numeric_limits<double>::infinity();
  const double re =
      gauss_kronrod<double, 61>::integrate([&](double w) { return f(w).real(); }, -inf, inf, 12, 1e-12);
  const double im =
      gauss_kronrod<double, 61>::integrate([&](double w) { return f(w).imag(); }, -inf, inf, 12, 1e-12);
  return {re, im};
}

}  // namespace

TEST_CASE("reality condition") {
  CHECK(reality_condition({cplx(0.7, 0.0), cplx(0.0, -1.3)}) == 0.0);
  CHECK(reality_condition({cplx(1.0, 0.0), cplx(1.0, 0.0)}) == 1.0);
  CHECK(reality_condition({cplx(0.0, 2.0), cplx(0.4, 0.0)}) == 0.0);
}

TEST_CASE("vacuum dispersion integral") {
  const MediumParams md = medium();
  const double m = 0.8;
  const double v1 = -0.5 * md.gamma * md.r_init * m * md.omega0 /
                    ((m + md.sigma) * (m + md.sigma) + md.omega0 * md.omega0);
  CHECK(std::abs(dispersion_v(md, m) - v1) < 1e-15);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> re(-2.0, 2.0), im(0.2, 2.0);
  for (int t = 0; t < 10; ++t) {
    const cplx lam{re(rng), im(rng)};
    const cplx quad = integrate_real_line([&](double w) {
      return -0.5 * md.gamma * w * md.g(w) * md.r_init / (w * w - lam * lam);
    });
    CHECK(std::abs(dispersion(md, lam) - quad) < 1e-8 * std::abs(quad));
  }

  MediumParams flat = md;
  flat.r_init = 0.0;
  CHECK(dispersion(flat, {0.3, 0.4}) == 0.0);
  CHECK(kind_of([&] { dispersion(md, {1.0, -0.5}); }) == ErrorKind::NearPole);
}

TEST_CASE("vacuum wavefunction solves both linear systems") {
  const MediumParams md = medium();
  const BTState vac = vacuum_state(md);
  const cplx lam{0.3, 0.9};
  CHECK(mat_diff(vacuum_wavefunction(md, lam, 0.0, 0.0), Mat2::identity()) == 0.0);

  const double z = 0.4, t = -0.3, h = 1e-5;
  const Snapshot s = snapshot(vac, z, t);
  const Mat2 psi = vacuum_wavefunction(md, lam, z, t);
  const Mat2 dtau = (1.0 / (2 * h)) * (vacuum_wavefunction(md, lam, z, t + h) - vacuum_wavefunction(md, lam, z, t - h));
  const Mat2 dzeta = (1.0 / (2 * h)) * (vacuum_wavefunction(md, lam, z + h, t) - vacuum_wavefunction(md, lam, z - h, t));
  CHECK(mat_diff(dtau, s.q0(lam) * psi) < 1e-6);
  CHECK(mat_diff(dzeta, -1.0 * (s.q1(lam) * psi)) < 1e-6);

  // growth rate at lambda = i m matches x1/2
  const double m = 0.8;
  const cplx p = vacuum_wavefunction(md, {0.0, m}, 1.0, 0.0).a11;
  CHECK(std::abs(std::log(std::abs(p)) - (dispersion_v(md, m) + m * kH0)) < 1e-14);
}

TEST_CASE("vacuum state") {
  const MediumParams md = medium();
  const BTState vac = vacuum_state(md);
  CHECK(vac.level == 0);
  const Snapshot s = snapshot(vac, 0.3, 0.1);
  CHECK(s.e0 == 0.0);
  const Potentials p = potentials(vac, 0.3, 0.1);
  CHECK(std::abs(p.h1.numerator[1] + md.gamma * md.r_init * md.sigma / (2.0 * std::numbers::pi)) < 1e-14);
  CHECK(std::abs(p.h1.numerator[0]) < 1e-14);
  for (const auto& c : p.f1.numerator) CHECK(std::abs(c) < 1e-14);
  for (const auto& c : p.e1.numerator) CHECK(std::abs(c) < 1e-14);

  // h0 lambda H plus medium poles only
  REQUIRE(vac.loop.poly.size() == 2);
  CHECK((vac.loop.poly[1] - kH0 * Gl2Vector::H()).max_abs() < 1e-15);
  CHECK(vac.loop.poly[0].is_zero());
  CHECK(vac.loop.poles.size() == 2);
  CHECK(vac.loop.find_pole({1.0, -0.5}) >= 0);
  CHECK(vac.loop.find_pole({-1.0, -0.5}) >= 0);

  for (double w : {0.0, 0.7, -1.3}) {
    const FieldValues f = physical_fields(vac, w, 0.2, 0.5);
    CHECK(std::abs(f.e - md.beta / md.gamma) < 1e-15);
    CHECK(std::abs(f.r - md.r_init) < 1e-14);
    CHECK(std::abs(f.s) < 1e-15);
    CHECK(std::abs(f.u) < 1e-15);
  }
}

TEST_CASE("dressing matrices") {
  const MediumParams md = medium();
  const BTState vac = vacuum_state(md);
  const SpectralPoint p1 = point(0.8, 1.3, 0.6);
  const BTMatrices b = bt_matrices(vac, p1, 0.5, -0.2);
  const double d = std::norm(b.phi[0]) + std::norm(b.phi[1]);
  CHECK(std::abs(b.n.det() - d) < 1e-14 * d);

  const cplx nu{0.0, p1.m};
  const auto killed = evaluate(b.g, nu) * b.phi;
  CHECK(std::abs(killed[0]) + std::abs(killed[1]) < 1e-13 * std::sqrt(d));
  CHECK(b.g.degree() == 1);

  // N = Re(phi1) I + Im(phi1) H - Re(phi2) F + Im(phi2) E
  const Gl2Vector n1 = from_matrix(b.n);
  CHECK(std::abs(n1.h) < 1e-14 * std::sqrt(d));
  CHECK(std::abs(n1.f) < 1e-14 * std::sqrt(d));

  const BTState one = bt_step(vac, p1);
  const BTMatrices b2 = bt_matrices(one, point(1.7, 0.9, 1.1), 0.5, -0.2);
  const Gl2Vector n2 = from_matrix(b2.n);
  const double s2 = b2.n.max_abs();
  CHECK(std::abs(n2.id) < 1e-13 * s2);
  CHECK(std::abs(n2.e) < 1e-13 * s2);

  const SpectralPoint zero{0.8, 0.0, 0.0, true};
  CHECK(kind_of([&] { bt_matrices(vac, zero, 0.0, 0.0); }) == ErrorKind::ZeroEigenvector);
}

TEST_CASE("one-soliton golden comparison") {
  const MediumParams md = medium();
  for (const auto& [c1, c2] : {std::pair{1.0, 1.0}, std::pair{2.5, 0.4}}) {
    const SpectralPoint p1 = point(0.8, c1, c2);
    const BTState one = bt_step(vacuum_state(md), p1);
    double err = 0.0;
    for (double z = -2.0; z <= 2.0; z += 0.5) {
      for (double t = -2.0; t <= 2.0; t += 0.5) {
        const Snapshot s = snapshot(one, z, t);
        const OneSoliton ref0 = one_soliton(md, p1, 0.0, z, t);
        err = std::max(err, std::abs(s.e0 - ref0.e0));
        for (double w : {-2.0, -0.6, 0.3, 1.0, 1.9}) {
          const OneSoliton ref = one_soliton(md, p1, w, z, t);
          err = std::max(err, std::abs(s.pot.h1().eval(w) - ref.h1));
          err = std::max(err, std::abs(s.pot.f1().eval(w) - ref.f1));
          err = std::max(err, std::abs(s.pot.e1().eval(w) - ref.e1));
        }
      }
    }
    CHECK(err < 1e-10);
  }
}

TEST_CASE("one-soliton fields from the closed form") {
  const MediumParams md = medium();
  const SpectralPoint p1 = point(0.8, 1.7, 0.9);
  const BTState one = bt_step(vacuum_state(md), p1);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 10; ++t) {
    const double w = u(rng), z = u(rng), ta = u(rng);
    const OneSoliton ref = one_soliton(md, p1, w, z, ta);
    const FieldValues f = physical_fields(one, w, z, ta);
    const double gw = md.gamma * w * md.g(w);
    CHECK(std::abs(f.e - (md.beta + 2.0 * ref.e0) / md.gamma) < 1e-12);
    CHECK(std::abs(f.r + 2.0 * ref.h1 / gw) < 1e-10);
    CHECK(std::abs(f.s + 2.0 * ref.f1 / gw) < 1e-10);
    CHECK(std::abs(f.u - 4.0 * ref.e1 / (gw * w)) < 1e-10);
    // U after cancelling g: -4 m r_init w sech(x1) / (w^2 + m^2)
    const double sech = 1.0 / std::cosh(ref.x1);
    CHECK(std::abs(f.u + 4.0 * p1.m * md.r_init * w * sech / (w * w + p1.m * p1.m)) < 1e-10);
  }
  // the Bloch vector length is conserved: R^2 + S^2 + U^2/4 = r_init^2
  const FieldValues f0 = physical_fields(one, 0.0, 0.3, -0.4);
  CHECK(std::abs(std::norm(f0.r) + std::norm(f0.s) + std::norm(f0.u) / 4.0 - 1.0) < 1e-12);
  const FieldValues f1 = physical_fields(one, 1.2, 0.3, -0.4);
  CHECK(std::abs(std::norm(f1.r) + std::norm(f1.s) + std::norm(f1.u) / 4.0 - 1.0) < 1e-12);
}

TEST_CASE("pole inventory and level invariants") {
  const MediumParams md = medium();
  const std::vector<SpectralPoint> pts{point(0.8, 1.0, 1.0), point(1.7, 0.7, 1.2), point(0.35, 1.1, 0.8)};
  BTState s = vacuum_state(md);
  for (std::size_t n = 0; n < pts.size(); ++n) {
    s = bt_step(s, pts[n]);
    std::vector<cplx> allowed{{1.0, 0.5}, {1.0, -0.5}, {-1.0, 0.5}, {-1.0, -0.5}};
    for (std::size_t k = 0; k <= n; ++k) {
      allowed.emplace_back(0.0, pts[k].m);
      allowed.emplace_back(0.0, -pts[k].m);
    }
    for (const auto& pt : s.loop.poles) {
      CHECK(pt.coeffs.size() == 1);
      bool found = false;
      for (cplx a : allowed) found = found || std::abs(a - pt.alpha) < 1e-14;
      CHECK(found);
    }
    for (std::size_t k = 0; k <= n; ++k) CHECK(s.loop.find_pole({0.0, -pts[k].m}) >= 0);
    REQUIRE(s.loop.poly.size() == 2);
    CHECK((s.loop.poly[1] - kH0 * Gl2Vector::H()).max_abs() < 1e-12);

    const Snapshot snap = snapshot(s, 0.7, -0.4);
    CHECK(snap.pot.off_pattern() < 1e-12);
    CHECK(std::abs(snap.e0.imag()) < 1e-12);
  }
}

TEST_CASE("numerator fit recovers the omega structure") {
  const MediumParams md = medium();
  const BTState one = bt_step(vacuum_state(md), point(0.8, 1.4, 0.9));
  const Potentials p = potentials(one, 0.4, -0.7);
  CHECK(p.fit_residual < 1e-9);
  const double s = std::max({p.h1.numerator[3].real(), std::abs(p.h1.numerator[1]), 1e-3});
  // e1 ~ w^3, f1 ~ w, h1 ~ w^3 and w
  CHECK(std::abs(p.e1.numerator[0]) + std::abs(p.e1.numerator[1]) + std::abs(p.e1.numerator[2]) < 1e-10 * s);
  CHECK(std::abs(p.e1.numerator[3]) > 1e-6);
  CHECK(std::abs(p.f1.numerator[0]) + std::abs(p.f1.numerator[2]) + std::abs(p.f1.numerator[3]) < 1e-10 * s);
  CHECK(std::abs(p.h1.numerator[0]) + std::abs(p.h1.numerator[2]) < 1e-10 * s);

  BTState s3 = bt_step(bt_step(one, point(1.7, 0.7, 1.2)), point(0.35, 1.1, 0.8));
  const Potentials p3 = potentials(s3, -0.2, 0.3);
  CHECK(p3.fit_residual < 1e-9);
  CHECK(p3.h1.max_even_coefficient() < 1e-10);
  CHECK(p3.f1.max_even_coefficient() < 1e-10);
  CHECK(p3.e1.max_even_coefficient() < 1e-10);
  // agrees with the exact polynomial recursion
  const Snapshot snap = snapshot(s3, -0.2, 0.3);
  const auto h = snap.pot.h1();
  for (std::size_t k = 0; k < p3.h1.numerator.size(); ++k) {
    const cplx exact = k < h.numerator.size() ? h.numerator[k] : 0.0;
    CHECK(std::abs(p3.h1.numerator[k] - exact) < 1e-10);
  }
}

TEST_CASE("dressed wavefunction solves the dressed linear systems") {
  const MediumParams md = medium();
  BTState s = vacuum_state(md);
  const std::vector<SpectralPoint> pts{point(0.8, 1.0, 1.0), point(1.7, 0.7, 1.2), point(0.35, 1.1, 0.8)};
  for (const auto& p : pts) {
    s = bt_step(s, p);
    const double z = 0.3, t = -0.2, h = 1e-5;
    const Snapshot sn = snapshot(s, z, t);
    for (const cplx lam : {cplx(0.4, 1.1), cplx(-0.9, 0.3)}) {
      const Mat2 psi = wavefunction(s, sn, lam);
      const Mat2 dt = (1.0 / (2 * h)) * (wavefunction(s, lam, z, t + h) - wavefunction(s, lam, z, t - h));
      const Mat2 dz = (1.0 / (2 * h)) * (wavefunction(s, lam, z + h, t) - wavefunction(s, lam, z - h, t));
      const double scale = std::max(1.0, psi.max_abs());
      CHECK(mat_diff(dt, sn.q0(lam) * psi) < 1e-6 * scale);
      CHECK(mat_diff(dz, -1.0 * (sn.q1(lam) * psi)) < 1e-6 * scale);
    }
  }
}

TEST_CASE("reality of the fields") {
  const MediumParams md = medium();
  const std::vector<SpectralPoint> pts{point(0.8, 1.0, 1.0), point(1.7, 0.7, 1.2), point(0.35, 1.1, 0.8)};
  const BTState s = build_solitons(md, pts);
  double worst = 0.0;
  for (int i = 0; i <= 10; ++i) {
    for (int j = 0; j <= 10; ++j) {
      const Snapshot sn = snapshot(s, -2.0 + 0.4 * i, -2.0 + 0.4 * j);
      for (const auto& phi : sn.phi) {
        worst = std::max(worst, std::abs(reality_condition(phi)));
      }
      for (double w : {-1.5, -0.5, 0.0, 0.5, 1.5}) {
        const FieldValues f = physical_fields(s, sn, w);
        worst = std::max({worst, std::abs(f.e.imag()), std::abs(f.r.imag()), std::abs(f.s.imag()),
                          std::abs(f.u.imag())});
      }
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("step preconditions") {
  const MediumParams md = medium();
  const BTState one = bt_step(vacuum_state(md), point(0.8));
  CHECK(kind_of([&] { bt_step(one, point(0.8)); }) == ErrorKind::PoleCollision);

  SpectralPoint bad{1.2, cplx(1.0, 0.5), 1.0, true};
  CHECK(kind_of([&] { bt_step(one, bad); }) == ErrorKind::RealityViolation);
  bad.parity_enforced = false;
  const BTState loose = bt_step(one, bad);
  CHECK(loose.level == 2);
  CHECK(snapshot(loose, 0.1, 0.1).pot.off_pattern() > 1e-6);

  MediumParams broken = md;
  broken.sigma = 0.0;
  CHECK(kind_of([&] { vacuum_state(broken); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("state serialization and field export") {
  const MediumParams md = medium();
  const std::vector<SpectralPoint> pts{point(0.8, 1.0, 1.0), point(1.7, 0.7, 1.2)};
  const BTState s = build_solitons(md, pts);
  const BTState r = deserialize_state(serialize(s));
  CHECK(r.level == 2);
  CHECK(max_coeff_diff(r.loop, s.loop) == 0.0);

  std::ostringstream out;
  const std::vector<double> z{0.0, 1.0}, t{0.5}, w{-1.0, 0.0, 2.0};
  write_fields_csv(out, s, z, t, w);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "zeta,tau,omega,e,R,S,U");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 6);
  }
  CHECK(rows == 6);
}
