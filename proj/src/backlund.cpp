#include "soliton/backlund.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <numbers>
#include <ostream>

#include "soliton/error.hpp"
#include "soliton/log.hpp"

namespace soliton {

namespace {

using json = nlohmann::json;

constexpr double kRealityTol = 1e-8;
constexpr double kFitTol = 1e-9;

const Su2Vector kHvec{1.0, 0.0, 0.0};

// K B K for K^2 = -I, via the quaternion product.
Su2Vector sandwich(const Su2Vector& k, const Su2Vector& b) {
  const Gl2Vector kk(k);
  return (kk * Gl2Vector(b) * kk).traceless();
}

using Num = std::vector<Su2Vector>;

Num shift2(const Num& p) {
  Num out(p.size() + 2);
  for (std::size_t i = 0; i < p.size(); ++i) out[i + 2] = p[i];
  return out;
}

Num add_num(Num a, const Num& b) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  return a;
}

template <class F>
Num map_num(const Num& p, F f) {
  Num out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = f(p[i]);
  return out;
}

// One dressing step applied to (lambda part, constant part) numerators. The
// caller appends m to the omega-denominator.
void dress_numerators(Num& lam, Num& con, const Su2Vector& k, double m) {
  const Num lam_new =
      add_num(add_num(shift2(lam), map_num(lam, [&](const Su2Vector& b) { return -m * m * sandwich(k, b); })),
              map_num(con, [&](const Su2Vector& c) { return m * su2_commutator(c, k); }));
  const Num con_new = add_num(
      add_num(shift2(map_num(lam, [&](const Su2Vector& b) { return m * su2_commutator(b, k); })), shift2(con)),
      map_num(con, [&](const Su2Vector& c) { return -m * m * sandwich(k, c); }));
  lam = lam_new;
  con = con_new;
}

cplx e0_increment(const Su2Vector& k, double m) { return m * kH0 * su2_commutator(kHvec, k).e; }

double vacuum_h1_numerator(const MediumParams& md) {
  return -md.gamma * md.r_init * md.sigma / (2.0 * std::numbers::pi);
}

Mat2 g_matrix(const Su2Vector& k, double m, cplx lambda) {
  return lambda * Mat2::identity() - m * to_matrix(k);
}

}  // namespace

// ---------------------------------------------------------------- medium

void MediumParams::validate() const {
  if (!(sigma > 0.0)) throw Error(ErrorKind::InvalidArgument, "sigma must be positive");
  if (gamma == 0.0) throw Error(ErrorKind::InvalidArgument, "gamma must be nonzero");
  if (r_init == 0.0) throw Error(ErrorKind::InvalidArgument, "r_init must be nonzero");
  if (!std::isfinite(beta) || !std::isfinite(gamma) || !std::isfinite(omega0) || !std::isfinite(sigma) ||
      !std::isfinite(r_init))
    throw Error(ErrorKind::InvalidArgument, "medium parameters must be finite");
}

double MediumParams::g(double w) const {
  return sigma / (std::numbers::pi * ((w - omega0) * (w - omega0) + sigma * sigma));
}

std::vector<double> BTState::m_list() const {
  std::vector<double> out;
  for (const auto& p : points) out.push_back(p.m);
  return out;
}

OmegaDenominator BTState::denominator() const { return {medium.omega0, medium.sigma, m_list()}; }

// ---------------------------------------------------------------- vacuum

cplx dispersion(const MediumParams& md, cplx lambda) {
  const cplx a = cplx(md.omega0, -md.sigma) - lambda;
  const cplx b = cplx(md.omega0, md.sigma) + lambda;
  const double scale = std::max(1.0, std::abs(cplx(md.omega0, md.sigma)));
  if (std::abs(a) < 1e-12 * scale || std::abs(b) < 1e-12 * scale)
    throw Error(ErrorKind::NearPole, "dispersion evaluated at a medium pole");
  return -0.25 * md.gamma * md.r_init * (1.0 / a + 1.0 / b);
}

double dispersion_v(const MediumParams& md, double m) { return (m * dispersion(md, {0.0, m})).real(); }

Mat2 vacuum_wavefunction(const MediumParams& md, cplx lambda, double zeta, double tau) {
  const cplx theta = lambda * (kH0 * tau - (kH0 + dispersion(md, lambda)) * zeta);
  return {std::exp(kI * theta), 0.0, 0.0, std::exp(-kI * theta)};
}

BTState vacuum_state(const MediumParams& medium) {
  medium.validate();
  BTState s;
  s.medium = medium;
  s.loop = snapshot(s, 0.0, 0.0).loop();
  return s;
}

// ---------------------------------------------------------------- dressing

Mat2 n_matrix(const std::array<cplx, 2>& phi) {
  return {phi[0], -std::conj(phi[1]), phi[1], std::conj(phi[0])};
}

Su2Vector k_vector(const std::array<cplx, 2>& phi) {
  const double a = std::norm(phi[0]), b = std::norm(phi[1]);
  const double d = a + b;
  if (!(d > 0.0) || !std::isfinite(d)) throw Error(ErrorKind::ZeroEigenvector, "Phi vanishes");
  const cplx cross = phi[0] * std::conj(phi[1]);
  return {(a - b) / d, -2.0 * cross.imag() / d, 2.0 * cross.real() / d};
}

double reality_condition(const std::array<cplx, 2>& phi) {
  return phi[0].imag() * phi[1].imag() + phi[0].real() * phi[1].real();
}

Snapshot snapshot(const BTState& state, double zeta, double tau) {
  Snapshot s;
  s.zeta = zeta;
  s.tau = tau;
  s.pot.den = {state.medium.omega0, state.medium.sigma, {}};
  s.pot.lambda_num = {Su2Vector{}, Su2Vector{vacuum_h1_numerator(state.medium), 0.0, 0.0}};
  for (const auto& pt : state.points) {
    const Mat2 psi = wavefunction(state, s, {0.0, pt.m});
    const auto c = pt.c_vector();
    std::array<cplx, 2> phi = psi * c;
    const double norm = std::sqrt(std::norm(phi[0]) + std::norm(phi[1]));
    if (norm > 0.0 && std::isfinite(norm)) phi = {phi[0] / norm, phi[1] / norm};
    const Su2Vector k = k_vector(phi);
    s.e0 += e0_increment(k, pt.m);
    dress_numerators(s.pot.lambda_num, s.pot.const_num, k, pt.m);
    s.pot.den.m_list.push_back(pt.m);
    s.k.push_back(k);
    s.phi.push_back(phi);
  }
  return s;
}

Mat2 wavefunction(const BTState& state, const Snapshot& snap, cplx lambda) {
  Mat2 psi = vacuum_wavefunction(state.medium, lambda, snap.zeta, snap.tau);
  for (std::size_t j = 0; j < snap.k.size(); ++j) psi = g_matrix(snap.k[j], state.points[j].m, lambda) * psi;
  return psi;
}

Mat2 wavefunction(const BTState& state, cplx lambda, double zeta, double tau) {
  return wavefunction(state, snapshot(state, zeta, tau), lambda);
}

BTMatrices bt_matrices(const BTState& state, const SpectralPoint& point, double zeta, double tau) {
  const Snapshot s = snapshot(state, zeta, tau);
  const std::array<cplx, 2> phi = wavefunction(state, s, {0.0, point.m}) * point.c_vector();
  BTMatrices out;
  out.phi = phi;
  out.k = k_vector(phi);
  out.n = n_matrix(phi);
  out.g = LoopElement::monomial(Gl2Vector::identity(), 1) +
          LoopElement::monomial(-point.m * Gl2Vector(out.k), 0);
  return out;
}

LoopElement Snapshot::loop(int max_order) const {
  LoopElement q = omega_integral_to_loop(pot, max_order);
  q = q + LoopElement::monomial(kH0 * Gl2Vector::H(), 1, max_order);
  if (e0 != 0.0) q = q + LoopElement::monomial(e0 * Gl2Vector::E(), 0, max_order);
  return q;
}

Mat2 Snapshot::q0(cplx lambda) const {
  return to_matrix(Gl2Vector{0.0, lambda * kH0, 0.0, e0});
}

Mat2 Snapshot::q1(cplx lambda) const { return evaluate(loop(), lambda); }

// ---------------------------------------------------------------- stepping

BTState bt_step(const BTState& state, const SpectralPoint& point) {
  if (!(point.m > 0.0) || !std::isfinite(point.m))
    throw Error(ErrorKind::InvalidArgument, "spectral point needs m > 0");
  BTState next = state;
  next.points.push_back(point);
  next.level = state.level + 1;
  next.denominator().check_distinct();

  for (double zeta : {-1.0, 0.0, 1.0}) {
    for (double tau : {-1.0, 0.0, 1.0}) {
      const auto m = bt_matrices(state, point, zeta, tau);
      const double d = std::norm(m.phi[0]) + std::norm(m.phi[1]);
      const double rc = std::abs(reality_condition(m.phi)) / d;
      if (rc > kRealityTol) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "reality condition %.3e at level %d (zeta=%g, tau=%g)", rc,
                      next.level, zeta, tau);
        if (point.parity_enforced) throw Error(ErrorKind::RealityViolation, buf);
        log_message(LogLevel::Error, std::string("warning: ") + buf);
      }
    }
  }

  next.loop = snapshot(next, 0.0, 0.0).loop();
  log_message(LogLevel::Debug, "bt_step -> level " + std::to_string(next.level));
  return next;
}

BTState build_solitons(const MediumParams& medium, std::span<const SpectralPoint> points) {
  BTState s = vacuum_state(medium);
  for (const auto& p : points) s = bt_step(s, p);
  return s;
}

// ---------------------------------------------------------------- potentials

PotentialValues potential_values(const BTState& state, cplx w, double zeta, double tau) {
  const Snapshot s = snapshot(state, zeta, tau);
  const MediumParams& md = state.medium;
  PotentialValues v;
  v.lambda_part.h = -0.5 * md.gamma * w * md.r_init * md.sigma /
                    (std::numbers::pi * ((w - md.omega0) * (w - md.omega0) + md.sigma * md.sigma));
  for (std::size_t j = 0; j < s.k.size(); ++j) {
    const double m = state.points[j].m;
    const Su2Vector& k = s.k[j];
    const cplx w2 = w * w, den = w2 + m * m;
    const Su2Vector b = v.lambda_part, c = v.const_part;
    v.lambda_part = (1.0 / den) * (w2 * b - m * m * sandwich(k, b) + m * su2_commutator(c, k));
    v.const_part = (1.0 / den) * (m * w2 * su2_commutator(b, k) + w2 * c - m * m * sandwich(k, c));
  }
  return v;
}

Potentials potentials(const BTState& state, double zeta, double tau) {
  const int n = state.level;
  const OmegaDenominator den = state.denominator();
  const int nodes = 2 * n + 4, unknowns = 2 * n + 2;

  double span = std::abs(state.medium.omega0) + state.medium.sigma;
  for (double m : den.m_list) span = std::max(span, m);
  span = std::max(1.0, 2.0 * span);

  Eigen::MatrixXcd v(nodes, unknowns);
  Eigen::MatrixXcd y(nodes, 3);
  for (int i = 0; i < nodes; ++i) {
    const double t = std::cos(std::numbers::pi * (i + 0.5) / nodes);
    const double w = span * t;
    for (int k = 0; k < unknowns; ++k) v(i, k) = std::pow(t, k);
    const PotentialValues pv = potential_values(state, w, zeta, tau);
    const cplx d = den.eval(w);
    y(i, 0) = pv.lambda_part.h * d;
    y(i, 1) = pv.lambda_part.f * d;
    y(i, 2) = pv.const_part.e * d;
  }
  const Eigen::MatrixXcd a = v.colPivHouseholderQr().solve(y);
  const double resid = (v * a - y).norm() / std::max(y.norm(), 1e-300);

  Potentials out;
  out.e0 = snapshot(state, zeta, tau).e0;
  out.fit_residual = resid;
  OmegaPotential* comps[3] = {&out.h1, &out.f1, &out.e1};
  for (int c = 0; c < 3; ++c) {
    comps[c]->den = den;
    comps[c]->numerator.resize(static_cast<std::size_t>(unknowns));
    for (int k = 0; k < unknowns; ++k) comps[c]->numerator[static_cast<std::size_t>(k)] = a(k, c) / std::pow(span, k);
  }
  if (resid > kFitTol) {
    char buf[120];
    std::snprintf(buf, sizeof buf, "potential fit residual %.3e at level %d", resid, n);
    throw Error(ErrorKind::FitResidualTooLarge, buf);
  }
  return out;
}

// ---------------------------------------------------------------- fields

namespace {

// p(w) / w^k, cancelling k factors of w at w = 0.
cplx divide_by_power(const poly::Poly& p, double w, int k) {
  if (w != 0.0) return poly::eval(p, w) / std::pow(w, k);
  double scale = 0.0;
  for (cplx c : p) scale = std::max(scale, std::abs(c));
  for (int j = 0; j < k && j < static_cast<int>(p.size()); ++j)
    if (std::abs(p[static_cast<std::size_t>(j)]) > 1e-12 * scale)
      throw Error(ErrorKind::OmegaZero, "field is singular at omega = 0");
  return static_cast<std::size_t>(k) < p.size() ? p[static_cast<std::size_t>(k)] : 0.0;
}

}  // namespace

FieldValues physical_fields(const BTState& state, const Snapshot& snap, double w) {
  const MediumParams& md = state.medium;
  cplx soliton_den = 1.0;
  for (double m : state.m_list()) soliton_den *= w * w + m * m;
  // g = sigma / (pi Lorentz(w)) and Den = Lorentz(w) * soliton_den
  const double c = std::numbers::pi / (md.gamma * md.sigma);
  const OmegaPotential h = snap.pot.h1(), f = snap.pot.f1(), e = snap.pot.e1();
  FieldValues out;
  out.e = (md.beta + 2.0 * snap.e0) / md.gamma;
  out.r = -2.0 * c * divide_by_power(h.numerator, w, 1) / soliton_den;
  out.s = -2.0 * c * divide_by_power(f.numerator, w, 1) / soliton_den;
  out.u = 4.0 * c * divide_by_power(e.numerator, w, 2) / soliton_den;
  return out;
}

FieldValues physical_fields(const BTState& state, double w, double zeta, double tau) {
  return physical_fields(state, snapshot(state, zeta, tau), w);
}

void write_fields_csv(std::ostream& out, const BTState& state, std::span<const double> zeta,
                      std::span<const double> tau, std::span<const double> omega) {
  out << "zeta,tau,omega,e,R,S,U\n";
  char buf[256];
  for (double z : zeta) {
    for (double t : tau) {
      const Snapshot s = snapshot(state, z, t);
      for (double w : omega) {
        const FieldValues f = physical_fields(state, s, w);
        std::snprintf(buf, sizeof buf, "%.16e,%.16e,%.16e,%.16e,%.16e,%.16e,%.16e\n", z, t, w, f.e.real(),
                      f.r.real(), f.s.real(), f.u.real());
        out << buf;
      }
    }
  }
}

OneSoliton one_soliton(const MediumParams& md, const SpectralPoint& pt, double w, double zeta, double tau) {
  const double m = pt.m;
  const double c1 = pt.c1.real(), c2 = pt.c2.real();
  const double sign = (c1 * c2 < 0.0) ? -1.0 : 1.0;
  const double v1 = -0.5 * md.gamma * md.r_init * m * md.omega0 /
                    ((m + md.sigma) * (m + md.sigma) + md.omega0 * md.omega0);
  OneSoliton o;
  o.x1 = 2.0 * ((v1 + m * kH0) * zeta - m * kH0 * tau) + std::log(std::abs(c1 / c2));
  const double sech = sign / std::cosh(o.x1), th = std::tanh(o.x1);
  const double h1 = -0.5 * md.gamma * w * md.g(w) * md.r_init;
  const double d = w * w + m * m;
  o.e0 = 2.0 * m * kH0 * sech;
  o.e1 = 2.0 * m * w * w * h1 * sech / d;
  o.f1 = 2.0 * m * m * h1 * sech * th / d;
  o.h1 = h1 * (d - 2.0 * m * m * sech * sech) / d;
  return o;
}

// ---------------------------------------------------------------- serialization

std::string serialize(const BTState& state) {
  json j;
  j["format"] = "bt-state/1";
  const auto& md = state.medium;
  j["medium"] = {{"beta", md.beta}, {"gamma", md.gamma}, {"omega0", md.omega0}, {"sigma", md.sigma},
                 {"r_init", md.r_init}};
  j["points"] = json::array();
  for (const auto& p : state.points) {
    j["points"].push_back({{"m", p.m},
                           {"c1", {p.c1.real(), p.c1.imag()}},
                           {"c2", {p.c2.real(), p.c2.imag()}},
                           {"parity_enforced", p.parity_enforced}});
  }
  j["loop"] = json::parse(serialize(state.loop));
  return j.dump(2);
}

BTState deserialize_state(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.at("format") != "bt-state/1") throw Error(ErrorKind::InvalidArgument, "unknown state format");
    MediumParams md;
    const auto& jm = j.at("medium");
    md.beta = jm.at("beta");
    md.gamma = jm.at("gamma");
    md.omega0 = jm.at("omega0");
    md.sigma = jm.at("sigma");
    md.r_init = jm.at("r_init");
    std::vector<SpectralPoint> pts;
    for (const auto& jp : j.at("points")) {
      SpectralPoint p;
      p.m = jp.at("m");
      p.c1 = {jp.at("c1").at(0).get<double>(), jp.at("c1").at(1).get<double>()};
      p.c2 = {jp.at("c2").at(0).get<double>(), jp.at("c2").at(1).get<double>()};
      p.parity_enforced = jp.at("parity_enforced");
      pts.push_back(p);
    }
    return build_solitons(md, pts);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("malformed state: ") + e.what());
  }
}

}  // namespace soliton
