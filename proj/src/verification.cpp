#include "soliton/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "soliton/error.hpp"

namespace soliton {

// ---------------------------------------------------------------- grid

Grid Grid::uniform(double zeta0, double zeta1, int nz, double tau0, double tau1, int nt,
                   const MediumParams& medium, int omega_nodes) {
  auto nodes = [](double a, double b, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return v;
  };
  Grid g{nodes(zeta0, zeta1, nz), nodes(tau0, tau1, nt), lorentzian_rule(medium, omega_nodes)};
  g.validate();
  return g;
}

void Grid::validate() const {
  auto increasing = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
      if (!(v[i] > v[i - 1])) return false;
    return !v.empty();
  };
  if (!increasing(zeta) || !increasing(tau) || !increasing(omega.omega))
    throw Error(ErrorKind::InvalidArgument, "grid nodes must be strictly increasing");
  double sum = 0.0;
  for (double w : omega.weight) {
    if (!(w > 0.0)) throw Error(ErrorKind::InvalidArgument, "quadrature weights must be positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-10) throw Error(ErrorKind::InvalidArgument, "quadrature weights must sum to 1");
}

// ---------------------------------------------------------------- field sources

FieldSource soliton_fields(const BTState& state) {
  auto shared = std::make_shared<const BTState>(state);
  return [shared](double zeta, double tau) {
    auto snap = std::make_shared<const Snapshot>(snapshot(*shared, zeta, tau));
    FieldSlice slice;
    slice.e = (shared->medium.beta + 2.0 * snap->e0) / shared->medium.gamma;
    slice.at = [shared, snap](double w) { return physical_fields(*shared, *snap, w); };
    return slice;
  };
}

RationalFunction omega_s_rational(const BTState& state, const Snapshot& snap) {
  // w S = -2 pi/(gamma sigma) f1 numerator / prod (w^2 + m^2)
  const double c = std::numbers::pi / (state.medium.gamma * state.medium.sigma);
  RationalFunction r;
  r.num = poly::scale(snap.pot.f1().numerator, -2.0 * c);
  for (double m : state.m_list()) {
    r.roots.emplace_back(0.0, m);
    r.roots.emplace_back(0.0, -m);
  }
  return r;
}

// ---------------------------------------------------------------- residuals

double lax_residual(const BTState& state, cplx lambda, double zeta, double tau, double h_fd) {
  if (!(h_fd > 0.0)) throw Error(ErrorKind::InvalidArgument, "h_fd must be positive");
  const Snapshot s0 = snapshot(state, zeta, tau);
  const LoopElement x = s0.loop();
  for (const auto& pt : x.poles)
    if (std::abs(lambda - pt.alpha) < 1e-6 * std::max(1.0, std::abs(pt.alpha)))
      throw Error(ErrorKind::NearPole, "lambda is at a pole of the loop element");

  const Mat2 H = to_matrix(Gl2Vector::H()), E = to_matrix(Gl2Vector::E());
  auto q0 = [&](const Snapshot& s) { return (lambda * kH0) * H + s.e0 * E; };
  auto q1 = [&](const Snapshot& s) { return evaluate(s.loop(), lambda); };
  const Snapshot zp = snapshot(state, zeta + h_fd, tau), zm = snapshot(state, zeta - h_fd, tau);
  const Snapshot tp = snapshot(state, zeta, tau + h_fd), tm = snapshot(state, zeta, tau - h_fd);
  const double inv = 1.0 / (2.0 * h_fd);
  const Mat2 a = q0(s0), b = q1(s0);
  const Mat2 r = inv * (q0(zp) - q0(zm)) + inv * (q1(tp) - q1(tm)) - (a * b - b * a);
  return r.max_abs();
}

double PdeResidual::max() const { return std::max({mb1, mb2, mb3, mb4}); }

PdeResidual pde_residual(const FieldSource& fields, const MediumParams& md, std::span<const double> omega,
                         double zeta, double tau, double h) {
  const FieldSlice c = fields(zeta, tau);
  const FieldSlice zp = fields(zeta + h, tau), zm = fields(zeta - h, tau);
  const FieldSlice tp = fields(zeta, tau + h), tm = fields(zeta, tau - h);
  const double inv = 1.0 / (2.0 * h);

  PdeResidual out;
  const double source = lorentzian_average([&](double w) { return w * c.at(w).s.real(); }, md);
  out.mb1 = std::abs(inv * (zp.e.real() - zm.e.real()) + inv * (tp.e.real() - tm.e.real()) - source);

  const double drive = md.beta - md.gamma * c.e.real();
  for (double w : omega) {
    const FieldValues f = c.at(w), p = tp.at(w), m = tm.at(w);
    const double dr = inv * (p.r.real() - m.r.real());
    const double ds = inv * (p.s.real() - m.s.real());
    const double du = inv * (p.u.real() - m.u.real());
    out.mb2 = std::max(out.mb2, std::abs(dr - drive * f.s.real()));
    out.mb3 = std::max(out.mb3, std::abs(ds - (-drive * f.r.real() + 0.5 * w * f.u.real())));
    out.mb4 = std::max(out.mb4, std::abs(du - (-2.0 * w * f.s.real())));
  }
  return out;
}

// ---------------------------------------------------------------- direct integration

namespace {

struct Bloch {
  double r, s, u;
};

Bloch bloch_rhs(const MediumParams& md, double w, double e, const Bloch& b) {
  const double a = md.beta - md.gamma * e;
  return {a * b.s, -a * b.r + 0.5 * w * b.u, -2.0 * w * b.s};
}

Bloch axpy(const Bloch& b, double h, const Bloch& k) { return {b.r + h * k.r, b.s + h * k.s, b.u + h * k.u}; }

// One grid step of length d with e varying linearly from ea to eb, in RK4
// substeps of rotation angle at most max_phase.
Bloch bloch_step(const MediumParams& md, double w, double ea, double eb, double d, double max_phase, Bloch b) {
  const double a = std::max(std::abs(md.beta - md.gamma * ea), std::abs(md.beta - md.gamma * eb));
  const int sub = std::max(1, static_cast<int>(std::ceil(std::hypot(w, a) * d / max_phase)));
  const double h = d / sub;
  auto e_at = [&](double t) { return ea + (eb - ea) * t / d; };
  for (int k = 0; k < sub; ++k) {
    const double t = k * h;
    const Bloch k1 = bloch_rhs(md, w, e_at(t), b);
    const Bloch k2 = bloch_rhs(md, w, e_at(t + 0.5 * h), axpy(b, 0.5 * h, k1));
    const Bloch k3 = bloch_rhs(md, w, e_at(t + 0.5 * h), axpy(b, 0.5 * h, k2));
    const Bloch k4 = bloch_rhs(md, w, e_at(t + h), axpy(b, h, k3));
    b = {b.r + h / 6.0 * (k1.r + 2.0 * k2.r + 2.0 * k3.r + k4.r),
         b.s + h / 6.0 * (k1.s + 2.0 * k2.s + 2.0 * k3.s + k4.s),
         b.u + h / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u)};
  }
  return b;
}

double bloch_norm(const Bloch& b) { return b.r * b.r + b.s * b.s + 0.25 * b.u * b.u; }

}  // namespace

PdeSolution pde_integrate(const MediumParams& md, const FieldSource& boundary, const PdeGrid& grid) {
  md.validate();
  if (grid.points < 3 || !(grid.length > 0.0) || !(grid.max_phase > 0.0))
    throw Error(ErrorKind::InvalidArgument, "PDE grid needs at least 3 points, positive length and phase");
  const std::size_t n = static_cast<std::size_t>(grid.points);
  const double d = grid.length / static_cast<double>(n - 1);

  PdeSolution sol;
  sol.rule = lorentzian_rule(md, grid.omega_nodes);
  const auto& w = sol.rule.omega;
  const auto& wt = sol.rule.weight;
  const std::size_t nq = w.size();
  for (std::size_t i = 0; i < n; ++i) {
    sol.zeta.push_back(grid.zeta0 + d * static_cast<double>(i));
    sol.tau.push_back(grid.tau0 + d * static_cast<double>(i));
  }
  sol.e.assign(n * n, 0.0);

  auto source = [&](const std::vector<Bloch>& b) {
    double acc = 0.0;
    for (std::size_t q = 0; q < nq; ++q) acc += wt[q] * w[q] * b[q].s;
    return acc;
  };
  auto check = [&](double v, std::size_t i, std::size_t j) {
    if (!std::isfinite(v))
      throw Error(ErrorKind::StepOverflow, "non-finite field at grid node " + std::to_string(i) + "," +
                                               std::to_string(j));
  };

  // previous row: Bloch variables and sources along tau
  std::vector<double> p_prev(n), p_row(n);
  std::vector<Bloch> b(nq), b0(nq), trial(nq);
  std::vector<double> norm0(nq);

  for (std::size_t i = 0; i < n; ++i) {
    const FieldSlice start = boundary(sol.zeta[i], sol.tau[0]);
    for (std::size_t q = 0; q < nq; ++q) {
      const FieldValues f = start.at(w[q]);
      b[q] = {f.r.real(), f.s.real(), f.u.real()};
      norm0[q] = bloch_norm(b[q]);
    }
    sol.e[i * n] = start.e.real();
    p_row[0] = source(b);

    if (i == 0) {
      for (std::size_t j = 1; j < n; ++j) sol.e[j] = boundary(sol.zeta[0], sol.tau[j]).e.real();
      for (std::size_t j = 0; j + 1 < n; ++j) {
        for (std::size_t q = 0; q < nq; ++q)
          b[q] = bloch_step(md, w[q], sol.e[j], sol.e[j + 1], d, grid.max_phase, b[q]);
        p_row[j + 1] = source(b);
        for (std::size_t q = 0; q < nq; ++q)
          sol.bloch_drift = std::max(sol.bloch_drift, std::abs(bloch_norm(b[q]) - norm0[q]));
      }
    } else {
      for (std::size_t j = 0; j + 1 < n; ++j) {
        const double e_here = sol.e[i * n + j];
        const double e_back = sol.e[(i - 1) * n + j];
        // predictor along the characteristic from (i-1, j)
        const double e_pred = e_back + d * p_prev[j];
        for (std::size_t q = 0; q < nq; ++q) trial[q] = bloch_step(md, w[q], e_here, e_pred, d, grid.max_phase, b[q]);
        const double e_corr = e_back + 0.5 * d * (p_prev[j] + source(trial));
        for (std::size_t q = 0; q < nq; ++q) b[q] = bloch_step(md, w[q], e_here, e_corr, d, grid.max_phase, b[q]);
        check(e_corr, i, j + 1);
        sol.e[i * n + j + 1] = e_corr;
        p_row[j + 1] = source(b);
        for (std::size_t q = 0; q < nq; ++q)
          sol.bloch_drift = std::max(sol.bloch_drift, std::abs(bloch_norm(b[q]) - norm0[q]));
      }
    }
    std::swap(p_prev, p_row);
  }
  return sol;
}

double pde_error(const PdeSolution& sol, const FieldSource& exact, const MediumParams& md) {
  const double vac = md.beta / md.gamma;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < sol.zeta.size(); ++i)
    for (std::size_t j = 0; j < sol.tau.size(); ++j) {
      const double ex = exact(sol.zeta[i], sol.tau[j]).e.real() - vac;
      const double diff = sol.e_at(i, j) - vac - ex;
      num += diff * diff;
      den += ex * ex;
    }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

// ---------------------------------------------------------------- structural checks

PoleReport pole_structure_check(const Potentials& pot, int n) {
  PoleReport rep;
  rep.fit_residual = pot.fit_residual;
  rep.degree_bound = 2 * n + 1;
  for (const OmegaPotential* p : {&pot.h1, &pot.f1, &pot.e1}) {
    double top = 0.0;
    for (cplx c : p->numerator) top = std::max(top, std::abs(c));
    if (top == 0.0) continue;
    rep.max_even = std::max(rep.max_even, p->max_even_coefficient() / top);
    for (std::size_t k = p->numerator.size(); k-- > 0;)
      if (std::abs(p->numerator[k]) > 1e-10 * top) {
        rep.max_degree = std::max(rep.max_degree, static_cast<int>(k));
        break;
      }
  }
  // denominator: Lorentzian pair plus +-i m_k, all simple
  const OmegaDenominator& den = pot.h1.den;
  const auto roots = den.roots();
  rep.denominator_ok = static_cast<int>(roots.size()) == 2 * n + 2 && static_cast<int>(den.m_list.size()) == n;
  if (rep.denominator_ok) {
    try {
      den.check_distinct();
    } catch (const Error&) {
      rep.denominator_ok = false;
    }
    auto has = [&](cplx z) {
      return std::any_of(roots.begin(), roots.end(), [&](cplx r) { return std::abs(r - z) < 1e-12; });
    };
    rep.denominator_ok = rep.denominator_ok && has({den.omega0, den.sigma}) && has({den.omega0, -den.sigma});
    for (double m : den.m_list) rep.denominator_ok = rep.denominator_ok && has({0.0, m}) && has({0.0, -m});
  }
  rep.pass = rep.fit_residual < 1e-9 && rep.max_even < 1e-10 && rep.max_degree <= rep.degree_bound &&
             rep.denominator_ok;
  return rep;
}

PoleReport pole_structure_check(const BTState& state, double zeta, double tau) {
  try {
    return pole_structure_check(potentials(state, zeta, tau), state.level);
  } catch (const Error& err) {
    if (err.kind() != ErrorKind::FitResidualTooLarge) throw;
    PoleReport rep;
    rep.fit_residual = std::numeric_limits<double>::infinity();
    rep.degree_bound = 2 * state.level + 1;
    return rep;
  }
}

double reality_sweep(const BTState& state, std::span<const double> zeta, std::span<const double> tau,
                     std::span<const double> omega) {
  double worst = 0.0;
  for (double z : zeta)
    for (double t : tau) {
      const Snapshot snap = snapshot(state, z, t);
      for (double w : omega) {
        const FieldValues f = physical_fields(state, snap, w);
        worst = std::max({worst, std::abs(f.e.imag()), std::abs(f.r.imag()), std::abs(f.s.imag()),
                          std::abs(f.u.imag())});
      }
    }
  return worst;
}

}  // namespace soliton
