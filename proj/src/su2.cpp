#include "soliton/su2.hpp"

#include <algorithm>
#include <cmath>

#include "soliton/error.hpp"

namespace soliton {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::OrderOverflow: return "OrderOverflow";
    case ErrorKind::PoleCollision: return "PoleCollision";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NearPole: return "NearPole";
    case ErrorKind::ZeroEigenvector: return "ZeroEigenvector";
    case ErrorKind::RealityViolation: return "RealityViolation";
    case ErrorKind::FitResidualTooLarge: return "FitResidualTooLarge";
    case ErrorKind::OmegaZero: return "OmegaZero";
    case ErrorKind::NonConvergent: return "NonConvergent";
    case ErrorKind::StepOverflow: return "StepOverflow";
    case ErrorKind::InvalidFunctional: return "InvalidFunctional";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SingularMatrix: return 10;
    case ErrorKind::OrderOverflow: return 11;
    case ErrorKind::PoleCollision: return 12;
    case ErrorKind::DomainError: return 13;
    case ErrorKind::NearPole: return 14;
    case ErrorKind::ZeroEigenvector: return 15;
    case ErrorKind::RealityViolation: return 16;
    case ErrorKind::FitResidualTooLarge: return 17;
    case ErrorKind::OmegaZero: return 18;
    case ErrorKind::NonConvergent: return 19;
    case ErrorKind::StepOverflow: return 20;
    case ErrorKind::InvalidFunctional: return 21;
    case ErrorKind::InvalidArgument: return 22;
  }
  return 99;
}

// ---------------------------------------------------------------- Mat2

double Mat2::max_abs() const {
  return std::max({std::abs(a11), std::abs(a12), std::abs(a21), std::abs(a22)});
}

Mat2 Mat2::inverse() const {
  const cplx d = det();
  const double scale = max_abs();
  if (scale == 0.0 || std::abs(d) < 1e-12 * scale * scale) {
    throw Error(ErrorKind::SingularMatrix, "2x2 determinant below tolerance");
  }
  return {a22 / d, -a12 / d, -a21 / d, a11 / d};
}

Mat2& Mat2::operator+=(const Mat2& o) {
  a11 += o.a11; a12 += o.a12; a21 += o.a21; a22 += o.a22;
  return *this;
}

Mat2& Mat2::operator-=(const Mat2& o) {
  a11 -= o.a11; a12 -= o.a12; a21 -= o.a21; a22 -= o.a22;
  return *this;
}

Mat2& Mat2::operator*=(cplx s) {
  a11 *= s; a12 *= s; a21 *= s; a22 *= s;
  return *this;
}

Mat2 operator+(Mat2 a, const Mat2& b) { return a += b; }
Mat2 operator-(Mat2 a, const Mat2& b) { return a -= b; }
Mat2 operator*(cplx s, Mat2 a) { return a *= s; }
Mat2 operator*(Mat2 a, cplx s) { return a *= s; }

Mat2 operator*(const Mat2& a, const Mat2& b) {
  return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
          a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}

std::array<cplx, 2> operator*(const Mat2& a, const std::array<cplx, 2>& v) {
  return {a.a11 * v[0] + a.a12 * v[1], a.a21 * v[0] + a.a22 * v[1]};
}

// ---------------------------------------------------------------- Su2Vector

Su2Vector& Su2Vector::operator+=(const Su2Vector& o) {
  h += o.h; f += o.f; e += o.e;
  return *this;
}

Su2Vector& Su2Vector::operator-=(const Su2Vector& o) {
  h -= o.h; f -= o.f; e -= o.e;
  return *this;
}

Su2Vector& Su2Vector::operator*=(cplx s) {
  h *= s; f *= s; e *= s;
  return *this;
}

double Su2Vector::max_abs() const { return std::max({std::abs(h), std::abs(f), std::abs(e)}); }

Su2Vector operator+(Su2Vector a, const Su2Vector& b) { return a += b; }
Su2Vector operator-(Su2Vector a, const Su2Vector& b) { return a -= b; }
Su2Vector operator*(cplx s, Su2Vector a) { return a *= s; }

// ---------------------------------------------------------------- Gl2Vector

double Gl2Vector::max_abs() const {
  return std::max({std::abs(id), std::abs(h), std::abs(f), std::abs(e)});
}

Gl2Vector& Gl2Vector::operator+=(const Gl2Vector& o) {
  id += o.id; h += o.h; f += o.f; e += o.e;
  return *this;
}

Gl2Vector& Gl2Vector::operator-=(const Gl2Vector& o) {
  id -= o.id; h -= o.h; f -= o.f; e -= o.e;
  return *this;
}

Gl2Vector& Gl2Vector::operator*=(cplx s) {
  id *= s; h *= s; f *= s; e *= s;
  return *this;
}

Gl2Vector operator+(Gl2Vector a, const Gl2Vector& b) { return a += b; }
Gl2Vector operator-(Gl2Vector a, const Gl2Vector& b) { return a -= b; }
Gl2Vector operator-(Gl2Vector a) { return a *= -1.0; }
Gl2Vector operator*(cplx s, Gl2Vector a) { return a *= s; }
Gl2Vector operator*(Gl2Vector a, cplx s) { return a *= s; }

Gl2Vector operator*(const Gl2Vector& a, const Gl2Vector& b) {
  // (a0 + a)(b0 + b) = a0 b0 - a.b + a0 b + b0 a + a x b
  const cplx dot = a.h * b.h + a.f * b.f + a.e * b.e;
  return {a.id * b.id - dot,
          a.id * b.h + b.id * a.h + (a.f * b.e - a.e * b.f),
          a.id * b.f + b.id * a.f + (a.e * b.h - a.h * b.e),
          a.id * b.e + b.id * a.e + (a.h * b.f - a.f * b.h)};
}

Mat2 to_matrix(const Gl2Vector& v) {
  return {v.id + kI * v.h, v.f + kI * v.e, -v.f + kI * v.e, v.id - kI * v.h};
}

Mat2 to_matrix(const Su2Vector& v) { return to_matrix(Gl2Vector(v)); }

Gl2Vector from_matrix(const Mat2& m) {
  return {0.5 * (m.a11 + m.a22), (m.a11 - m.a22) / (2.0 * kI), 0.5 * (m.a12 - m.a21),
          (m.a12 + m.a21) / (2.0 * kI)};
}

Su2Vector su2_commutator(const Su2Vector& a, const Su2Vector& b) {
  return {2.0 * (a.f * b.e - a.e * b.f), 2.0 * (a.e * b.h - a.h * b.e),
          2.0 * (a.h * b.f - a.f * b.h)};
}

Gl2Vector commutator(const Gl2Vector& a, const Gl2Vector& b) {
  return Gl2Vector(su2_commutator(a.traceless(), b.traceless()));
}

cplx trace_product(const Gl2Vector& a, const Gl2Vector& b) {
  return 2.0 * (a.id * b.id - a.h * b.h - a.f * b.f - a.e * b.e);
}

Gl2Vector conjugate(const Mat2& n, const Su2Vector& v) {
  return from_matrix(n * to_matrix(v) * n.inverse());
}

}  // namespace soliton
