#pragma once

#include <array>
#include <complex>

namespace soliton {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

/// Dense 2x2 complex matrix, row-major.
struct Mat2 {
  cplx a11{}, a12{}, a21{}, a22{};

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 zero() { return {}; }

  cplx det() const { return a11 * a22 - a12 * a21; }
  cplx trace() const { return a11 + a22; }
  double max_abs() const;

  /// Closed-form inverse through the adjugate. Throws SingularMatrix when
  /// |det| < 1e-12 * (entry scale)^2.
  Mat2 inverse() const;

  Mat2& operator+=(const Mat2& o);
  Mat2& operator-=(const Mat2& o);
  Mat2& operator*=(cplx s);
};

Mat2 operator+(Mat2 a, const Mat2& b);
Mat2 operator-(Mat2 a, const Mat2& b);
Mat2 operator*(const Mat2& a, const Mat2& b);
Mat2 operator*(cplx s, Mat2 a);
Mat2 operator*(Mat2 a, cplx s);
std::array<cplx, 2> operator*(const Mat2& a, const std::array<cplx, 2>& v);

/// Coefficients on the traceless basis H = diag(i,-i), F = [[0,1],[-1,0]],
/// E = [[0,i],[i,0]].
///
/// The basis behaves like the quaternion units: H^2 = F^2 = E^2 = -I and
/// HF = E, FE = H, EH = F.
struct Su2Vector {
  cplx h{}, f{}, e{};

  Su2Vector& operator+=(const Su2Vector& o);
  Su2Vector& operator-=(const Su2Vector& o);
  Su2Vector& operator*=(cplx s);
  double max_abs() const;
};

Su2Vector operator+(Su2Vector a, const Su2Vector& b);
Su2Vector operator-(Su2Vector a, const Su2Vector& b);
Su2Vector operator*(cplx s, Su2Vector a);

/// Coefficients on {I, H, F, E}, which span all complex 2x2 matrices.
struct Gl2Vector {
  cplx id{}, h{}, f{}, e{};

  Gl2Vector() = default;
  Gl2Vector(cplx id_, cplx h_, cplx f_, cplx e_) : id(id_), h(h_), f(f_), e(e_) {}
  explicit Gl2Vector(const Su2Vector& v) : h(v.h), f(v.f), e(v.e) {}

  static Gl2Vector identity() { return {1.0, 0.0, 0.0, 0.0}; }
  static Gl2Vector H() { return {0.0, 1.0, 0.0, 0.0}; }
  static Gl2Vector F() { return {0.0, 0.0, 1.0, 0.0}; }
  static Gl2Vector E() { return {0.0, 0.0, 0.0, 1.0}; }

  Su2Vector traceless() const { return {h, f, e}; }
  double max_abs() const;
  bool is_zero() const { return id == 0.0 && h == 0.0 && f == 0.0 && e == 0.0; }

  Gl2Vector& operator+=(const Gl2Vector& o);
  Gl2Vector& operator-=(const Gl2Vector& o);
  Gl2Vector& operator*=(cplx s);
};

Gl2Vector operator+(Gl2Vector a, const Gl2Vector& b);
Gl2Vector operator-(Gl2Vector a, const Gl2Vector& b);
Gl2Vector operator-(Gl2Vector a);
Gl2Vector operator*(cplx s, Gl2Vector a);
Gl2Vector operator*(Gl2Vector a, cplx s);

/// Matrix product expressed in the {I,H,F,E} basis (complexified quaternion product).
Gl2Vector operator*(const Gl2Vector& a, const Gl2Vector& b);

Mat2 to_matrix(const Gl2Vector& v);
Mat2 to_matrix(const Su2Vector& v);
Gl2Vector from_matrix(const Mat2& m);

/// Structure-constant commutator: [a,b] = 2 (a x b) on (H,F,E).
Su2Vector su2_commutator(const Su2Vector& a, const Su2Vector& b);
Gl2Vector commutator(const Gl2Vector& a, const Gl2Vector& b);

/// Trace of the matrix product M(a) M(b).
cplx trace_product(const Gl2Vector& a, const Gl2Vector& b);

/// Decomposition of n M(v) n^{-1}. Throws SingularMatrix.
Gl2Vector conjugate(const Mat2& n, const Su2Vector& v);

}  // namespace soliton
