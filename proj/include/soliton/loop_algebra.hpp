#pragma once

#include <string>
#include <vector>

#include "soliton/polynomial.hpp"
#include "soliton/su2.hpp"

namespace soliton {

inline constexpr double kDefaultMergeTol = 1e-9;
inline constexpr double kPruneTol = 1e-14;
inline constexpr int kDefaultMaxOrder = 4;

/// The fixed pole set of the n-soliton loop algebra:
/// alpha_k = i m_k (k <= n), alpha_{n+1} = w0 - i sigma, alpha_{n+2} = w0 + i sigma,
/// followed by the negatives alpha_{k+n+2} = -alpha_k.
class PoleSet {
 public:
  PoleSet(std::vector<double> m_list, double omega0, double sigma,
          double merge_tol = kDefaultMergeTol);

  int soliton_count() const { return static_cast<int>(m_.size()); }
  /// alpha_1 .. alpha_{n+2}
  const std::vector<cplx>& half() const { return half_; }
  /// all 2(n+2) poles
  const std::vector<cplx>& all() const { return all_; }
  double merge_tol() const { return merge_tol_; }
  const std::vector<double>& m_list() const { return m_; }
  double omega0() const { return omega0_; }
  double sigma() const { return sigma_; }

  /// sum_{i=1}^{n+2} alpha_i^2
  cplx sum_alpha_sq() const;
  /// prod_{i=1}^{n+2} (x - alpha_i^2) as a polynomial in x = lambda^2, expanded in lambda.
  poly::Poly d_polynomial() const;

 private:
  std::vector<double> m_;
  double omega0_, sigma_, merge_tol_;
  std::vector<cplx> half_, all_;
};

struct PoleTerm {
  cplx alpha;
  std::vector<Gl2Vector> coeffs;  // coeffs[j-1] multiplies (lambda - alpha)^{-j}
};

/// Matrix-valued rational function of lambda in canonical form
///   sum_m poly[m] lambda^m + sum_k sum_j poles[k].coeffs[j-1] / (lambda - alpha_k)^j.
///
/// Pole orders are bounded by max_order; the polynomial degree is not.
struct LoopElement {
  std::vector<Gl2Vector> poly;
  std::vector<PoleTerm> poles;
  int max_order = kDefaultMaxOrder;
  double merge_tol = kDefaultMergeTol;

  LoopElement() = default;
  explicit LoopElement(int max_order_, double merge_tol_ = kDefaultMergeTol)
      : max_order(max_order_), merge_tol(merge_tol_) {}

  static LoopElement monomial(const Gl2Vector& c, int power, int max_order = kDefaultMaxOrder);
  static LoopElement pole_term(const Gl2Vector& c, cplx alpha, int order,
                               int max_order = kDefaultMaxOrder);

  bool empty() const { return poly.empty() && poles.empty(); }
  bool in_a() const { return poly.empty(); }
  bool in_b() const { return poles.empty(); }
  bool in_a_perp() const { return poly.size() <= 1; }
  int degree() const { return static_cast<int>(poly.size()) - 1; }

  /// Largest coefficient magnitude.
  double scale() const;
  /// Coefficient on lambda^m (zero when absent).
  Gl2Vector poly_coeff(std::size_t m) const;
  /// Index of the pole matching alpha, or -1.
  int find_pole(cplx alpha) const;
  /// Add c / (lambda - alpha)^order, merging with an existing pole.
  void add_pole(cplx alpha, int order, const Gl2Vector& c);
  void add_poly(std::size_t power, const Gl2Vector& c);

  /// Laurent coefficient of lambda^{-r} (r >= 1) in the expansion at infinity.
  Gl2Vector laurent_at_infinity(int r) const;
};

/// Remove trailing coefficients below kPruneTol relative to scale (the
/// element's own scale when <= 0) and empty poles.
LoopElement canonicalize(LoopElement x, double scale = -1.0);

LoopElement add(const LoopElement& x, const LoopElement& y);
LoopElement subtract(const LoopElement& x, const LoopElement& y);
LoopElement scale(const LoopElement& x, cplx s);
LoopElement multiply(const LoopElement& x, const LoopElement& y);
LoopElement commutator(const LoopElement& x, const LoopElement& y);

LoopElement operator+(const LoopElement& x, const LoopElement& y);
LoopElement operator-(const LoopElement& x, const LoopElement& y);
LoopElement operator*(cplx s, const LoopElement& x);

/// Multiply by a scalar polynomial p(lambda).
LoopElement multiply_scalar_poly(const LoopElement& x, std::span<const cplx> p);

/// lambda^0 matrix coefficient of the canonical-form product x y.
Gl2Vector product_constant_term(const LoopElement& x, const LoopElement& y);
/// Tr (x y)_0
cplx inner_product(const LoopElement& x, const LoopElement& y);

LoopElement proj_a(const LoopElement& x);
LoopElement proj_b(const LoopElement& x);
LoopElement proj_a_perp(const LoopElement& x);

/// x + lambda x1 for x in a-perp. Throws DomainError otherwise.
LoopElement translate(const LoopElement& x, const Gl2Vector& x1);

/// Pointwise value. Throws NearPole.
Mat2 evaluate(const LoopElement& x, cplx lambda);

/// Largest coefficient difference between two canonical forms (poles matched
/// by position within merge tolerance).
double max_coeff_diff(const LoopElement& x, const LoopElement& y);

/// Embedding of one Q^ext block [lambda A + B] / (lambda^2 - alpha^2)^j into
/// canonical pole form by partial fractions at +alpha and -alpha.
LoopElement qext_block(const Su2Vector& lambda_coeff, const Su2Vector& const_coeff, cplx alpha,
                       int order, int max_order = kDefaultMaxOrder);

// ---------------------------------------------------------------- omega side

/// Fixed omega-denominator ((w - w0)^2 + sigma^2) prod_k (w^2 + m_k^2).
struct OmegaDenominator {
  double omega0 = 0.0;
  double sigma = 1.0;
  std::vector<double> m_list;

  /// 2n+2 simple roots: w0 + i sigma, w0 - i sigma, then +i m_k, -i m_k.
  std::vector<cplx> roots() const;
  poly::Poly polynomial() const;
  cplx eval(cplx w) const;
  /// Throws PoleCollision when two roots coincide within tolerance.
  void check_distinct(double merge_tol = kDefaultMergeTol) const;
};

/// Scalar rational function of the broadening parameter with the fixed denominator.
struct OmegaPotential {
  poly::Poly numerator;  // numerator[k] multiplies w^k
  OmegaDenominator den;

  cplx eval(cplx w) const;
  /// Coefficients gamma_k of w^{2k+1}, k = 0..n.
  std::vector<cplx> odd_coefficients() const;
  /// Largest |coefficient| on an even power.
  double max_even_coefficient() const;
  int degree() const;
};

/// Vector-valued potential pair: the lambda-multiplied part (h1 H + f1 F) and
/// the constant part (e1 E), stored with their full su(2) numerators so that
/// off-pattern components stay visible.
struct SpectralPotentials {
  std::vector<Su2Vector> lambda_num;  // in powers of w
  std::vector<Su2Vector> const_num;
  OmegaDenominator den;

  OmegaPotential h1() const;
  OmegaPotential f1() const;
  OmegaPotential e1() const;
  /// Largest numerator coefficient outside the h/f (lambda part) and e (constant part) pattern.
  double off_pattern() const;
};

/// Integral over real w of [lambda B(w) + C(w)] / (w^2 - lambda^2) in closed
/// form by residues, valid for Im lambda > 0 and continued analytically.
/// Throws PoleCollision or DomainError (numerator too large for convergence).
LoopElement omega_integral_to_loop(const SpectralPotentials& p, int max_order = kDefaultMaxOrder);
LoopElement omega_integral_to_loop(const OmegaPotential& h, const OmegaPotential& f,
                                   const OmegaPotential& e, int max_order = kDefaultMaxOrder);

// ---------------------------------------------------------------- serialization

/// JSON document; see README for the layout.
std::string serialize(const LoopElement& x);
LoopElement deserialize_loop(const std::string& text);

}  // namespace soliton
