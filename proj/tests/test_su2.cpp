#include <doctest.h>

#include <random>

#include "soliton/error.hpp"
#include "soliton/su2.hpp"
#include "test_support.hpp"

using namespace soliton;
using soliton::testing::mat_diff;

TEST_CASE("basis matrices") {
  const Mat2 h = to_matrix(Gl2Vector::H());
  CHECK(h.a11 == kI);
  CHECK(h.a22 == -kI);
  CHECK(h.a12 == 0.0);
  CHECK(mat_diff(to_matrix(Gl2Vector::identity()), Mat2::identity()) == 0.0);

  const Mat2 fe = to_matrix(Gl2Vector{0.0, 0.0, 1.0, 1.0});
  CHECK(fe.a12 == cplx(1.0, 1.0));
  CHECK(fe.a21 == cplx(-1.0, 1.0));
  CHECK(fe.a11 == 0.0);
}

TEST_CASE("from_matrix inverts to_matrix") {
  const Gl2Vector v = from_matrix(to_matrix(Gl2Vector::H()));
  CHECK(v.id == 0.0);
  CHECK(v.h == 1.0);
  CHECK(v.f == 0.0);
  CHECK(v.e == 0.0);
  CHECK(from_matrix(Mat2::zero()).is_zero());

  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    const Mat2 m{testing::random_cplx(rng), testing::random_cplx(rng), testing::random_cplx(rng),
                 testing::random_cplx(rng)};
    CHECK(mat_diff(to_matrix(from_matrix(m)), m) < 1e-15);
    const Gl2Vector a = from_matrix(m);
    CHECK((from_matrix(to_matrix(a)) - a).max_abs() < 1e-15);
  }
}

TEST_CASE("squares and traces of the basis") {
  for (const Gl2Vector& b : {Gl2Vector::H(), Gl2Vector::F(), Gl2Vector::E()}) {
    CHECK(mat_diff(to_matrix(b) * to_matrix(b), -1.0 * Mat2::identity()) == 0.0);
    CHECK(trace_product(b, b) == -2.0);
  }
  CHECK(trace_product(Gl2Vector::H(), Gl2Vector::F()) == 0.0);
  CHECK(trace_product(Gl2Vector::F(), Gl2Vector::E()) == 0.0);
  CHECK(trace_product(Gl2Vector::E(), Gl2Vector::H()) == 0.0);
  CHECK((to_matrix(Gl2Vector::H()) * to_matrix(Gl2Vector::F())).trace() == 0.0);
}

TEST_CASE("structure constants") {
  const Su2Vector H{1.0, 0.0, 0.0}, F{0.0, 1.0, 0.0};
  const Su2Vector hf = su2_commutator(H, F);
  CHECK(hf.e == 2.0);
  CHECK(hf.h == 0.0);
  CHECK(hf.f == 0.0);

  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    const Su2Vector a = testing::random_su2(rng), b = testing::random_su2(rng),
                    c = testing::random_su2(rng);
    CHECK(su2_commutator(a, a).max_abs() == 0.0);

    const Mat2 ma = to_matrix(a), mb = to_matrix(b);
    const Gl2Vector direct = from_matrix(ma * mb - mb * ma);
    const Su2Vector fast = su2_commutator(a, b);
    CHECK(std::abs(direct.id) < 1e-14);
    CHECK((Gl2Vector(fast) - direct).max_abs() < 1e-13 * std::max(1.0, direct.max_abs()));

    const Su2Vector jac = su2_commutator(su2_commutator(a, b), c) +
                          su2_commutator(su2_commutator(b, c), a) +
                          su2_commutator(su2_commutator(c, a), b);
    CHECK(jac.max_abs() < 1e-12);

    const Gl2Vector ga = testing::random_gl2(rng), gb = testing::random_gl2(rng);
    CHECK(mat_diff(to_matrix(ga * gb), to_matrix(ga) * to_matrix(gb)) < 1e-14);
  }
}

TEST_CASE("conjugation") {
  const Su2Vector H{1.0, 0.0, 0.0};
  CHECK((conjugate(Mat2::identity(), H) - Gl2Vector::H()).max_abs() < 1e-15);
  CHECK((conjugate(to_matrix(Gl2Vector::E()), H) + Gl2Vector::H()).max_abs() < 1e-15);

  // (a I + b E) H (a I + b E)^{-1} = ((a^2-b^2) H + 2ab F) / (a^2+b^2) by direct expansion.
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const cplx a = testing::random_cplx(rng), b = testing::random_cplx(rng);
    const Gl2Vector k = conjugate(to_matrix(Gl2Vector{a, 0.0, 0.0, b}), H);
    const cplx n = a * a + b * b;
    CHECK(std::abs(k.h - (a * a - b * b) / n) < 1e-12);
    CHECK(std::abs(k.f - 2.0 * a * b / n) < 1e-12);
    CHECK(std::abs(k.e) < 1e-12);
    CHECK(std::abs(k.id) < 1e-12);
  }

  const Mat2 singular{1.0, 2.0, 2.0, 4.0};
  CHECK_THROWS_AS(conjugate(singular, H), Error);
  try {
    conjugate(singular, H);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularMatrix);
  }
}
