// R-matrix construction and its structural identities: the frozen k = 2
// matrix, Yang-Baxter on three tensor slots, skew-transpose symmetry, the
// Hecke relation, the inverse under q -> q^{-1}, and the first-order
// expansion around q = 1.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "monodromy/rmatrix.hpp"

using namespace monodromy;

namespace {

LaurentQ qh(int halves, Rat c = Rat(1)) {
  return LaurentQ::qPowerHalf(halves, c);
}

// Perturbs one entry of a copy of m (used to show the checks actually bite).
Mat<LaurentQ> withEntry(Mat<LaurentQ> m, std::size_t i, std::size_t j,
                        const LaurentQ& v) {
  m(i, j) = v;
  return m;
}

}  // namespace

TEST_CASE("Laurent scalar arithmetic in q^{1/2}") {
  LaurentQ a = qh(1) - qh(-3);  // q^{1/2} - q^{-3/2}

  SUBCASE("sum of coefficients gives the value at q = 1") {
    CHECK(a.evalAtOne() == Rat(0));
    CHECK((qh(2) + qh(0, Rat(3))).evalAtOne() == Rat(4));
  }

  SUBCASE("products add exponents") {
    CHECK(qh(1) * qh(-1) == LaurentQ::constant(1));
    CHECK(qh(1) * qh(1) == qh(2));
    LaurentQ square = a * a;  // q - 2 q^{-1} + q^{-3}
    CHECK(square == qh(2) - qh(-2, Rat(2)) + qh(-6));
  }

  SUBCASE("cancellation yields the canonical zero") {
    CHECK((a - a).isZero());
    CHECK(a - a == LaurentQ());
  }

  SUBCASE("q inversion negates exponents") {
    CHECK(a.qInverted() == qh(-1) - qh(3));
    CHECK(LaurentQ::constant(Rat(5)).qInverted() == LaurentQ::constant(Rat(5)));
  }

  SUBCASE("first-order coefficient under q = exp(-i pi hbar)") {
    // q^{s/2} = 1 - h s/2 + O(h^2) with h = i pi hbar.
    CHECK(qh(-1).hCoefficient() == Rat(1, 2));
    CHECK(qh(1).hCoefficient() == Rat(-1, 2));
    CHECK(a.hCoefficient() == Rat(-2));
  }
}

TEST_CASE("R-matrix at k = 2 equals the frozen matrix") {
  Mat<LaurentQ> r = kulishSklyanin(2);
  // Rows/columns ordered (1,1), (1,2), (2,1), (2,2).
  Mat<LaurentQ> expected(4, 4);
  expected(0, 0) = qh(1);
  expected(1, 1) = qh(-1);
  expected(1, 2) = qh(1) - qh(-3);
  expected(2, 2) = qh(-1);
  expected(3, 3) = qh(1);
  CHECK(r == expected);
}

TEST_CASE("R-matrix entry pattern at k = 3") {
  Mat<LaurentQ> r = kulishSklyanin(3);
  CHECK(r.rows() == 9);
  // Diagonal: q^{1/2} on (i,i) pairs, q^{-1/2} elsewhere.
  CHECK(r(0, 0) == qh(1));   // (1,1)
  CHECK(r(4, 4) == qh(1));   // (2,2)
  CHECK(r(1, 1) == qh(-1));  // (1,2)
  CHECK(r(5, 5) == qh(-1));  // (2,3)
  // Exchange entries sit at ((i,j),(j,i)) for i < j only.
  LaurentQ x = qh(1) - qh(-3);
  CHECK(r(1, 3) == x);  // (1,2) -> (2,1)
  CHECK(r(2, 6) == x);  // (1,3) -> (3,1)
  CHECK(r(5, 7) == x);  // (2,3) -> (3,2)
  CHECK(r(3, 1).isZero());  // no entry below the pair diagonal
  // Each row has at most two nonzero entries.
  for (std::size_t i = 0; i < r.rows(); ++i) {
    int nnz = 0;
    for (std::size_t j = 0; j < r.cols(); ++j)
      if (!r(i, j).isZero()) ++nnz;
    CHECK(nnz <= 2);
  }
}

TEST_CASE("permutation matrix flips tensor factors") {
  for (int k = 2; k <= 3; ++k) {
    CAPTURE(k);
    Mat<LaurentQ> p = permutation(k);
    const std::size_t n = static_cast<std::size_t>(k);

    // P^2 = I.
    CHECK(p * p == Mat<LaurentQ>::identity(n * n, LaurentQ::constant(1)));

    // P (A (x) B) P = B (x) A on small constant matrices.
    Mat<LaurentQ> a(n, n), b(n, n);
    int v = 1;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) = LaurentQ::constant(Rat(v));
        b(i, j) = LaurentQ::constant(Rat(2 * v + 1));
        ++v;
      }
    CHECK(p * kron(a, b) * p == kron(b, a));
  }
}

TEST_CASE("two-slot embedding conventions") {
  Mat<LaurentQ> r = kulishSklyanin(2);
  const LaurentQ one = LaurentQ::constant(1);

  SUBCASE("embedding into its own two slots is the identity operation") {
    CHECK(embedTwoSlots(r, 2, 0, 1, 2, one) == r);
  }

  SUBCASE("swapped slots agree with conjugation by the permutation") {
    Mat<LaurentQ> p = permutation(2);
    CHECK(embedTwoSlots(r, 2, 1, 0, 2, one) == p * r * p);
  }

  SUBCASE("three-slot embeddings act as identity on the spectator") {
    Mat<LaurentQ> r12 = embedTwoSlots(r, 2, 0, 1, 3, one);
    Mat<LaurentQ> i2 = Mat<LaurentQ>::identity(2, one);
    CHECK(r12 == kron(r, i2));
    Mat<LaurentQ> r23 = embedTwoSlots(r, 2, 1, 2, 3, one);
    CHECK(r23 == kron(i2, r));
  }
}

TEST_CASE("Yang-Baxter equation holds and perturbations break it") {
  for (int k = 2; k <= 3; ++k) {
    CAPTURE(k);
    CheckOutcome out = checkQYBE(kulishSklyanin(k), k);
    CHECK(out.pass);
    CHECK(out.witness.empty());
  }

  SUBCASE("a wrong exchange entry is caught with a witness") {
    Mat<LaurentQ> bad = withEntry(kulishSklyanin(2), 1, 2, qh(1) - qh(-1));
    CheckOutcome out = checkQYBE(bad, 2);
    CHECK_FALSE(out.pass);
    CHECK(!out.witness.empty());
  }
}

TEST_CASE("skew-transpose symmetry: R^T equals the slot swap of R") {
  for (int k = 2; k <= 4; ++k) {
    CAPTURE(k);
    CHECK(checkSkewTranspose(kulishSklyanin(k), k).pass);
  }

  SUBCASE("an asymmetric perturbation fails") {
    // Make the (1,2) and (2,1) diagonal entries disagree; the symmetry
    // requires them to be equal.
    Mat<LaurentQ> bad = withEntry(kulishSklyanin(2), 1, 1, qh(3));
    CheckOutcome out = checkSkewTranspose(bad, 2);
    CHECK_FALSE(out.pass);
    CHECK(!out.witness.empty());
  }
}

TEST_CASE("Hecke relation with the permutation on the right-hand side") {
  for (int k = 2; k <= 4; ++k) {
    CAPTURE(k);
    CHECK(heckeIdentity(kulishSklyanin(k), k).pass);
  }

  SUBCASE("the permutation itself does not satisfy the relation") {
    CheckOutcome out = heckeIdentity(permutation(2), 2);
    CHECK_FALSE(out.pass);
  }
}

TEST_CASE("q -> q^{-1} image is the two-sided inverse") {
  for (int k = 2; k <= 4; ++k) {
    CAPTURE(k);
    Mat<LaurentQ> r = kulishSklyanin(k);
    Mat<LaurentQ> rInv = qInverted(r);
    const std::size_t n = r.rows();
    Mat<LaurentQ> id = Mat<LaurentQ>::identity(n, LaurentQ::constant(1));
    CHECK(r * rInv == id);
    CHECK(rInv * r == id);
    // Transposes invert each other the same way.
    CHECK(r.transpose() * rInv.transpose() == id);
  }
}

TEST_CASE("value at q = 1 is the identity matrix") {
  for (int k = 2; k <= 5; ++k) {
    CAPTURE(k);
    Mat<Rat> at1 = kulishSklyanin(k).map(
        [](const LaurentQ& v) { return v.evalAtOne(); });
    CHECK(at1 == Mat<Rat>::identity(static_cast<std::size_t>(k * k), Rat(1)));
  }
}

TEST_CASE("first-order expansion matches the classical r-matrix") {
  SUBCASE("frozen k = 2 classical matrix") {
    Mat<Rat> r = semiclassicalR(2);
    Mat<Rat> expected(4, 4);
    expected(0, 0) = Rat(-1, 2);
    expected(1, 1) = Rat(1, 2);
    expected(1, 2) = Rat(-2);
    expected(2, 2) = Rat(1, 2);
    expected(3, 3) = Rat(-1, 2);
    CHECK(r == expected);
  }

  SUBCASE("entrywise derivative of the quantum matrix") {
    for (int k = 2; k <= 4; ++k) {
      CAPTURE(k);
      CHECK(hCoefficientMatrix(kulishSklyanin(k)) == semiclassicalR(k));
    }
  }

  SUBCASE("skew-transpose symmetry descends to first order") {
    // Differentiating R^T = P R P at q = 1 gives r^T = P r P.
    int k = 3;
    Mat<Rat> r = semiclassicalR(k);
    Mat<Rat> p = permutation(k).map(
        [](const LaurentQ& v) { return v.evalAtOne(); });
    CHECK(r.transpose() == p * r * p);
  }
}

TEST_CASE("conversion of Laurent scalars into quantum torus constants") {
  AlgebraPtr alg = makeAlgebra({"Z"}, {}, {{0}});

  SUBCASE("q^{1/2} - q^{-3/2} maps onto the quarter-unit grid") {
    LaurentQ x = qh(1) - qh(-3);
    QElement img = toQuantumScalar(x, alg);
    CHECK(img == QElement::qPower(alg, 2) - QElement::qPower(alg, -6));
  }

  SUBCASE("integer constants survive unchanged") {
    CHECK(toQuantumScalar(LaurentQ::constant(Rat(-7)), alg) ==
          QElement::constant(alg, -7));
  }

  SUBCASE("fractional coefficients are rejected") {
    CHECK_THROWS_AS(toQuantumScalar(LaurentQ::constant(Rat(1, 2)), alg),
                    std::invalid_argument);
  }
}
