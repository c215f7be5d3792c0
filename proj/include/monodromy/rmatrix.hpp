#pragma once
// The standard quantum R-matrix acting on C^k (x) C^k, with exact Laurent
// arithmetic in the half-integer powers of q that its entries live on, and
// the structural checks it must satisfy: the quantum Yang-Baxter equation,
// the skew-transpose symmetry, the Hecke relation, and the first-order
// (semiclassical) expansion around q = 1.

#include <map>
#include <string>

#include "monodromy/check.hpp"
#include "monodromy/matrix.hpp"
#include "monodromy/qtorus.hpp"

namespace monodromy {

/// Exact Laurent polynomial in q^{1/2} with rational coefficients.
/// Exponents are stored in half units: key s represents q^{s/2}.
class LaurentQ {
 public:
  LaurentQ() = default;  // zero

  static LaurentQ constant(const Rat& c);
  /// c * q^{halves/2}
  static LaurentQ qPowerHalf(int halves, const Rat& c = Rat(1));

  bool isZero() const { return coeffs_.empty(); }
  bool operator==(const LaurentQ& o) const { return coeffs_ == o.coeffs_; }

  LaurentQ operator+(const LaurentQ& o) const;
  LaurentQ operator-(const LaurentQ& o) const;
  LaurentQ operator-() const;
  LaurentQ operator*(const LaurentQ& o) const;
  LaurentQ& operator+=(const LaurentQ& o);

  /// Substitutes q -> q^{-1} (negates every exponent).
  LaurentQ qInverted() const;

  /// Value at q = 1 (the sum of all coefficients).
  Rat evalAtOne() const;

  /// First-order coefficient when q = exp(-i*pi*hbar) is substituted and
  /// the result is expanded in h = i*pi*hbar: q^{s/2} = 1 - h*s/2 + O(h^2),
  /// so this returns -sum_s c_s * s/2.
  Rat hCoefficient() const;

  /// Exponent (in half units) -> coefficient, sparse.
  const std::map<int, Rat>& terms() const { return coeffs_; }

  std::string describe() const;

 private:
  void insertTerm(int halves, const Rat& c);
  std::map<int, Rat> coeffs_;
};

std::ostream& operator<<(std::ostream& os, const LaurentQ& p);

/// Builds the k^2 x k^2 quantum R-matrix on the tensor-pair basis
/// (i,j) -> row i*k + j:
///   q^{1/2} on rows (i,i); q^{-1/2} on rows (i,j), i != j;
///   q^{1/2} - q^{-3/2} at ((i,j),(j,i)) for i < j.
Mat<LaurentQ> kulishSklyanin(int k);

/// The flip P(v (x) w) = w (x) v on C^k (x) C^k.
Mat<LaurentQ> permutation(int k);

/// Entrywise q -> q^{-1}; for the R-matrix above this is its inverse.
Mat<LaurentQ> qInverted(const Mat<LaurentQ>& m);

/// Embeds a k^2 x k^2 two-slot operator into nSlots tensor factors of C^k,
/// acting on slots (slotA, slotB) (0-based, slotA != slotB) and as the
/// identity elsewhere.  Works over any scalar ring.
template <typename T>
Mat<T> embedTwoSlots(const Mat<T>& r, int k, int slotA, int slotB, int nSlots,
                     const T& one) {
  std::size_t dim = 1;
  for (int s = 0; s < nSlots; ++s) dim *= static_cast<std::size_t>(k);
  Mat<T> out(dim, dim);
  const T zero{};
  std::vector<int> ri(nSlots), ci(nSlots);
  for (std::size_t row = 0; row < dim; ++row) {
    std::size_t tmp = row;
    for (int s = nSlots - 1; s >= 0; --s) {
      ri[s] = static_cast<int>(tmp % k);
      tmp /= k;
    }
    for (std::size_t col = 0; col < dim; ++col) {
      tmp = col;
      for (int s = nSlots - 1; s >= 0; --s) {
        ci[s] = static_cast<int>(tmp % k);
        tmp /= k;
      }
      bool spectator_ok = true;
      for (int s = 0; s < nSlots && spectator_ok; ++s)
        if (s != slotA && s != slotB && ri[s] != ci[s]) spectator_ok = false;
      if (!spectator_ok) continue;
      const T& v = r(static_cast<std::size_t>(ri[slotA] * k + ri[slotB]),
                     static_cast<std::size_t>(ci[slotA] * k + ci[slotB]));
      if (v == zero) continue;
      out(row, col) = v;
    }
  }
  (void)one;
  return out;
}

/// R12 R13 R23 == R23 R13 R12 on three tensor slots.
CheckOutcome checkQYBE(const Mat<LaurentQ>& r, int k);

/// Full transpose equals the slot swap: R^T == P R P.
CheckOutcome checkSkewTranspose(const Mat<LaurentQ>& r, int k);

/// q^{1/2} R - q^{-1/2} (R^T)^{-1} == (q - q^{-1}) P, where (R^T)^{-1} is
/// computed as the transpose of the entrywise q -> q^{-1} image.
CheckOutcome heckeIdentity(const Mat<LaurentQ>& r, int k);

/// The classical r-matrix: the first-order term of the R-matrix above,
/// R = I + h*r + O(h^2) under q = exp(-i*pi*hbar), h = i*pi*hbar.
/// Entries: +1/2 on rows (i,j) with i != j, -1/2 on rows (i,i),
/// and -2 at ((i,j),(j,i)) for i < j.
Mat<Rat> semiclassicalR(int k);

/// Entrywise first-order coefficients of a q-matrix (see hCoefficient).
Mat<Rat> hCoefficientMatrix(const Mat<LaurentQ>& m);

/// Converts a Laurent scalar into an element of a quantum torus algebra
/// (a pure q-power combination, no generators).  Every coefficient must be
/// an integer; q^{s/2} maps to the torus q-power with 2s quarter units.
QElement toQuantumScalar(const LaurentQ& p, const AlgebraPtr& alg);

}  // namespace monodromy
