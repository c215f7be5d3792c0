#pragma once
// Exact arithmetic in the quantum torus: the noncommutative algebra generated
// by exponentials of half shear coordinates e^{x_a/2} with constant
// commutation relations fixed by an integer skew form, central parameters
// omega_b, and quarter powers of q.
//
// Normal form: Weyl (symmetric) ordering.  A monomial is W(n) = the
// symmetrically ordered exponential with exponent vector n recorded in
// half-coordinate units, times an integer power of q^{1/4}.  Products obey
//
//     W(n) * W(m) = q^{(n^T eps m)/4} * W(n + m)
//
// where eps is the skew form on generators (centrals have zero rows), and the
// quarter-unit count is exact because exponents are stored in half units.

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace monodromy {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Sign classification of the integer/rational coefficients of an element.
enum class Signature { Zero, AllPositive, AllNegative, Mixed };

/// Generator context: ordered generator names (shear coordinates Z_a and cusp
/// coordinates pi_j), ordered central names (omega_b), and the integer
/// antisymmetric skew form over the full symbol list (central rows/columns
/// are identically zero).
struct Algebra {
  std::vector<std::string> generators;
  std::vector<std::string> centrals;
  std::vector<std::vector<int>> skew;  // size() x size()

  std::size_t size() const { return generators.size() + centrals.size(); }

  /// Index of a symbol in the combined generator+central ordering.
  std::size_t index(const std::string& name) const;
  bool hasSymbol(const std::string& name) const;
  const std::string& nameOf(std::size_t i) const;
  bool isCentral(std::size_t i) const { return i >= generators.size(); }

  /// Validates antisymmetry, integer entries, zero central rows, and unique
  /// names; throws std::invalid_argument on violation.
  void validate() const;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

/// Makes a validated shared algebra context.
AlgebraPtr makeAlgebra(std::vector<std::string> generators,
                       std::vector<std::string> centrals,
                       std::vector<std::vector<int>> skew);

/// Key of one Weyl-ordered term: quarter-unit q exponent and half-unit
/// exponent vector over generators+centrals.
struct QMonomial {
  long long q4 = 0;        // power of q in units of 1/4
  std::vector<int> exps;   // entry n_a means e^{n_a * x_a / 2}

  friend auto operator<=>(const QMonomial&, const QMonomial&) = default;
};

class CLaurent;  // commutative specialization, defined below

/// Noncommutative Laurent polynomial in Weyl normal form: a finite map from
/// QMonomial keys to nonzero integer coefficients.  Canonical form is unique,
/// so equality is map equality.  A default-constructed element is a detached
/// zero usable with any context (this keeps matrices of QElement cheap to
/// default-construct).
class QElement {
 public:
  QElement() = default;

  static QElement zero(const AlgebraPtr& alg) { return QElement(alg); }
  static QElement one(const AlgebraPtr& alg);
  /// q^{quarters/4} as an element.
  static QElement qPower(const AlgebraPtr& alg, long long quarters);
  /// Integer constant.
  static QElement constant(const AlgebraPtr& alg, const Int& c);
  /// W(exps) with optional q power and coefficient.
  static QElement weyl(const AlgebraPtr& alg, std::vector<int> exps,
                       long long q4 = 0, Int coeff = 1);
  /// e^{halfUnits * x_name / 2}: the exponential of a single symbol.
  static QElement symbolExp(const AlgebraPtr& alg, const std::string& name,
                            int halfUnits);

  const AlgebraPtr& algebra() const { return alg_; }
  const std::map<QMonomial, Int>& terms() const { return terms_; }
  bool isZero() const { return terms_.empty(); }
  std::size_t termCount() const { return terms_.size(); }

  QElement operator+(const QElement& o) const;
  QElement operator-(const QElement& o) const;
  QElement operator-() const;
  /// Weyl-ordered product (associative; throws on mismatched contexts).
  QElement operator*(const QElement& o) const;
  QElement& operator+=(const QElement& o) { return *this = *this + o; }
  QElement& operator-=(const QElement& o) { return *this = *this - o; }
  QElement& operator*=(const QElement& o) { return *this = *this * o; }
  bool operator==(const QElement& o) const { return terms_ == o.terms_; }

  QElement scaledBy(const Int& c) const;
  /// Multiplies every term's q power by the integer factor s (used to
  /// instantiate R-matrix data at q^{-1} next to torus-built matrices).
  QElement qScaled(int s) const;

  /// The *-involution: q^{m/4} -> q^{-m/4}, W(n) -> W(n), antimultiplicative.
  QElement involution() const;

  /// q -> 1 specialization into the commutative Laurent ring.
  CLaurent classicalSpecialize() const;

  Signature coefficientSignature() const;

 private:
  explicit QElement(AlgebraPtr alg) : alg_(std::move(alg)) {}
  void insertTerm(QMonomial key, Int coeff);
  static const AlgebraPtr& joinContext(const QElement& a, const QElement& b);

  AlgebraPtr alg_;
  std::map<QMonomial, Int> terms_;
};

/// Commutative Laurent polynomial in the exponentiated half coordinates with
/// exact rational coefficients; the image of classicalSpecialize and the
/// value type of firstOrderBracket.
class CLaurent {
 public:
  CLaurent() = default;
  static CLaurent zero(const AlgebraPtr& alg) { return CLaurent(alg); }
  static CLaurent one(const AlgebraPtr& alg);
  static CLaurent constant(const AlgebraPtr& alg, const Rat& c);
  static CLaurent monomial(const AlgebraPtr& alg, std::vector<int> exps,
                           Rat coeff = 1);
  static CLaurent symbolExp(const AlgebraPtr& alg, const std::string& name,
                            int halfUnits);

  const AlgebraPtr& algebra() const { return alg_; }
  const std::map<std::vector<int>, Rat>& terms() const { return terms_; }
  bool isZero() const { return terms_.empty(); }

  CLaurent operator+(const CLaurent& o) const;
  CLaurent operator-(const CLaurent& o) const;
  CLaurent operator-() const;
  CLaurent operator*(const CLaurent& o) const;
  CLaurent& operator+=(const CLaurent& o) { return *this = *this + o; }
  CLaurent& operator-=(const CLaurent& o) { return *this = *this - o; }
  CLaurent& operator*=(const CLaurent& o) { return *this = *this * o; }
  bool operator==(const CLaurent& o) const { return terms_ == o.terms_; }

  CLaurent scaledBy(const Rat& c) const;
  Signature coefficientSignature() const;

 private:
  explicit CLaurent(AlgebraPtr alg) : alg_(std::move(alg)) {}
  void insertTerm(std::vector<int> exps, Rat coeff);
  friend class QElement;

  AlgebraPtr alg_;
  std::map<std::vector<int>, Rat> terms_;
};

/// First-order bracket: on monomials {W(n), W(m)} = (n^T eps m / 2) W(n+m),
/// extended bilinearly; equals the limit of (ab - ba)/(i*pi*hbar) under
/// q = e^{i*pi*hbar}.  Antisymmetric, Leibniz, Jacobi.
CLaurent firstOrderBracket(const QElement& a, const QElement& b);

/// Pretty printers used by reports and test diagnostics.
std::string describe(const QElement& a);
std::string describe(const CLaurent& a);
std::string describe(Signature s);

std::ostream& operator<<(std::ostream& os, const QElement& a);
std::ostream& operator<<(std::ostream& os, const CLaurent& a);
std::ostream& operator<<(std::ostream& os, Signature s);

}  // namespace monodromy
