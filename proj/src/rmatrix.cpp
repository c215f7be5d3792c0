#include "monodromy/rmatrix.hpp"

#include <ostream>
#include <sstream>
#include <stdexcept>

namespace monodromy {

void LaurentQ::insertTerm(int halves, const Rat& c) {
  if (c == 0) return;
  auto [it, inserted] = coeffs_.try_emplace(halves, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) coeffs_.erase(it);
  }
}

LaurentQ LaurentQ::constant(const Rat& c) { return qPowerHalf(0, c); }

LaurentQ LaurentQ::qPowerHalf(int halves, const Rat& c) {
  LaurentQ p;
  p.insertTerm(halves, c);
  return p;
}

LaurentQ LaurentQ::operator+(const LaurentQ& o) const {
  LaurentQ r = *this;
  r += o;
  return r;
}

LaurentQ& LaurentQ::operator+=(const LaurentQ& o) {
  for (const auto& [s, c] : o.coeffs_) insertTerm(s, c);
  return *this;
}

LaurentQ LaurentQ::operator-(const LaurentQ& o) const {
  LaurentQ r = *this;
  for (const auto& [s, c] : o.coeffs_) r.insertTerm(s, -c);
  return r;
}

LaurentQ LaurentQ::operator-() const {
  LaurentQ r;
  for (const auto& [s, c] : coeffs_) r.coeffs_.emplace(s, -c);
  return r;
}

LaurentQ LaurentQ::operator*(const LaurentQ& o) const {
  LaurentQ r;
  for (const auto& [sa, ca] : coeffs_)
    for (const auto& [sb, cb] : o.coeffs_) r.insertTerm(sa + sb, Rat(ca * cb));
  return r;
}

LaurentQ LaurentQ::qInverted() const {
  LaurentQ r;
  for (const auto& [s, c] : coeffs_) r.coeffs_.emplace(-s, c);
  return r;
}

Rat LaurentQ::evalAtOne() const {
  Rat sum = 0;
  for (const auto& [s, c] : coeffs_) sum += c;
  return sum;
}

Rat LaurentQ::hCoefficient() const {
  Rat sum = 0;
  for (const auto& [s, c] : coeffs_) sum -= Rat(c * s) / 2;
  return sum;
}

std::string LaurentQ::describe() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [s, c] : coeffs_) {
    if (!first) os << " + ";
    first = false;
    os << c;
    if (s != 0) os << "*q^(" << s << "/2)";
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const LaurentQ& p) {
  return os << p.describe();
}

Mat<LaurentQ> kulishSklyanin(int k) {
  if (k < 2) throw std::invalid_argument("R-matrix needs k >= 2");
  const std::size_t n = static_cast<std::size_t>(k);
  Mat<LaurentQ> r(n * n, n * n);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      std::size_t row = static_cast<std::size_t>(i * k + j);
      r(row, row) = LaurentQ::qPowerHalf(i == j ? 1 : -1);
      if (i < j) {
        std::size_t col = static_cast<std::size_t>(j * k + i);
        r(row, col) =
            LaurentQ::qPowerHalf(1) - LaurentQ::qPowerHalf(-3);
      }
    }
  return r;
}

Mat<LaurentQ> permutation(int k) {
  const std::size_t n = static_cast<std::size_t>(k);
  Mat<LaurentQ> p(n * n, n * n);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      p(static_cast<std::size_t>(i * k + j),
        static_cast<std::size_t>(j * k + i)) = LaurentQ::constant(1);
  return p;
}

Mat<LaurentQ> qInverted(const Mat<LaurentQ>& m) {
  return m.map([](const LaurentQ& v) { return v.qInverted(); });
}

namespace {

std::string entryWitness(const char* what, std::size_t i, std::size_t j,
                         const LaurentQ& lhs, const LaurentQ& rhs) {
  std::ostringstream os;
  os << what << ": entry (" << i << "," << j << ") lhs = " << lhs.describe()
     << ", rhs = " << rhs.describe();
  return os.str();
}

CheckOutcome compareMatrices(const char* what, const Mat<LaurentQ>& lhs,
                             const Mat<LaurentQ>& rhs) {
  for (std::size_t i = 0; i < lhs.rows(); ++i)
    for (std::size_t j = 0; j < lhs.cols(); ++j)
      if (!(lhs(i, j) == rhs(i, j)))
        return CheckOutcome::fail(entryWitness(what, i, j, lhs(i, j), rhs(i, j)));
  return {};
}

}  // namespace

CheckOutcome checkQYBE(const Mat<LaurentQ>& r, int k) {
  const LaurentQ one = LaurentQ::constant(1);
  Mat<LaurentQ> r12 = embedTwoSlots(r, k, 0, 1, 3, one);
  Mat<LaurentQ> r13 = embedTwoSlots(r, k, 0, 2, 3, one);
  Mat<LaurentQ> r23 = embedTwoSlots(r, k, 1, 2, 3, one);
  return compareMatrices("Yang-Baxter", r12 * r13 * r23, r23 * r13 * r12);
}

CheckOutcome checkSkewTranspose(const Mat<LaurentQ>& r, int k) {
  Mat<LaurentQ> p = permutation(k);
  return compareMatrices("skew transpose", r.transpose(), p * r * p);
}

CheckOutcome heckeIdentity(const Mat<LaurentQ>& r, int k) {
  const LaurentQ qh = LaurentQ::qPowerHalf(1);
  const LaurentQ qmh = LaurentQ::qPowerHalf(-1);
  Mat<LaurentQ> rinvT = qInverted(r).transpose();
  Mat<LaurentQ> lhs = r.scaled(qh) - rinvT.scaled(qmh);
  LaurentQ qDiff = LaurentQ::qPowerHalf(2) - LaurentQ::qPowerHalf(-2);
  Mat<LaurentQ> rhs = permutation(k).scaled(qDiff);
  return compareMatrices("Hecke", lhs, rhs);
}

Mat<Rat> semiclassicalR(int k) {
  const std::size_t n = static_cast<std::size_t>(k);
  Mat<Rat> r(n * n, n * n);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      std::size_t row = static_cast<std::size_t>(i * k + j);
      r(row, row) = (i == j) ? Rat(-1, 2) : Rat(1, 2);
      if (i < j)
        r(row, static_cast<std::size_t>(j * k + i)) = Rat(-2);
    }
  return r;
}

Mat<Rat> hCoefficientMatrix(const Mat<LaurentQ>& m) {
  return m.map([](const LaurentQ& v) { return v.hCoefficient(); });
}

QElement toQuantumScalar(const LaurentQ& p, const AlgebraPtr& alg) {
  QElement out = QElement::zero(alg);
  for (const auto& [s, c] : p.terms()) {
    if (denominator(c) != 1)
      throw std::invalid_argument(
          "quantum scalar conversion needs integer coefficients, got " +
          p.describe());
    out = out + QElement::weyl(alg, std::vector<int>(alg->size(), 0), 2 * s,
                               numerator(c));
  }
  return out;
}

}  // namespace monodromy
