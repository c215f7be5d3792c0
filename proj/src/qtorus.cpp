#include "monodromy/qtorus.hpp"

#include <algorithm>
#include <sstream>

namespace monodromy {

std::size_t Algebra::index(const std::string& name) const {
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (generators[i] == name) return i;
  for (std::size_t i = 0; i < centrals.size(); ++i)
    if (centrals[i] == name) return generators.size() + i;
  throw std::invalid_argument("unknown symbol: " + name);
}

bool Algebra::hasSymbol(const std::string& name) const {
  for (const auto& g : generators)
    if (g == name) return true;
  for (const auto& c : centrals)
    if (c == name) return true;
  return false;
}

const std::string& Algebra::nameOf(std::size_t i) const {
  if (i < generators.size()) return generators[i];
  return centrals.at(i - generators.size());
}

void Algebra::validate() const {
  const std::size_t n = size();
  if (skew.size() != n)
    throw std::invalid_argument("skew form size mismatch");
  for (const auto& row : skew)
    if (row.size() != n) throw std::invalid_argument("skew row size mismatch");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (skew[i][j] != -skew[j][i])
        throw std::invalid_argument("skew form not antisymmetric");
  for (std::size_t i = generators.size(); i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (skew[i][j] != 0)
        throw std::invalid_argument("central symbol has nonzero skew row");
  std::vector<std::string> names = generators;
  names.insert(names.end(), centrals.begin(), centrals.end());
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end())
    throw std::invalid_argument("duplicate symbol name");
}

AlgebraPtr makeAlgebra(std::vector<std::string> generators,
                       std::vector<std::string> centrals,
                       std::vector<std::vector<int>> skew) {
  auto alg = std::make_shared<Algebra>();
  alg->generators = std::move(generators);
  alg->centrals = std::move(centrals);
  alg->skew = std::move(skew);
  alg->validate();
  return alg;
}

// ---------------------------------------------------------------------------
// QElement

QElement QElement::one(const AlgebraPtr& alg) {
  return weyl(alg, std::vector<int>(alg->size(), 0));
}

QElement QElement::qPower(const AlgebraPtr& alg, long long quarters) {
  return weyl(alg, std::vector<int>(alg->size(), 0), quarters);
}

QElement QElement::constant(const AlgebraPtr& alg, const Int& c) {
  return weyl(alg, std::vector<int>(alg->size(), 0), 0, c);
}

QElement QElement::weyl(const AlgebraPtr& alg, std::vector<int> exps,
                        long long q4, Int coeff) {
  if (exps.size() != alg->size())
    throw std::invalid_argument("exponent vector length mismatch");
  QElement r(alg);
  r.insertTerm(QMonomial{q4, std::move(exps)}, std::move(coeff));
  return r;
}

QElement QElement::symbolExp(const AlgebraPtr& alg, const std::string& name,
                             int halfUnits) {
  std::vector<int> exps(alg->size(), 0);
  exps[alg->index(name)] = halfUnits;
  return weyl(alg, std::move(exps));
}

void QElement::insertTerm(QMonomial key, Int coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.try_emplace(std::move(key), coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

const AlgebraPtr& QElement::joinContext(const QElement& a, const QElement& b) {
  if (a.alg_ && b.alg_ && a.alg_ != b.alg_)
    throw std::invalid_argument("mismatched algebra contexts");
  return a.alg_ ? a.alg_ : b.alg_;
}

QElement QElement::operator+(const QElement& o) const {
  QElement r(joinContext(*this, o));
  r.terms_ = terms_;
  for (const auto& [key, c] : o.terms_) r.insertTerm(key, c);
  return r;
}

QElement QElement::operator-() const {
  QElement r(alg_);
  for (const auto& [key, c] : terms_) r.terms_.emplace(key, -c);
  return r;
}

QElement QElement::operator-(const QElement& o) const { return *this + (-o); }

QElement QElement::operator*(const QElement& o) const {
  const AlgebraPtr& alg = joinContext(*this, o);
  QElement r(alg);
  if (terms_.empty() || o.terms_.empty()) return r;
  const auto& skew = alg->skew;
  const std::size_t n = alg->size();
  for (const auto& [ka, ca] : terms_) {
    for (const auto& [kb, cb] : o.terms_) {
      // q^{(n^T eps m)/4}: exponents are half units, so n^T eps m counts
      // quarters directly.
      long long quarters = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (ka.exps[i] == 0) continue;
        long long row = 0;
        for (std::size_t j = 0; j < n; ++j) {
          if (kb.exps[j] == 0) continue;
          row += static_cast<long long>(skew[i][j]) * kb.exps[j];
        }
        quarters += static_cast<long long>(ka.exps[i]) * row;
      }
      QMonomial key;
      key.q4 = ka.q4 + kb.q4 + quarters;
      key.exps.resize(n);
      for (std::size_t i = 0; i < n; ++i) key.exps[i] = ka.exps[i] + kb.exps[i];
      r.insertTerm(std::move(key), ca * cb);
    }
  }
  return r;
}

QElement QElement::scaledBy(const Int& c) const {
  QElement r(alg_);
  if (c == 0) return r;
  for (const auto& [key, v] : terms_) r.terms_.emplace(key, v * c);
  return r;
}

QElement QElement::qScaled(int s) const {
  QElement r(alg_);
  for (const auto& [key, v] : terms_) {
    QMonomial k = key;
    k.q4 *= s;
    r.insertTerm(std::move(k), v);
  }
  return r;
}

QElement QElement::involution() const {
  // On a Weyl monomial the star map only conjugates the q power; the
  // antimultiplicative property is a theorem about this definition, checked
  // in tests rather than imposed.
  return qScaled(-1);
}

CLaurent QElement::classicalSpecialize() const {
  CLaurent r(alg_);
  for (const auto& [key, c] : terms_) r.insertTerm(key.exps, Rat(c));
  return r;
}

Signature QElement::coefficientSignature() const {
  if (terms_.empty()) return Signature::Zero;
  bool pos = false, neg = false;
  for (const auto& [key, c] : terms_) (c > 0 ? pos : neg) = true;
  if (pos && neg) return Signature::Mixed;
  return pos ? Signature::AllPositive : Signature::AllNegative;
}

// ---------------------------------------------------------------------------
// CLaurent

CLaurent CLaurent::one(const AlgebraPtr& alg) {
  return monomial(alg, std::vector<int>(alg->size(), 0));
}

CLaurent CLaurent::constant(const AlgebraPtr& alg, const Rat& c) {
  return monomial(alg, std::vector<int>(alg->size(), 0), c);
}

CLaurent CLaurent::monomial(const AlgebraPtr& alg, std::vector<int> exps,
                            Rat coeff) {
  if (exps.size() != alg->size())
    throw std::invalid_argument("exponent vector length mismatch");
  CLaurent r(alg);
  r.insertTerm(std::move(exps), std::move(coeff));
  return r;
}

CLaurent CLaurent::symbolExp(const AlgebraPtr& alg, const std::string& name,
                             int halfUnits) {
  std::vector<int> exps(alg->size(), 0);
  exps[alg->index(name)] = halfUnits;
  return monomial(alg, std::move(exps));
}

void CLaurent::insertTerm(std::vector<int> exps, Rat coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.try_emplace(std::move(exps), coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

CLaurent CLaurent::operator+(const CLaurent& o) const {
  if (alg_ && o.alg_ && alg_ != o.alg_)
    throw std::invalid_argument("mismatched algebra contexts");
  CLaurent r(alg_ ? alg_ : o.alg_);
  r.terms_ = terms_;
  for (const auto& [key, c] : o.terms_) r.insertTerm(key, c);
  return r;
}

CLaurent CLaurent::operator-() const {
  CLaurent r(alg_);
  for (const auto& [key, c] : terms_) r.terms_.emplace(key, -c);
  return r;
}

CLaurent CLaurent::operator-(const CLaurent& o) const { return *this + (-o); }

CLaurent CLaurent::operator*(const CLaurent& o) const {
  if (alg_ && o.alg_ && alg_ != o.alg_)
    throw std::invalid_argument("mismatched algebra contexts");
  CLaurent r(alg_ ? alg_ : o.alg_);
  for (const auto& [ka, ca] : terms_) {
    for (const auto& [kb, cb] : o.terms_) {
      std::vector<int> key(ka.size());
      for (std::size_t i = 0; i < ka.size(); ++i) key[i] = ka[i] + kb[i];
      r.insertTerm(std::move(key), ca * cb);
    }
  }
  return r;
}

CLaurent CLaurent::scaledBy(const Rat& c) const {
  CLaurent r(alg_);
  if (c == 0) return r;
  for (const auto& [key, v] : terms_) r.terms_.emplace(key, v * c);
  return r;
}

Signature CLaurent::coefficientSignature() const {
  if (terms_.empty()) return Signature::Zero;
  bool pos = false, neg = false;
  for (const auto& [key, c] : terms_) (c > 0 ? pos : neg) = true;
  if (pos && neg) return Signature::Mixed;
  return pos ? Signature::AllPositive : Signature::AllNegative;
}

CLaurent firstOrderBracket(const QElement& a, const QElement& b) {
  if (a.algebra() && b.algebra() && a.algebra() != b.algebra())
    throw std::invalid_argument("mismatched algebra contexts");
  const AlgebraPtr& alg = a.algebra() ? a.algebra() : b.algebra();
  CLaurent r = CLaurent::zero(alg);
  if (!alg) return r;
  const auto& skew = alg->skew;
  const std::size_t n = alg->size();
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      long long quarters = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (ka.exps[i] == 0) continue;
        long long row = 0;
        for (std::size_t j = 0; j < n; ++j) {
          if (kb.exps[j] == 0) continue;
          row += static_cast<long long>(skew[i][j]) * kb.exps[j];
        }
        quarters += static_cast<long long>(ka.exps[i]) * row;
      }
      if (quarters == 0) continue;
      std::vector<int> key(n);
      for (std::size_t i = 0; i < n; ++i) key[i] = ka.exps[i] + kb.exps[i];
      // (n^T eps m)/2 with half-unit vectors: quarters/2 as an exact rational.
      r += CLaurent::monomial(alg, std::move(key),
                              Rat(ca * cb * quarters, 2));
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// printing

namespace {

void appendExpPart(std::ostream& os, const Algebra& alg,
                   const std::vector<int>& exps) {
  bool any = false;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] == 0) continue;
    os << (any ? " " : "") << "e^{" << exps[i] << "/2*" << alg.nameOf(i)
       << "}";
    any = true;
  }
  if (!any) os << "1";
}

}  // namespace

std::string describe(const QElement& a) {
  if (a.isZero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, c] : a.terms()) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")";
    if (key.q4 != 0) os << " q^{" << key.q4 << "/4}";
    os << " ";
    appendExpPart(os, *a.algebra(), key.exps);
  }
  return os.str();
}

std::string describe(const CLaurent& a) {
  if (a.isZero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, c] : a.terms()) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ") ";
    appendExpPart(os, *a.algebra(), key);
  }
  return os.str();
}

std::string describe(Signature s) {
  switch (s) {
    case Signature::Zero: return "zero";
    case Signature::AllPositive: return "all-positive";
    case Signature::AllNegative: return "all-negative";
    case Signature::Mixed: return "mixed";
  }
  return "?";
}

std::ostream& operator<<(std::ostream& os, const QElement& a) {
  return os << describe(a);
}
std::ostream& operator<<(std::ostream& os, const CLaurent& a) {
  return os << describe(a);
}
std::ostream& operator<<(std::ostream& os, Signature s) {
  return os << describe(s);
}

}  // namespace monodromy
