#include "monodromy/relations.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace monodromy {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument(msg);
}

TensorTerm term(std::vector<Factor> word) {
  TensorTerm t;
  t.word = std::move(word);
  return t;
}

TensorTerm term(LaurentQ coeff, std::vector<Factor> word) {
  TensorTerm t;
  t.coeff = std::move(coeff);
  t.word = std::move(word);
  return t;
}

Factor S(int slot, int mat, int power = 1) {
  return Factor::slotMat(slot, mat, power);
}
Factor R12(int a = 0, int b = 1) { return Factor::r(RForm::R, a, b); }
Factor RT12(int a = 0, int b = 1) { return Factor::r(RForm::RT, a, b); }
Factor Ri12(int a = 0, int b = 1) { return Factor::r(RForm::Rinv, a, b); }
Factor RiT12(int a = 0, int b = 1) { return Factor::r(RForm::RinvT, a, b); }

}  // namespace

Factor Factor::slotMat(int slot, int matIndex, int power) {
  Factor f;
  f.kind = Kind::Slot;
  f.slot = slot;
  f.matIndex = matIndex;
  f.power = power;
  return f;
}

Factor Factor::r(RForm form, int legA, int legB) {
  Factor f;
  f.kind = Kind::RFactor;
  f.form = form;
  f.legA = legA;
  f.legB = legB;
  return f;
}

Factor Factor::perm(int legA, int legB) {
  Factor f;
  f.kind = Kind::Perm;
  f.legA = legA;
  f.legB = legB;
  return f;
}

const std::vector<RelationTemplate>& relationCatalog() {
  static const std::vector<RelationTemplate> catalog = [] {
    std::vector<RelationTemplate> c;

    c.push_back({"basic1", 2, 2,
                 {term({S(0, 0), S(1, 1)})},
                 {term({S(1, 1), S(0, 0), R12()})},
                 {},
                 "open arcs at a shared cusp, first arc left of second"});

    c.push_back({"basic1dual", 2, 2,
                 {term({S(0, 0), S(1, 1), RT12()})},
                 {term({S(1, 1), S(0, 0)})},
                 {},
                 "open arcs at a shared cusp, first arc right of second"});

    c.push_back({"basic2", 2, 1,
                 {term({RT12(), S(0, 0), S(1, 0)})},
                 {term({S(1, 0), S(0, 0), R12()})},
                 {},
                 "one open arc against itself"});

    c.push_back({"relcomp1", 2, 2,
                 {term({S(0, 0), S(1, 1)})},
                 {term({R12(), S(1, 1), S(0, 0), R12()})},
                 {},
                 "arcs sharing both cusps; source i<k, target j<l"});

    c.push_back({"relcomp2", 2, 2,
                 {term({S(0, 0), S(1, 1)})},
                 {term({R12(), S(1, 1), S(0, 0), RiT12()})},
                 {},
                 "arcs sharing both cusps; source i>k, target j<l"});

    c.push_back({"relcomp3", 2, 2,
                 {term({S(0, 0), S(1, 1)})},
                 {term({RiT12(), S(1, 1), S(0, 0), R12()})},
                 {},
                 "arcs sharing both cusps; source i<k, target j>l"});

    c.push_back({"relcomp4", 2, 2,
                 {term({S(0, 0), S(1, 1)})},
                 {term({RiT12(), S(1, 1), S(0, 0), RiT12()})},
                 {},
                 "arcs sharing both cusps; source i>k, target j>l"});

    c.push_back({"r2143", 2, 2,
                 {term({S(0, 0), R12(), S(1, 1), Ri12()})},
                 {term({R12(), S(1, 1), Ri12(), S(0, 0)})},
                 {{0, true}, {1, true}},
                 "closed arcs on disjoint thread intervals, rightmost first"});

    c.push_back({"r3241", 2, 2,
                 {term({S(0, 0), RiT12(), S(1, 1), RT12()})},
                 {term({R12(), S(1, 1), Ri12(), S(0, 0)})},
                 {{1, true}},
                 "closed arcs on nested thread intervals, outer first"});

    c.push_back({"r3142", 2, 2,
                 {term({S(0, 0), RiT12(), S(1, 1), Ri12()})},
                 {term({R12(), S(1, 1), Ri12(), S(0, 0)})},
                 {},
                 "closed arcs on interleaved thread intervals, "
                 "rightmost-start first"});

    c.push_back({"H", 2, 1,
                 {term({RT12(), S(0, 0), RiT12(), S(1, 0)})},
                 {term({S(1, 0), Ri12(), S(0, 0), R12()})},
                 {{0, true}},
                 "closed arc against itself"});

    c.push_back({"H1", 2, 1,
                 {term({S(0, 0), RiT12(), S(1, 0), RT12()})},
                 {term({R12(), S(1, 0), Ri12(), S(0, 0)})},
                 {{1, true}},
                 "closed arc against itself, partner form"});

    c.push_back({"r21-3x", 2, 2,
                 {term({S(0, 0), S(1, 1)})},
                 {term({S(1, 1), Ri12(), S(0, 0), R12()})},
                 {{0, true}},
                 "closed arc and an open arc leaving its cusp"});

    // Composite identity for products along a chain of closed arcs: the
    // product of two neighbours exchanges with the next one through the
    // Hecke skein form, picking up a permutation term.
    const LaurentQ skein =
        LaurentQ::qPowerHalf(3, Rat(-1)) + LaurentQ::qPowerHalf(-1, Rat(1));
    c.push_back(
        {"ihx", 2, 3,
         {term({S(0, 0), S(0, 1), RiT12(), S(1, 1), S(1, 2)})},
         {term(LaurentQ::qPowerHalf(2),
               {R12(), S(1, 1), S(1, 2), Ri12(), S(0, 0), S(0, 1), R12()}),
          term(skein,
               {R12(), S(1, 1), Ri12(), S(0, 0), S(0, 1), S(0, 2),
                Factor::perm()})},
         {},
         "product of consecutive closed arcs against the next arc"});

    return c;
  }();
  return catalog;
}

const RelationTemplate& templateById(const std::string& id) {
  for (const auto& t : relationCatalog())
    if (t.id == id) return t;
  fail("unknown relation template: " + id);
}

namespace {

const char* formName(RForm f) {
  switch (f) {
    case RForm::R: return "R";
    case RForm::RT: return "RT";
    case RForm::Rinv: return "Rinv";
    case RForm::RinvT: return "RinvT";
  }
  return "?";
}

nlohmann::ordered_json factorToJson(const Factor& f) {
  nlohmann::ordered_json j;
  switch (f.kind) {
    case Factor::Kind::Slot:
      j["kind"] = "slot";
      j["slot"] = f.slot;
      j["mat"] = f.matIndex;
      if (f.power != 1) j["power"] = f.power;
      break;
    case Factor::Kind::RFactor:
      j["kind"] = formName(f.form);
      j["legs"] = {f.legA, f.legB};
      break;
    case Factor::Kind::Perm:
      j["kind"] = "P";
      j["legs"] = {f.legA, f.legB};
      break;
  }
  return j;
}

nlohmann::ordered_json sumToJson(const TensorSum& sum) {
  nlohmann::ordered_json terms = nlohmann::ordered_json::array();
  for (const auto& t : sum) {
    nlohmann::ordered_json jt;
    jt["coeff"] = t.coeff.describe();
    nlohmann::ordered_json word = nlohmann::ordered_json::array();
    for (const auto& f : t.word) word.push_back(factorToJson(f));
    jt["word"] = std::move(word);
    terms.push_back(std::move(jt));
  }
  return terms;
}

}  // namespace

nlohmann::ordered_json catalogToJson() {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& t : relationCatalog()) {
    nlohmann::ordered_json jt;
    jt["id"] = t.id;
    jt["slots"] = t.slots;
    jt["arity"] = t.arity;
    jt["note"] = t.note;
    jt["lhs"] = sumToJson(t.lhs);
    jt["rhs"] = sumToJson(t.rhs);
    nlohmann::ordered_json powers = nlohmann::ordered_json::array();
    for (const auto& p : t.powers) {
      nlohmann::ordered_json jp;
      jp["slot"] = p.slot;
      jp["negativeAllowed"] = p.negativeAllowed;
      powers.push_back(std::move(jp));
    }
    jt["powers"] = std::move(powers);
    out.push_back(std::move(jt));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Endpoint classification

namespace {

bool sameEndpoints(const EndpointConfig& a, const EndpointConfig& b) {
  return a.closed == b.closed && a.source.cusp == b.source.cusp &&
         a.source.thread == b.source.thread &&
         a.target.cusp == b.target.cusp && a.target.thread == b.target.thread;
}

}  // namespace

std::string classifyPair(const EndpointConfig& a, const EndpointConfig& b) {
  if (a.closed && a.source.cusp != a.target.cusp)
    fail("closed arc must start and end on one cusp");
  if (b.closed && b.source.cusp != b.target.cusp)
    fail("closed arc must start and end on one cusp");

  if (sameEndpoints(a, b)) return a.closed ? "H" : "basic2";

  if (a.closed && b.closed) {
    if (a.source.cusp != b.source.cusp) return "unclassified";
    const int aLo = std::min(a.source.thread, a.target.thread);
    const int aHi = std::max(a.source.thread, a.target.thread);
    const int bLo = std::min(b.source.thread, b.target.thread);
    const int bHi = std::max(b.source.thread, b.target.thread);
    if (aLo == bLo || aHi == bHi || aLo == bHi || aHi == bLo)
      return "unclassified";  // shared thread: not a recognized configuration
    if (aHi < bLo || bHi < aLo) return "r2143";
    if ((aLo < bLo && bHi < aHi) || (bLo < aLo && aHi < bHi)) return "r3241";
    return "r3142";
  }

  if (a.closed != b.closed) {
    // A loop pairs with an open arc only when the arc leaves the loop's base
    // cusp strictly to the loop's left (larger thread index); an arc on the
    // other side crosses the loop and satisfies no exchange rule of this
    // family.
    const EndpointConfig& closed = a.closed ? a : b;
    const EndpointConfig& open = a.closed ? b : a;
    const int cHi = std::max(closed.source.thread, closed.target.thread);
    int openThread = 0;
    if (open.source.cusp == closed.source.cusp)
      openThread = open.source.thread;
    else if (open.target.cusp == closed.source.cusp)
      openThread = open.target.thread;
    else
      return "unclassified";
    return openThread > cHi ? "r21-3x" : "unclassified";
  }

  // Two distinct open arcs.
  const bool shareSource = a.source.cusp == b.source.cusp;
  const bool shareTarget = a.target.cusp == b.target.cusp;
  if (shareSource && shareTarget) {
    const int i = a.source.thread, k = b.source.thread;
    const int j = a.target.thread, l = b.target.thread;
    if (i == k || j == l) return "unclassified";
    if (i < k) return j < l ? "relcomp1" : "relcomp3";
    return j < l ? "relcomp2" : "relcomp4";
  }
  if (shareSource || shareTarget) {
    // One shared cusp; clockwise thread positions grow to the left, so the
    // arc on the larger thread is left of the other.
    const int ta = shareSource ? a.source.thread : a.target.thread;
    const int tb = shareSource ? b.source.thread : b.target.thread;
    if (ta == tb) return "unclassified";
    return ta > tb ? "basic1" : "basic1dual";
  }
  return "unclassified";
}

// ---------------------------------------------------------------------------
// Exact verification

VerifyContext VerifyContext::standard(int k, AlgebraPtr alg, bool invertQ) {
  VerifyContext ctx;
  ctx.k = k;
  ctx.R = kulishSklyanin(k);
  ctx.alg = std::move(alg);
  ctx.invertQ = invertQ;
  return ctx;
}

Mat<QElement> embedSlot(const Mat<QElement>& m, int slot, int slots,
                        const AlgebraPtr& alg) {
  const int k = static_cast<int>(m.rows());
  std::size_t dim = 1;
  for (int s = 0; s < slots; ++s) dim *= static_cast<std::size_t>(k);
  Mat<QElement> out(dim, dim);
  const QElement one = QElement::one(alg);
  std::vector<int> ri(slots), ci(slots);
  for (std::size_t row = 0; row < dim; ++row) {
    std::size_t tmp = row;
    for (int s = slots - 1; s >= 0; --s) {
      ri[s] = static_cast<int>(tmp % k);
      tmp /= k;
    }
    for (std::size_t col = 0; col < dim; ++col) {
      tmp = col;
      for (int s = slots - 1; s >= 0; --s) {
        ci[s] = static_cast<int>(tmp % k);
        tmp /= k;
      }
      bool spectatorOk = true;
      for (int s = 0; s < slots && spectatorOk; ++s)
        if (s != slot && ri[s] != ci[s]) spectatorOk = false;
      if (!spectatorOk) continue;
      const QElement& v = m(static_cast<std::size_t>(ri[slot]),
                            static_cast<std::size_t>(ci[slot]));
      if (v.isZero()) continue;
      out(row, col) = v;
    }
  }
  (void)one;
  return out;
}

namespace {

Mat<LaurentQ> rFormMatrix(const Mat<LaurentQ>& R, RForm form) {
  switch (form) {
    case RForm::R: return R;
    case RForm::RT: return R.transpose();
    case RForm::Rinv: return qInverted(R);
    case RForm::RinvT: return qInverted(R).transpose();
  }
  fail("unknown R form");
}

Mat<QElement> embedScalarMatrix(const Mat<LaurentQ>& m, const Factor& f,
                                const VerifyContext& ctx, int slots) {
  const Mat<LaurentQ> emb = embedTwoSlots(m, ctx.k, f.legA, f.legB, slots,
                                          LaurentQ::constant(Rat(1)));
  return emb.map([&](const LaurentQ& p) {
    return toQuantumScalar(ctx.invertQ ? p.qInverted() : p, ctx.alg);
  });
}

}  // namespace

Mat<QElement> embedRFactor(const Factor& f, const VerifyContext& ctx,
                           int slots) {
  switch (f.kind) {
    case Factor::Kind::RFactor:
      return embedScalarMatrix(rFormMatrix(ctx.R, f.form), f, ctx, slots);
    case Factor::Kind::Perm:
      return embedScalarMatrix(permutation(ctx.k), f, ctx, slots);
    case Factor::Kind::Slot:
      fail("slot factor has no scalar matrix");
  }
  fail("unknown factor kind");
}

namespace {

Mat<QElement> slotPower(const InstanceMat& inst, int slot, int power,
                        int slots, const VerifyContext& ctx) {
  const std::size_t k = static_cast<std::size_t>(ctx.k);
  if (inst.m.rows() != k || inst.m.cols() != k)
    fail("instance matrix size does not match tensor rank");
  Mat<QElement> acc = Mat<QElement>::identity(k, QElement::one(ctx.alg));
  if (power >= 0) {
    for (int i = 0; i < power; ++i) acc = acc * inst.m;
  } else {
    if (!inst.inv) fail("negative power requested but no inverse supplied");
    for (int i = 0; i < -power; ++i) acc = acc * (*inst.inv);
  }
  return embedSlot(acc, slot, slots, ctx.alg);
}

}  // namespace

Mat<QElement> expandSide(const TensorSum& side,
                         const std::vector<InstanceMat>& mats,
                         const VerifyContext& ctx, int slots,
                         const std::map<int, int>& powerOf) {
  std::size_t dim = 1;
  for (int s = 0; s < slots; ++s) dim *= static_cast<std::size_t>(ctx.k);
  Mat<QElement> total(dim, dim);
  for (const auto& t : side) {
    Mat<QElement> acc =
        Mat<QElement>::identity(dim, QElement::one(ctx.alg));
    for (const auto& f : t.word) {
      if (f.kind == Factor::Kind::Slot) {
        if (f.matIndex < 0 ||
            static_cast<std::size_t>(f.matIndex) >= mats.size())
          fail("missing instance matrix for slot factor");
        int power = f.power;
        if (auto it = powerOf.find(f.slot); it != powerOf.end())
          power = it->second;
        acc = acc * slotPower(mats[static_cast<std::size_t>(f.matIndex)],
                              f.slot, power, slots, ctx);
      } else {
        acc = acc * embedRFactor(f, ctx, slots);
      }
    }
    const QElement c =
        toQuantumScalar(ctx.invertQ ? t.coeff.qInverted() : t.coeff, ctx.alg);
    total = total + acc.scaled(c);
  }
  return total;
}

namespace {

std::string clip(std::string s) {
  constexpr std::size_t kMax = 200;
  if (s.size() > kMax) s = s.substr(0, kMax) + "...";
  return s;
}

RelationOutcome compareSides(const Mat<QElement>& lhs,
                             const Mat<QElement>& rhs,
                             const std::string& label) {
  RelationOutcome out;
  for (std::size_t i = 0; i < lhs.rows(); ++i) {
    for (std::size_t j = 0; j < lhs.cols(); ++j) {
      if (lhs(i, j) == rhs(i, j)) continue;
      out.pass = false;
      out.row = i;
      out.col = j;
      std::ostringstream os;
      os << label << " entry (" << i << "," << j
         << ") differs: lhs = " << clip(describe(lhs(i, j)))
         << " ; rhs = " << clip(describe(rhs(i, j)));
      out.witness = os.str();
      return out;
    }
  }
  out.pass = true;
  return out;
}

}  // namespace

RelationOutcome verifyRelation(const RelationTemplate& t,
                               const std::vector<InstanceMat>& mats,
                               const VerifyContext& ctx) {
  const Mat<QElement> lhs = expandSide(t.lhs, mats, ctx, t.slots);
  const Mat<QElement> rhs = expandSide(t.rhs, mats, ctx, t.slots);
  return compareSides(lhs, rhs, t.id);
}

RelationOutcome verifyPowered(const RelationTemplate& t, int p, int m,
                              const std::vector<InstanceMat>& mats,
                              const VerifyContext& ctx) {
  if (t.powers.empty()) fail("template has no powered variant: " + t.id);
  std::map<int, int> powerOf;
  powerOf[t.powers[0].slot] = p;
  if (t.powers.size() > 1) powerOf[t.powers[1].slot] = m;
  const Mat<QElement> lhs = expandSide(t.lhs, mats, ctx, t.slots, powerOf);
  const Mat<QElement> rhs = expandSide(t.rhs, mats, ctx, t.slots, powerOf);
  std::ostringstream label;
  label << t.id << " powered p=" << p;
  if (t.powers.size() > 1) label << " m=" << m;
  return compareSides(lhs, rhs, label.str());
}

// ---------------------------------------------------------------------------
// Word instances

WordMatrices wordMatrices(const std::vector<Token>& tokens,
                          const AlgebraPtr& alg, Mode mode) {
  WordMatrices out;
  out.m = Mat<QElement>::identity(2, QElement::one(alg));
  out.inv = Mat<QElement>::identity(2, QElement::one(alg));
  for (const Token& t : tokens) out.m = out.m * tokenMatrix(t, alg, mode);
  for (auto it = tokens.rbegin(); it != tokens.rend(); ++it)
    out.inv = out.inv * tokenInverse(*it, alg, mode);
  return out;
}

WordMatrices wordMatrices(const std::vector<std::string>& tokenTexts,
                          const AlgebraPtr& alg, Mode mode) {
  std::vector<Token> tokens;
  tokens.reserve(tokenTexts.size());
  for (const auto& s : tokenTexts) tokens.push_back(parseToken(s));
  return wordMatrices(tokens, alg, mode);
}

InstanceMat instanceFromWord(const std::vector<std::string>& tokenTexts,
                             const AlgebraPtr& alg) {
  WordMatrices wm = wordMatrices(tokenTexts, alg, Mode::Quantum);
  InstanceMat inst;
  inst.m = std::move(wm.m);
  inst.inv = std::move(wm.inv);
  return inst;
}

// ---------------------------------------------------------------------------
// Three-leg consistency chains

CheckOutcome checkAllEqual(const std::vector<TensorSum>& exprs,
                           const std::vector<InstanceMat>& mats,
                           const VerifyContext& ctx, int slots) {
  if (exprs.empty()) return {};
  Mat<QElement> prev = expandSide(exprs[0], mats, ctx, slots);
  for (std::size_t i = 1; i < exprs.size(); ++i) {
    Mat<QElement> cur = expandSide(exprs[i], mats, ctx, slots);
    if (!(cur == prev)) {
      std::ostringstream os;
      os << "expression " << i << " differs from expression " << i - 1;
      return CheckOutcome::fail(os.str());
    }
    prev = std::move(cur);
  }
  return {};
}

namespace {

TensorSum line(std::vector<Factor> word) { return {term(std::move(word))}; }

}  // namespace

std::vector<TensorSum> tripleChainCircular() {
  // Instance 0: a closed-arc matrix M placed on legs 0 and 1; instance 1: a
  // second closed-arc matrix N on leg 2, on threads left of M's.  The chain
  // starts from M's self-exchange, threads N through every position by the
  // pairwise relations, and returns to the start expression.
  const int A = 0, B = 1, C = 2;
  std::vector<TensorSum> e;
  e.push_back(line({S(A, 0), RiT12(A, B), S(B, 0), R12(A, C), R12(B, C),
                    S(C, 1)}));
  e.push_back(line({RiT12(A, B), S(B, 0), Ri12(A, B), S(A, 0), R12(A, B),
                    R12(A, C), R12(B, C), S(C, 1)}));
  e.push_back(line({RiT12(A, B), S(B, 0), Ri12(A, B), S(A, 0), R12(B, C),
                    R12(A, C), R12(A, B), S(C, 1)}));
  e.push_back(line({RiT12(A, B), S(B, 0), Ri12(A, B), R12(B, C), S(A, 0),
                    R12(A, C), S(C, 1), R12(A, B)}));
  e.push_back(line({RiT12(A, B), S(B, 0), Ri12(A, B), R12(B, C), R12(A, C),
                    S(C, 1), Ri12(A, C), S(A, 0), R12(A, C), R12(A, B)}));
  e.push_back(line({RiT12(A, B), S(B, 0), R12(A, C), R12(B, C), Ri12(A, B),
                    S(C, 1), Ri12(A, C), S(A, 0), R12(A, C), R12(A, B)}));
  e.push_back(line({RiT12(A, B), R12(A, C), S(B, 0), R12(B, C), S(C, 1),
                    Ri12(A, B), Ri12(A, C), S(A, 0), R12(A, C), R12(A, B)}));
  e.push_back(line({RiT12(A, B), R12(A, C), R12(B, C), S(C, 1), Ri12(B, C),
                    S(B, 0), R12(B, C), Ri12(A, B), Ri12(A, C), S(A, 0),
                    R12(A, C), R12(A, B)}));
  e.push_back(line({R12(B, C), R12(A, C), RiT12(A, B), S(C, 1), Ri12(B, C),
                    Ri12(A, C), S(B, 0), Ri12(A, B), S(A, 0), R12(B, C),
                    R12(A, C), R12(A, B)}));
  e.push_back(line({R12(B, C), R12(A, C), RiT12(A, B), S(C, 1), Ri12(B, C),
                    Ri12(A, C), RT12(A, B), S(A, 0), RiT12(A, B), S(B, 0),
                    R12(A, C), R12(B, C)}));
  e.push_back(line({R12(B, C), R12(A, C), S(C, 1), Ri12(A, C), S(A, 0),
                    Ri12(B, C), RiT12(A, B), S(B, 0), R12(A, C), R12(B, C)}));
  e.push_back(line({R12(B, C), S(A, 0), R12(A, C), S(C, 1), Ri12(A, C),
                    Ri12(B, C), RiT12(A, B), S(B, 0), R12(A, C), R12(B, C)}));
  e.push_back(line({R12(B, C), S(A, 0), R12(A, C), RiT12(A, B), S(C, 1),
                    Ri12(B, C), S(B, 0), R12(B, C)}));
  e.push_back(line({R12(B, C), S(A, 0), R12(A, C), RiT12(A, B), Ri12(B, C),
                    S(B, 0), R12(B, C), S(C, 1)}));
  e.push_back(line({S(A, 0), RiT12(A, B), S(B, 0), R12(A, C), R12(B, C),
                    S(C, 1)}));
  return e;
}

std::vector<TensorSum> tripleChainLeft() {
  // One closed-arc matrix M on all three legs; left rewriting branch of the
  // common start expression M1 R12^{-T} M2 R13^{-T} R23^{-T} M3.
  const int A = 0, B = 1, C = 2;
  std::vector<TensorSum> e;
  e.push_back(line({S(A, 0), RiT12(A, B), S(B, 0), RiT12(A, C), RiT12(B, C),
                    S(C, 0)}));
  e.push_back(line({RiT12(A, B), S(B, 0), Ri12(A, B), S(A, 0), R12(A, B),
                    RiT12(A, C), RiT12(B, C), S(C, 0)}));
  e.push_back(line({RiT12(A, B), S(B, 0), Ri12(A, B), RiT12(B, C), S(A, 0),
                    RiT12(A, C), S(C, 0), R12(A, B)}));
  e.push_back(line({RiT12(A, B), S(B, 0), Ri12(A, B), RiT12(B, C),
                    RiT12(A, C), S(C, 0), Ri12(A, C), S(A, 0), R12(A, C),
                    R12(A, B)}));
  // Transcribed as printed; the second R^{-T} on legs (A,C) is expected to
  // deviate (see tripleChainLeftCorrected).
  e.push_back(line({RiT12(A, B), RiT12(A, C), S(B, 0), RiT12(B, C), S(C, 0),
                    Ri12(A, B), RiT12(A, C), S(A, 0), R12(A, C), R12(A, B)}));
  e.push_back(line({RiT12(A, B), RiT12(A, C), RiT12(B, C), S(C, 0),
                    Ri12(B, C), S(B, 0), R12(B, C), Ri12(A, B), Ri12(A, C),
                    S(A, 0), R12(A, C), R12(A, B)}));
  e.push_back(line({RiT12(A, B), RiT12(A, C), RiT12(B, C), S(C, 0),
                    Ri12(B, C), S(B, 0), Ri12(A, C), Ri12(A, B), S(A, 0),
                    R12(B, C), R12(A, C), R12(A, B)}));
  return e;
}

std::vector<TensorSum> tripleChainLeftCorrected() {
  std::vector<TensorSum> e = tripleChainLeft();
  const int A = 0, B = 1, C = 2;
  e[4] = line({RiT12(A, B), RiT12(A, C), S(B, 0), RiT12(B, C), S(C, 0),
               Ri12(A, B), Ri12(A, C), S(A, 0), R12(A, C), R12(A, B)});
  return e;
}

std::vector<TensorSum> tripleChainRight() {
  // Right rewriting branch; starts from the start expression with the
  // (A,C)-factor already commuted past the leg-B matrix and ends at the
  // same normal form as the left branch.
  const int A = 0, B = 1, C = 2;
  std::vector<TensorSum> e;
  e.push_back(line({S(A, 0), RiT12(A, B), RiT12(A, C), S(B, 0), RiT12(B, C),
                    S(C, 0)}));
  e.push_back(line({S(A, 0), RiT12(A, B), RiT12(A, C), RiT12(B, C), S(C, 0),
                    Ri12(B, C), S(B, 0), R12(B, C)}));
  e.push_back(line({RiT12(B, C), S(A, 0), RiT12(A, C), S(C, 0), RiT12(A, B),
                    Ri12(B, C), S(B, 0), R12(B, C)}));
  e.push_back(line({RiT12(B, C), RiT12(A, C), S(C, 0), Ri12(A, C), S(A, 0),
                    R12(A, C), RiT12(A, B), Ri12(B, C), S(B, 0), R12(B, C)}));
  e.push_back(line({RiT12(B, C), RiT12(A, C), S(C, 0), Ri12(A, C),
                    Ri12(B, C), S(A, 0), RiT12(A, B), S(B, 0), R12(A, C),
                    R12(B, C)}));
  e.push_back(line({RiT12(B, C), RiT12(A, C), S(C, 0), Ri12(A, C),
                    Ri12(B, C), RiT12(A, B), S(B, 0), Ri12(A, B), S(A, 0),
                    R12(A, B), R12(A, C), R12(B, C)}));
  e.push_back(line({RiT12(B, C), RiT12(A, C), RiT12(A, B), S(C, 0),
                    Ri12(B, C), S(B, 0), Ri12(A, C), Ri12(A, B), S(A, 0),
                    R12(A, B), R12(A, C), R12(B, C)}));
  e.push_back(line({RiT12(A, B), RiT12(A, C), RiT12(B, C), S(C, 0),
                    Ri12(B, C), S(B, 0), Ri12(A, C), Ri12(A, B), S(A, 0),
                    R12(B, C), R12(A, C), R12(A, B)}));
  return e;
}

// ---------------------------------------------------------------------------
// First-order expansion

void canonicalize(std::vector<QuadTerm>& terms) {
  for (auto& t : terms)
    if (t.b < t.a) std::swap(t.a, t.b);
  std::sort(terms.begin(), terms.end(), [](const QuadTerm& x, const QuadTerm& y) {
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });
  std::vector<QuadTerm> merged;
  for (const auto& t : terms) {
    if (!merged.empty() && merged.back().a == t.a && merged.back().b == t.b)
      merged.back().coeff += t.coeff;
    else
      merged.push_back(t);
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const QuadTerm& t) { return t.coeff == 0; }),
               merged.end());
  terms = std::move(merged);
}

void canonicalize(PairBracket& table) {
  for (auto it = table.begin(); it != table.end();) {
    canonicalize(it->second);
    if (it->second.empty())
      it = table.erase(it);
    else
      ++it;
  }
}

namespace {

/// Commutative polynomial in abstract matrix entries with rational
/// coefficients; monomials are sorted entry lists.  Only ring operations are
/// needed, so it plugs into Mat<>.
struct Sym {
  std::map<std::vector<EntryRef>, Rat> t;

  static Sym constant(const Rat& c) {
    Sym s;
    if (c != 0) s.t[{}] = c;
    return s;
  }
  static Sym entry(const EntryRef& e) {
    Sym s;
    s.t[{e}] = Rat(1);
    return s;
  }

  bool operator==(const Sym& o) const { return t == o.t; }

  Sym operator+(const Sym& o) const {
    Sym r = *this;
    for (const auto& [m, c] : o.t) {
      auto [it, inserted] = r.t.try_emplace(m, c);
      if (!inserted) {
        it->second += c;
        if (it->second == 0) r.t.erase(it);
      }
    }
    return r;
  }

  Sym operator-() const {
    Sym r = *this;
    for (auto& [m, c] : r.t) c = -c;
    return r;
  }

  Sym operator-(const Sym& o) const { return *this + (-o); }

  Sym& operator+=(const Sym& o) { return *this = *this + o; }

  Sym operator*(const Sym& o) const {
    Sym r;
    for (const auto& [ma, ca] : t) {
      for (const auto& [mb, cb] : o.t) {
        std::vector<EntryRef> m = ma;
        m.insert(m.end(), mb.begin(), mb.end());
        std::sort(m.begin(), m.end());
        const Rat c = ca * cb;
        auto [it, inserted] = r.t.try_emplace(m, c);
        if (!inserted) {
          it->second += c;
          if (it->second == 0) r.t.erase(it);
        }
      }
    }
    return r;
  }
};

/// First-order part of one R-form: +r, +r^T, -r, -r^T.
Mat<Rat> firstOrderPart(RForm form, int k) {
  const Mat<Rat> r = semiclassicalR(k);
  switch (form) {
    case RForm::R: return r;
    case RForm::RT: return r.transpose();
    case RForm::Rinv: return -r;
    case RForm::RinvT: return -r.transpose();
  }
  fail("unknown R form");
}

Mat<Sym> toSym(const Mat<Rat>& m) {
  return m.map([](const Rat& c) { return Sym::constant(c); });
}

/// One side of a two-leg template split into the scalar segments around its
/// two slot factors.
struct SideShape {
  Mat<Rat> pre, mid, post;  // summed first-order parts of the segments
  Factor first, second;     // the two slot factors in word order
};

SideShape parseSide(const TensorSum& side, int k) {
  if (side.size() != 1) fail("first-order expansion needs a one-term side");
  const TensorTerm& t = side[0];
  if (!(t.coeff == LaurentQ::constant(Rat(1))))
    fail("first-order expansion needs unit coefficients");
  SideShape shape;
  const std::size_t dim = static_cast<std::size_t>(k) * k;
  shape.pre = Mat<Rat>(dim, dim);
  shape.mid = Mat<Rat>(dim, dim);
  shape.post = Mat<Rat>(dim, dim);
  int seen = 0;
  for (const auto& f : t.word) {
    if (f.kind == Factor::Kind::Perm)
      fail("first-order expansion does not support permutation factors");
    if (f.kind == Factor::Kind::Slot) {
      if (f.power != 1) fail("first-order expansion needs unit powers");
      if (seen == 0)
        shape.first = f;
      else if (seen == 1)
        shape.second = f;
      else
        fail("first-order expansion needs exactly two slot factors");
      ++seen;
      continue;
    }
    if (f.legA != 0 || f.legB != 1)
      fail("first-order expansion expects R factors on legs (0,1)");
    Mat<Rat>& seg = seen == 0 ? shape.pre : (seen == 1 ? shape.mid : shape.post);
    seg = seg + firstOrderPart(f.form, k);
  }
  if (seen != 2) fail("first-order expansion needs exactly two slot factors");
  if (shape.first.slot == shape.second.slot)
    fail("slot factors must sit on distinct legs");
  return shape;
}

/// Symbolic matrix of one instance on one leg of a two-leg tensor product:
/// entry ((r0 r1),(c0 c1)) is m_{r_leg, c_leg} when the other indices agree.
Mat<Sym> symSlot(int mat, int leg, int k) {
  const std::size_t dim = static_cast<std::size_t>(k) * k;
  Mat<Sym> out(dim, dim);
  for (int r0 = 0; r0 < k; ++r0)
    for (int r1 = 0; r1 < k; ++r1)
      for (int c0 = 0; c0 < k; ++c0)
        for (int c1 = 0; c1 < k; ++c1) {
          if (leg == 0 ? r1 != c1 : r0 != c0) continue;
          const int rr = leg == 0 ? r0 : r1;
          const int cc = leg == 0 ? c0 : c1;
          EntryRef e;
          e.mat = mat;
          e.row = rr;
          e.col = cc;
          out(static_cast<std::size_t>(r0 * k + r1),
              static_cast<std::size_t>(c0 * k + c1)) = Sym::entry(e);
        }
  return out;
}

}  // namespace

PairBracket semiclassicalExpand(const RelationTemplate& t, int k) {
  if (t.slots != 2) fail("first-order expansion needs a two-leg template");
  const SideShape L = parseSide(t.lhs, k);
  const SideShape Rh = parseSide(t.rhs, k);

  // Every catalog template writes the leg-0 instance first on the left side
  // and the leg-1 instance first on the right side; the commutator of the
  // two sides is then exactly (leg0 leg1 - leg1 leg0), whose first-order
  // part is the bracket {leg0_{ij}, leg1_{kl}}.
  if (L.first.slot != 0 || L.second.slot != 1)
    fail("expansion expects the leg-0 factor first on the left side");
  if (Rh.first.slot != 1 || Rh.second.slot != 0)
    fail("expansion expects the leg-1 factor first on the right side");
  if (Rh.second.matIndex != L.first.matIndex ||
      Rh.first.matIndex != L.second.matIndex)
    fail("sides place different instances on the same leg");

  const Mat<Sym> X = symSlot(L.first.matIndex, 0, k);
  const Mat<Sym> Y = symSlot(L.second.matIndex, 1, k);
  const Mat<Sym> T = X * Y;  // classical: equals Y * X

  // With LHS = A X B Y C and RHS = D Y E X F (first-order segment sums
  // a..f), collecting the order-h part of LHS = RHS and moving the
  // commutator to one side yields
  //   {X_{ij}, Y_{kl}} = [d T + Y e X + T f - a T - X b Y - T c]
  // with all products commutative polynomials in abstract entries.
  const Mat<Sym> sum = toSym(Rh.pre) * T + Y * toSym(Rh.mid) * X +
                       T * toSym(Rh.post) - toSym(L.pre) * T -
                       X * toSym(L.mid) * Y - T * toSym(L.post);

  PairBracket table;
  for (int i = 0; i < k; ++i)
    for (int kk = 0; kk < k; ++kk)
      for (int j = 0; j < k; ++j)
        for (int l = 0; l < k; ++l) {
          const Sym& s = sum(static_cast<std::size_t>(i * k + kk),
                             static_cast<std::size_t>(j * k + l));
          if (s.t.empty()) continue;
          std::vector<QuadTerm> terms;
          for (const auto& [mono, c] : s.t) {
            if (mono.size() != 2)
              fail("first-order expansion produced a non-quadratic term");
            QuadTerm q;
            q.coeff = c;
            q.a = mono[0];
            q.b = mono[1];
            terms.push_back(std::move(q));
          }
          canonicalize(terms);
          if (!terms.empty()) table[{i, j, kk, l}] = std::move(terms);
        }
  return table;
}

CLaurent evalQuadTerms(const std::vector<QuadTerm>& terms,
                       const std::vector<Mat<CLaurent>>& mats,
                       const AlgebraPtr& alg) {
  CLaurent acc = CLaurent::zero(alg);
  for (const auto& t : terms) {
    const Mat<CLaurent>& ma = mats.at(static_cast<std::size_t>(t.a.mat));
    const Mat<CLaurent>& mb = mats.at(static_cast<std::size_t>(t.b.mat));
    acc += (ma(static_cast<std::size_t>(t.a.row),
               static_cast<std::size_t>(t.a.col)) *
            mb(static_cast<std::size_t>(t.b.row),
               static_cast<std::size_t>(t.b.col)))
               .scaledBy(t.coeff);
  }
  return acc;
}

CheckOutcome bracketTableMatchesInstances(const PairBracket& table,
                                          const Mat<QElement>& m0,
                                          const Mat<QElement>& m1,
                                          const AlgebraPtr& alg) {
  const int k = static_cast<int>(m0.rows());
  std::vector<Mat<CLaurent>> classical;
  classical.push_back(
      m0.map([](const QElement& e) { return e.classicalSpecialize(); }));
  classical.push_back(
      m1.map([](const QElement& e) { return e.classicalSpecialize(); }));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      for (int kk = 0; kk < k; ++kk)
        for (int l = 0; l < k; ++l) {
          const CLaurent lhs =
              firstOrderBracket(m0(static_cast<std::size_t>(i),
                                   static_cast<std::size_t>(j)),
                                m1(static_cast<std::size_t>(kk),
                                   static_cast<std::size_t>(l)));
          CLaurent rhs = CLaurent::zero(alg);
          if (auto it = table.find({i, j, kk, l}); it != table.end())
            rhs = evalQuadTerms(it->second, classical, alg);
          if (lhs == rhs) continue;
          std::ostringstream os;
          os << "bracket {m0(" << i << "," << j << "), m1(" << kk << "," << l
             << ")} disagrees: torus = " << clip(describe(lhs))
             << " ; table = " << clip(describe(rhs));
          return CheckOutcome::fail(os.str());
        }
  return {};
}

std::string describe(const EntryRef& e) {
  std::ostringstream os;
  os << "m" << e.mat << "(" << e.row << "," << e.col << ")";
  return os.str();
}

std::string describe(const QuadTerm& t) {
  std::ostringstream os;
  os << t.coeff << "*" << describe(t.a) << "*" << describe(t.b);
  return os.str();
}

std::string describe(const std::vector<QuadTerm>& terms) {
  if (terms.empty()) return "0";
  std::ostringstream os;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) os << " + ";
    os << describe(terms[i]);
  }
  return os.str();
}

}  // namespace monodromy
