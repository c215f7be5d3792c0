#pragma once
// Catalog of the exchange relations satisfied by arc matrices over the
// quantum torus, stored as formal tensor words (data, not code) so that the
// exact verifier, the first-order expander, and the report layer all consume
// the same source of truth.
//
// A relation template has two sides.  Each side is a sum of terms; a term is
// a Laurent scalar in q^{1/2} times an ordered product of factors.  A factor
// is one of: an instance matrix placed on one tensor leg (optionally raised
// to an integer power), an R-matrix acting on an ordered pair of legs in one
// of the four forms R, R^T, R^{-1}, R^{-T}, or the leg-swap permutation P.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "monodromy/check.hpp"
#include "monodromy/matrix.hpp"
#include "monodromy/qtorus.hpp"
#include "monodromy/rmatrix.hpp"
#include "monodromy/surface.hpp"

namespace monodromy {

/// The four ways an R-matrix enters a relation word.  Transposition swaps
/// the two legs of the pair; inversion is entrywise q -> 1/q for the
/// Hecke-normalized R used throughout (R(q) R(1/q) = 1).
enum class RForm { R, RT, Rinv, RinvT };

struct Factor {
  enum class Kind { Slot, RFactor, Perm };
  Kind kind = Kind::Slot;
  // Kind::Slot: instance matrix `matIndex` on tensor leg `slot`, raised to
  // `power` (negative powers need the instance to carry an inverse).
  int slot = 0;
  int matIndex = 0;
  int power = 1;
  // Kind::RFactor / Kind::Perm: ordered legs the factor acts on.
  RForm form = RForm::R;
  int legA = 0;
  int legB = 1;

  static Factor slotMat(int slot, int matIndex, int power = 1);
  static Factor r(RForm form, int legA = 0, int legB = 1);
  static Factor perm(int legA = 0, int legB = 1);

  friend bool operator==(const Factor&, const Factor&) = default;
};

struct TensorTerm {
  LaurentQ coeff = LaurentQ::constant(Rat(1));
  std::vector<Factor> word;  // leftmost factor first

  friend bool operator==(const TensorTerm&, const TensorTerm&) = default;
};

using TensorSum = std::vector<TensorTerm>;

/// A tensor leg whose instance matrix the powered variant of a template may
/// raise to an arbitrary integer exponent (one leg at a time unless the
/// template lists several).
struct PowerSpec {
  int slot = 0;
  bool negativeAllowed = true;
};

struct RelationTemplate {
  std::string id;
  int slots = 2;  // tensor legs
  int arity = 2;  // distinct instance matrices consumed
  TensorSum lhs, rhs;
  std::vector<PowerSpec> powers;  // empty: no powered variant
  std::string note;  // one-line description of the arc configuration
};

/// All exchange-relation templates, keyed by id: basic1, basic1dual, basic2,
/// relcomp1..relcomp4, r2143, r3241, r3142, H, H1, r21-3x, ihx.
const std::vector<RelationTemplate>& relationCatalog();
const RelationTemplate& templateById(const std::string& id);

/// JSON image of the catalog (stable field order), for the CLI and for
/// external tooling.
nlohmann::ordered_json catalogToJson();

// ---------------------------------------------------------------------------
// Endpoint classification

/// Arc endpoint data used to decide which relation a pair of arcs satisfies.
/// Threads are clockwise positions at the cusp, distinct per cusp, larger
/// number = further clockwise (a closed arc leaves at the larger thread and
/// returns at the smaller one).
struct EndpointSpec {
  std::string cusp;
  int thread = 1;
};

struct EndpointConfig {
  EndpointSpec source, target;
  bool closed = false;  // both ends on one cusp
};

/// Maps an ordered pair of arc endpoint configurations to the id of the
/// relation template the pair satisfies, or "unclassified".  Identical
/// closed arcs satisfy H; identical open arcs satisfy basic2; two closed
/// arcs at one cusp are dispatched on how their thread intervals sit
/// (disjoint -> r2143, nested -> r3241, interleaved -> r3142); open arcs
/// sharing both cusps dispatch to relcomp1..4 on the source/target thread
/// orders; a closed arc and an open arc leaving the same cusp -> r21-3x.
std::string classifyPair(const EndpointConfig& a, const EndpointConfig& b);

// ---------------------------------------------------------------------------
// Exact verification

/// Concrete matrix instance for one tensor leg: the arc matrix and, when
/// powered variants need negative exponents, its exact inverse over the same
/// algebra.
struct InstanceMat {
  Mat<QElement> m;
  std::optional<Mat<QElement>> inv;
};

/// Verification context.  Arc matrices built from token products satisfy the
/// catalog relations with every R-matrix scalar evaluated at the inverse
/// quantum parameter, so embedding defaults to inverting q (a scalar q^{s/2}
/// becomes the torus power of -2s quarter units).  Setting invertQ = false
/// exhibits the failure of the direct embedding.
struct VerifyContext {
  int k = 2;
  Mat<LaurentQ> R;
  AlgebraPtr alg;
  bool invertQ = true;

  static VerifyContext standard(int k, AlgebraPtr alg, bool invertQ = true);
};

/// k x k matrix embedded on one leg of a rank-`slots` tensor product.
Mat<QElement> embedSlot(const Mat<QElement>& m, int slot, int slots,
                        const AlgebraPtr& alg);

/// The R-form (or permutation) of the context placed on legs (a, b) of the
/// tensor product, with scalars embedded into the torus algebra.
Mat<QElement> embedRFactor(const Factor& f, const VerifyContext& ctx,
                           int slots);

/// Evaluates one side of a template on concrete instances.  `powerOf`
/// overrides the exponent of Slot factors keyed by tensor leg.
Mat<QElement> expandSide(const TensorSum& side,
                         const std::vector<InstanceMat>& mats,
                         const VerifyContext& ctx, int slots,
                         const std::map<int, int>& powerOf = {});

struct RelationOutcome {
  bool pass = false;
  std::size_t row = 0, col = 0;  // first failing entry, row-major
  std::string witness;

  explicit operator bool() const { return pass; }
};

RelationOutcome verifyRelation(const RelationTemplate& t,
                               const std::vector<InstanceMat>& mats,
                               const VerifyContext& ctx);

/// Powered variant: raises the template's listed legs to the exponents
/// (first PowerSpec gets p, second gets m; unused exponents ignored).
RelationOutcome verifyPowered(const RelationTemplate& t, int p, int m,
                              const std::vector<InstanceMat>& mats,
                              const VerifyContext& ctx);

// ---------------------------------------------------------------------------
// Word instances

/// Ordered product of token matrices of a word together with its exact
/// inverse (token inverses multiplied in reversed order).  The word is not
/// validated against a graph, so partial arms and formal composites can be
/// built alongside full arcs.
struct WordMatrices {
  Mat<QElement> m, inv;
};
WordMatrices wordMatrices(const std::vector<Token>& tokens,
                          const AlgebraPtr& alg, Mode mode);
WordMatrices wordMatrices(const std::vector<std::string>& tokenTexts,
                          const AlgebraPtr& alg, Mode mode);

/// Instance (matrix + inverse) of a fixture word, quantum mode.
InstanceMat instanceFromWord(const std::vector<std::string>& tokenTexts,
                             const AlgebraPtr& alg);

// ---------------------------------------------------------------------------
// Three-leg consistency chains

/// Step-by-step rewriting chains certifying that the two-leg exchange
/// relations compose consistently on three tensor legs.  Each chain is a
/// list of three-leg tensor expressions, every one equal to the previous;
/// checkAllEqual evaluates them on concrete instances and reports the first
/// index whose value differs from its predecessor.
CheckOutcome checkAllEqual(const std::vector<TensorSum>& exprs,
                           const std::vector<InstanceMat>& mats,
                           const VerifyContext& ctx, int slots);

/// Circular chain: instance 0 (a closed-arc matrix) on legs 1 and 2,
/// instance 1 on leg 3; starts and ends at the same expression.
std::vector<TensorSum> tripleChainCircular();

/// Two chains rewriting a common start expression (instance 0 on all three
/// legs) to a common normal form.  tripleChainLeftCorrected() differs from
/// tripleChainLeft() in a single factor of expression 4 (R^{-1} on legs
/// (0,2) instead of R^{-T}).  The uncorrected transcription breaks at that
/// expression on every instance tried; the corrected variant verifies, so
/// the pair pins down the one-factor defect rather than hiding it.
std::vector<TensorSum> tripleChainLeft();
std::vector<TensorSum> tripleChainLeftCorrected();
std::vector<TensorSum> tripleChainRight();

// ---------------------------------------------------------------------------
// First-order expansion

/// One machine-derived bracket term: coefficient times the product of two
/// abstract matrix entries (instance index, 0-based row/col).
struct EntryRef {
  int mat = 0, row = 0, col = 0;
  friend auto operator<=>(const EntryRef&, const EntryRef&) = default;
};

struct QuadTerm {
  Rat coeff;
  EntryRef a, b;  // a <= b after canonicalization
  friend bool operator==(const QuadTerm&, const QuadTerm&) = default;
};

/// Bracket table of an ordered instance pair: for each index quadruple
/// (i, j, k, l), the bracket {m0_{ij}, m1_{kl}} as a canonicalized sum of
/// quadratic monomials (sorted, merged, zero-free; 0-based indices).
using PairBracket = std::map<std::array<int, 4>, std::vector<QuadTerm>>;

/// Sorts factors, merges duplicates, and drops zero terms in place.
void canonicalize(std::vector<QuadTerm>& terms);
void canonicalize(PairBracket& table);

/// First-order expansion of a two-leg, single-term-per-side template at
/// tensor rank k.  Each R-form is written as 1 + h rho with rho = r, r^T,
/// -r, -r^T for R, R^T, R^{-1}, R^{-T}; collecting the order-h part of the
/// relation and treating instance entries as commuting yields the bracket
/// {m0_{ij}, m1_{kl}} the relation forces.  With the conventions above the
/// resulting table equals the first-order bracket of the realized torus
/// entries (the h of the expansion matching the torus's own deformation
/// parameter).  Templates with permutation factors, several terms, or
/// built-in powers are rejected.
PairBracket semiclassicalExpand(const RelationTemplate& t, int k);

/// Evaluates a bracket table entry on concrete matrices over the exact
/// first-order bracket of the torus: returns
///   sum_terms coeff * m[a.mat](a.row,a.col) * m[b.mat](b.row,b.col)
/// as a classical Laurent element (products taken classically).
CLaurent evalQuadTerms(const std::vector<QuadTerm>& terms,
                       const std::vector<Mat<CLaurent>>& mats,
                       const AlgebraPtr& alg);

/// Cross-checks a bracket table against the torus first-order bracket on
/// concrete quantum instances: for every entry pair, {a_{ij}, b_{kl}} from
/// the quantum commutator must equal the table's prediction evaluated on the
/// classical specializations.  Indices with no table entry must bracket to
/// zero.  Returns the first discrepancy.
CheckOutcome bracketTableMatchesInstances(const PairBracket& table,
                                          const Mat<QElement>& m0,
                                          const Mat<QElement>& m1,
                                          const AlgebraPtr& alg);

std::string describe(const EntryRef& e);
std::string describe(const QuadTerm& t);
std::string describe(const std::vector<QuadTerm>& terms);

}  // namespace monodromy
