#pragma once
// Fat-graph combinatorics on a bordered Riemann surface: ribbon graphs whose
// edges carry shear coordinates (inner edges Z), cusp decorations (cusp edges
// pi), and hole perimeters (loop edges omega).  From the counterclockwise
// cyclic order of edge-ends at each three-valent vertex we derive the integer
// skew form of the coordinate algebra, build classical and quantum arc
// matrices as ordered products of 2x2 edge/turn tokens, and realize the
// classical flip (mutation) of an inner edge together with the induced
// rational substitution on exponentiated coordinates.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "monodromy/matrix.hpp"
#include "monodromy/qtorus.hpp"

namespace monodromy {

// ---------------------------------------------------------------------------
// Graph structure

enum class VertexKind { Internal, Cusp, Anchor };
enum class EdgeKind { Inner, CuspEdge, Loop };

struct SurfaceVertex {
  std::string id;
  VertexKind kind = VertexKind::Internal;
};

/// One end of an edge: ends[0] / ends[1] name the incident vertices (equal
/// for a loop edge, whose two ends both sit at its anchor vertex).
struct SurfaceEdge {
  std::string id;
  std::string label;  // coordinate symbol carried by the edge
  EdgeKind kind = EdgeKind::Inner;
  std::size_t ends[2] = {0, 0};  // vertex indices
};

/// A specific edge-end: which edge, and which of its two ends.
struct EdgeEnd {
  std::size_t edge = 0;
  int end = 0;  // 0 or 1

  friend bool operator==(const EdgeEnd&, const EdgeEnd&) = default;
};

struct FlipResult;

/// Ribbon graph: vertices, labelled edges, and for every vertex the
/// counterclockwise cyclic order of its incident edge-ends.
class FatGraph {
 public:
  const std::vector<SurfaceVertex>& vertices() const { return vertices_; }
  const std::vector<SurfaceEdge>& edges() const { return edges_; }
  const std::vector<std::vector<EdgeEnd>>& cyclicOrders() const {
    return cyclic_;
  }

  std::size_t vertexIndex(const std::string& id) const;
  std::size_t edgeIndex(const std::string& idOrLabel) const;
  bool hasEdge(const std::string& idOrLabel) const;
  const SurfaceEdge& edge(const std::string& idOrLabel) const {
    return edges_[edgeIndex(idOrLabel)];
  }

  /// Vertex index holding the given end of the given edge.
  std::size_t endVertex(const EdgeEnd& e) const {
    return edges_[e.edge].ends[e.end];
  }

  /// Counterclockwise successor / predecessor of an edge-end around its
  /// vertex.
  EdgeEnd ccwNext(const EdgeEnd& e) const;
  EdgeEnd ccwPrev(const EdgeEnd& e) const;

  /// Cusp-vertex index attached to a cusp edge.
  std::size_t cuspVertexOf(std::size_t edgeIdx) const;

  /// Structural validation: valences by vertex kind, loop placement, cusp
  /// edge anatomy, cyclic orders are permutations of the incident ends.
  /// Throws std::invalid_argument describing the violation.
  void validate() const;

  friend FatGraph buildFatGraph(const nlohmann::json& spec);
  friend struct FlipResult;
  friend FlipResult classicalFlip(const FatGraph& g, const std::string& edge);

 private:
  std::vector<SurfaceVertex> vertices_;
  std::vector<SurfaceEdge> edges_;
  std::vector<std::vector<EdgeEnd>> cyclic_;  // per vertex
  std::map<std::string, std::size_t> vertexByName_;
  std::map<std::string, std::size_t> edgeByName_;  // ids and labels

  void rebuildNameMaps();
};

/// Parses and validates a graph description of the form
///   {"vertices":[{"id","kind"}...],
///    "edges":[{"id","label","kind","ends":[v0,v1]}...],
///    "cyclic":{vertexId:[edgeEndIds...]}}
/// where kind strings are internal|cusp|anchor and inner|cusp|loop, and an
/// edge-end id is a bare edge id (non-loop) or "id.0"/"id.1" (loop ends).
FatGraph buildFatGraph(const nlohmann::json& spec);

/// Integer antisymmetric form on edge coordinates: every corner of a
/// three-valent vertex where end of edge a immediately precedes end of edge b
/// counterclockwise contributes +1 to eps[a][b] and -1 to eps[b][a]; loop
/// edge rows and columns are then zeroed (their coordinates are central).
std::vector<std::vector<int>> skewForm(const FatGraph& g);

/// Coordinate algebra of a graph: generators are the non-loop edge labels in
/// declaration order, centrals the loop labels, skew form from skewForm().
AlgebraPtr makeSurfaceAlgebra(const FatGraph& g);

/// Counts of the surface the graph is a spine of.  Boundary faces are orbits
/// of the ribbon-walk permutation (cross the edge, then take the
/// counterclockwise successor at the far vertex); each face is one hole.
/// Genus solves  V - E = 2 - 2*genus - holes.
struct SurfaceShape {
  int genus = 0;
  int holes = 0;
  int cusps = 0;
  std::size_t vertexCount = 0;
  std::size_t edgeCount = 0;
  int eulerCharacteristic = 0;
};

SurfaceShape describeSurface(const FatGraph& g);

// ---------------------------------------------------------------------------
// Path words and arc matrices

enum class TokenKind { Edge, TurnLeft, TurnRight, LoopFactor };

struct Token {
  TokenKind kind = TokenKind::Edge;
  std::string label;  // edge label for Edge/LoopFactor, empty for turns

  friend bool operator==(const Token&, const Token&) = default;
};

/// Parses "X:Z1" / "L" / "R" / "F:omega1".
Token parseToken(const std::string& text);
std::string tokenText(const Token& t);

/// Arc endpoint: a cusp (by cusp-vertex id) plus the 1-based thread position
/// of the arc end among the arcs entering that cusp.
struct ArcEndpoint {
  std::string cusp;
  int thread = 1;

  friend bool operator==(const ArcEndpoint&, const ArcEndpoint&) = default;
};

/// Token word of an arc.  Words are matrix-ordered: the word is read left to
/// right as a product, which traverses the underlying path from its source
/// (rightmost token) to its target (leftmost token).  First and last tokens
/// must be cusp-edge crossings.
struct PathWord {
  std::string name;
  std::vector<Token> tokens;
};

enum class Mode { Classical, Quantum };

/// Arc matrix with its endpoint metadata.
struct QMatrix {
  Mat<QElement> m;
  ArcEndpoint source;
  ArcEndpoint target;
  std::string orientation = "positive";
};

struct CMatrix {
  Mat<CLaurent> m;
  ArcEndpoint source;
  ArcEndpoint target;
};

/// 2x2 matrix of one token.  Edge crossing X_A is antidiagonal
/// [[0, -e^{A/2}], [e^{-A/2}, 0]]; the turn matrices are
/// L = [[0,1],[-1,-1]] and R = [[1,1],[-1,0]]; a hole contributes
/// F_omega = [[0,1],[-1,-omega]] with omega a central symbol (polynomial, not
/// exponential).  Quantum mode scales L by q^{1/4} and R by q^{-1/4}.
Mat<QElement> tokenMatrix(const Token& t, const AlgebraPtr& alg, Mode mode);

/// Classical token matrix over the commutative ring, computed independently
/// of the quantum path (used to cross-check the q->1 specialization).
Mat<CLaurent> tokenMatrixClassical(const Token& t, const AlgebraPtr& alg);

/// Exact inverse of a token matrix over the same ring.  Every token is
/// invertible without division: X_A^{-1} = -X_A, L^{-1} = -R, R^{-1} = -L
/// (with the reciprocal q^{1/4} scale in quantum mode), and F_omega^{-1} is
/// its adjugate [[-omega,-1],[1,0]] since det F_omega = 1.  A word's inverse
/// is the product of token inverses in reversed order.
Mat<QElement> tokenInverse(const Token& t, const AlgebraPtr& alg, Mode mode);
Mat<CLaurent> tokenInverseClassical(const Token& t, const AlgebraPtr& alg);

/// Ordered product of token matrices in word order; validates that the word
/// is realizable on the graph: first/last tokens cross cusp edges, tokens
/// alternate crossings with turns/loop factors, every turn corresponds to a
/// corner of some vertex, every loop factor sits at an anchor of the
/// preceding crossing.  Endpoint cusps are read off the word; threads default
/// to 1 and are overridden by fixture arc data.
QMatrix monodromy(const FatGraph& g, const PathWord& w, Mode mode,
                  const AlgebraPtr& alg);
CMatrix monodromyClassical(const FatGraph& g, const PathWord& w,
                           const AlgebraPtr& alg);

/// lambda-length of an arc: the upper-left matrix entry.
QElement lambdaLength(const QMatrix& m);

/// tr_K functional: minus the upper-right entry of a k x k matrix.
QElement trK(const QMatrix& m);

/// Determinant of a 2x2 classical matrix.
CLaurent det2(const Mat<CLaurent>& m);

/// Converts an edge-walk [edge, vertex, edge, vertex, ..., edge] (ids) into
/// a matrix-ordered token word.  At each intermediate vertex the turn is
/// inferred from the cyclic order: departing along the counterclockwise
/// successor of the arrival end is a right turn, along the predecessor a left
/// turn.  Loop edges are not walkable (their words use explicit F tokens).
PathWord walkToWord(const FatGraph& g, const std::string& name,
                    const std::vector<std::string>& walk);

// ---------------------------------------------------------------------------
// Classical flips

/// Multiplicative substitution on exponentiated half-coordinates induced by
/// flipping edge Z, with t^2 = 1 + y_Z^2 where y_Z = e^{Z/2}:
///   y_Z -> 1/y_Z,
///   each counterclockwise-adjacent (predecessor) end of the surrounding
///   quadrilateral multiplies its edge by t        (A -> A + log(1+e^Z)),
///   each successor end multiplies its edge by y_Z/t (B -> B - log(1+e^-Z)).
/// Factors accumulate per end, so an edge bounding the quadrilateral twice
/// receives the square.
struct FlipSubstitution {
  std::string flippedLabel;
  // label -> (number of predecessor ends, number of successor ends)
  std::map<std::string, std::pair<int, int>> factorCounts;
};

struct FlipResult {
  FatGraph graph;
  FlipSubstitution subst;
};

/// Flips an inner edge joining two internal vertices: with cyclic orders
/// rotated edge-first as (Z, s1, p1) and (Z, s2, p2), the flipped orders are
/// (Z, p1, s2) and (Z, p2, s1) — the successor ends trade vertices.  Cusp
/// edges, loop edges, and edges touching an anchor are unsupported.
FlipResult classicalFlip(const FatGraph& g, const std::string& edge);

// ---------------------------------------------------------------------------
// Rational-function field for flip checks
//
// Laurent polynomials over Q in the exponentiated half-coordinates y_e
// together with one radical t obeying t^2 = 1 + y_Z^2, formed into fractions.
// The ring is an integral domain, so fraction equality is cross-
// multiplication; no gcd normalization is needed.

struct FKey {
  std::vector<int> exps;  // y exponents, indexed like the algebra symbols
  int tdeg = 0;           // 0 or 1 after reduction

  friend auto operator<=>(const FKey&, const FKey&) = default;
};

class FPoly {
 public:
  FPoly() = default;

  static FPoly zero(const AlgebraPtr& alg, std::size_t zIndex);
  static FPoly constant(const AlgebraPtr& alg, std::size_t zIndex,
                        const Rat& c);
  static FPoly radical(const AlgebraPtr& alg, std::size_t zIndex);  // t
  static FPoly monomial(const AlgebraPtr& alg, std::size_t zIndex,
                        std::vector<int> exps, Rat coeff = 1);
  static FPoly fromLaurent(const CLaurent& p, std::size_t zIndex);

  bool isZero() const { return terms_.empty(); }
  const std::map<FKey, Rat>& terms() const { return terms_; }

  FPoly operator+(const FPoly& o) const;
  FPoly operator-(const FPoly& o) const;
  FPoly operator*(const FPoly& o) const;
  bool operator==(const FPoly& o) const { return terms_ == o.terms_; }

 private:
  FPoly(AlgebraPtr alg, std::size_t zIndex)
      : alg_(std::move(alg)), zIndex_(zIndex) {}
  /// Inserts coeff * y^exps * t^tdeg, reducing t^2 -> 1 + y_Z^2.
  void insertReduced(std::vector<int> exps, int tdeg, const Rat& coeff);

  AlgebraPtr alg_;
  std::size_t zIndex_ = 0;
  std::map<FKey, Rat> terms_;
};

/// Fraction of FPoly values; equality by cross-multiplication.
class FElem {
 public:
  FElem() = default;
  FElem(FPoly num, FPoly den);
  static FElem fromLaurent(const CLaurent& p, std::size_t zIndex);

  const FPoly& num() const { return num_; }
  const FPoly& den() const { return den_; }

  FElem operator+(const FElem& o) const;
  FElem operator-(const FElem& o) const;
  FElem operator*(const FElem& o) const;
  FElem inverse() const;
  FElem pow(int n) const;
  bool operator==(const FElem& o) const;

 private:
  FPoly num_, den_;
};

/// Applies the flip substitution to a Laurent polynomial in the flipped
/// graph's coordinates, producing a rational function in the original
/// coordinates.  Both graphs share one symbol list, so the algebra of the
/// original graph indexes the result.
FElem applyFlipSubstitution(const CLaurent& value, const FlipSubstitution& s,
                            const AlgebraPtr& alg);

std::string describe(const Token& t);
std::string describe(const SurfaceShape& s);

}  // namespace monodromy
