#include "monodromy/surface.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace monodromy {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument(msg);
}

VertexKind parseVertexKind(const std::string& s) {
  if (s == "internal") return VertexKind::Internal;
  if (s == "cusp") return VertexKind::Cusp;
  if (s == "anchor") return VertexKind::Anchor;
  fail("unknown vertex kind: " + s);
}

EdgeKind parseEdgeKind(const std::string& s) {
  if (s == "inner") return EdgeKind::Inner;
  if (s == "cusp") return EdgeKind::CuspEdge;
  if (s == "loop") return EdgeKind::Loop;
  fail("unknown edge kind: " + s);
}

}  // namespace

// ---------------------------------------------------------------------------
// FatGraph

void FatGraph::rebuildNameMaps() {
  vertexByName_.clear();
  edgeByName_.clear();
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (!vertexByName_.emplace(vertices_[i].id, i).second)
      fail("duplicate label: vertex " + vertices_[i].id);
  }
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (!edgeByName_.emplace(edges_[i].id, i).second)
      fail("duplicate label: edge " + edges_[i].id);
    if (edges_[i].label != edges_[i].id &&
        !edgeByName_.emplace(edges_[i].label, i).second)
      fail("duplicate label: edge label " + edges_[i].label);
  }
}

std::size_t FatGraph::vertexIndex(const std::string& id) const {
  auto it = vertexByName_.find(id);
  if (it == vertexByName_.end()) fail("unknown vertex: " + id);
  return it->second;
}

std::size_t FatGraph::edgeIndex(const std::string& idOrLabel) const {
  auto it = edgeByName_.find(idOrLabel);
  if (it == edgeByName_.end()) fail("unknown edge: " + idOrLabel);
  return it->second;
}

bool FatGraph::hasEdge(const std::string& idOrLabel) const {
  return edgeByName_.count(idOrLabel) > 0;
}

EdgeEnd FatGraph::ccwNext(const EdgeEnd& e) const {
  const auto& ring = cyclic_[endVertex(e)];
  for (std::size_t i = 0; i < ring.size(); ++i)
    if (ring[i] == e) return ring[(i + 1) % ring.size()];
  fail("edge-end not present in its vertex ring");
}

EdgeEnd FatGraph::ccwPrev(const EdgeEnd& e) const {
  const auto& ring = cyclic_[endVertex(e)];
  for (std::size_t i = 0; i < ring.size(); ++i)
    if (ring[i] == e) return ring[(i + ring.size() - 1) % ring.size()];
  fail("edge-end not present in its vertex ring");
}

std::size_t FatGraph::cuspVertexOf(std::size_t edgeIdx) const {
  const SurfaceEdge& e = edges_[edgeIdx];
  if (e.kind != EdgeKind::CuspEdge)
    fail("edge " + e.id + " is not a cusp edge");
  for (int s = 0; s < 2; ++s)
    if (vertices_[e.ends[s]].kind == VertexKind::Cusp) return e.ends[s];
  fail("cusp edge " + e.id + " has no cusp vertex");
}

void FatGraph::validate() const {
  std::vector<std::vector<EdgeEnd>> incident(vertices_.size());
  for (std::size_t ei = 0; ei < edges_.size(); ++ei) {
    const SurfaceEdge& e = edges_[ei];
    if (e.ends[0] >= vertices_.size() || e.ends[1] >= vertices_.size())
      fail("dangling edge: " + e.id);
    if (e.kind == EdgeKind::Loop) {
      if (e.ends[0] != e.ends[1])
        fail("loop edge " + e.id + " must close on one vertex");
      if (vertices_[e.ends[0]].kind != VertexKind::Anchor)
        fail("loop edge " + e.id + " must sit at an anchor vertex");
    } else if (e.ends[0] == e.ends[1]) {
      fail("dangling edge: " + e.id + " joins a vertex to itself");
    }
    incident[e.ends[0]].push_back({ei, 0});
    if (e.kind == EdgeKind::Loop || e.ends[1] != e.ends[0])
      incident[e.ends[1]].push_back({ei, 1});
  }

  for (std::size_t vi = 0; vi < vertices_.size(); ++vi) {
    const SurfaceVertex& v = vertices_[vi];
    const std::size_t valence = incident[vi].size();
    switch (v.kind) {
      case VertexKind::Internal:
        if (valence != 3)
          fail("valence violation: internal vertex " + v.id + " has " +
               std::to_string(valence) + " edge-ends, wants 3");
        for (const EdgeEnd& e : incident[vi])
          if (edges_[e.edge].kind == EdgeKind::Loop)
            fail("valence violation: loop edge at internal vertex " + v.id);
        break;
      case VertexKind::Cusp: {
        if (valence != 1)
          fail("valence violation: cusp vertex " + v.id + " has " +
               std::to_string(valence) + " edge-ends, wants 1");
        if (edges_[incident[vi][0].edge].kind != EdgeKind::CuspEdge)
          fail("cusp vertex " + v.id + " must end a cusp edge");
        break;
      }
      case VertexKind::Anchor: {
        if (valence != 3)
          fail("valence violation: anchor vertex " + v.id + " has " +
               std::to_string(valence) + " edge-ends, wants 3");
        int loopEnds = 0;
        for (const EdgeEnd& e : incident[vi])
          if (edges_[e.edge].kind == EdgeKind::Loop) ++loopEnds;
        if (loopEnds != 2)
          fail("anchor vertex " + v.id + " must carry both ends of one loop");
        break;
      }
    }

    // Cyclic order must be a permutation of the incident ends.
    if (cyclic_[vi].size() != valence)
      fail("cyclic order at " + v.id + " lists " +
           std::to_string(cyclic_[vi].size()) + " ends, vertex has " +
           std::to_string(valence));
    for (const EdgeEnd& e : incident[vi]) {
      if (std::count(cyclic_[vi].begin(), cyclic_[vi].end(), e) != 1)
        fail("cyclic order at " + v.id + " is not a permutation of ends");
    }
  }

  for (std::size_t ei = 0; ei < edges_.size(); ++ei) {
    if (edges_[ei].kind != EdgeKind::CuspEdge) continue;
    int cuspEnds = 0;
    for (int s = 0; s < 2; ++s)
      if (vertices_[edges_[ei].ends[s]].kind == VertexKind::Cusp) ++cuspEnds;
    if (cuspEnds != 1)
      fail("cusp edge " + edges_[ei].id +
           " must join one cusp vertex to the spine");
  }
}

FatGraph buildFatGraph(const nlohmann::json& spec) {
  if (!spec.contains("vertices") || !spec.contains("edges"))
    fail("graph description needs vertices and edges");
  FatGraph g;
  for (const auto& v : spec.at("vertices")) {
    g.vertices_.push_back(
        {v.at("id").get<std::string>(),
         parseVertexKind(v.at("kind").get<std::string>())});
  }
  std::map<std::string, std::size_t> vmap;
  for (std::size_t i = 0; i < g.vertices_.size(); ++i) {
    if (!vmap.emplace(g.vertices_[i].id, i).second)
      fail("duplicate label: vertex " + g.vertices_[i].id);
  }
  for (const auto& e : spec.at("edges")) {
    SurfaceEdge edge;
    edge.id = e.at("id").get<std::string>();
    edge.label = e.contains("label") ? e.at("label").get<std::string>()
                                     : edge.id;
    edge.kind = parseEdgeKind(e.at("kind").get<std::string>());
    const auto& ends = e.at("ends");
    if (!ends.is_array() || ends.size() != 2)
      fail("dangling edge: " + edge.id + " needs two ends");
    for (int s = 0; s < 2; ++s) {
      auto it = vmap.find(ends[s].get<std::string>());
      if (it == vmap.end())
        fail("dangling edge: " + edge.id + " references unknown vertex " +
             ends[s].get<std::string>());
      edge.ends[s] = it->second;
    }
    g.edges_.push_back(std::move(edge));
  }
  g.rebuildNameMaps();

  // Cyclic orders: explicit where given, the sole incident end otherwise.
  g.cyclic_.assign(g.vertices_.size(), {});
  std::vector<std::vector<EdgeEnd>> incident(g.vertices_.size());
  for (std::size_t ei = 0; ei < g.edges_.size(); ++ei) {
    incident[g.edges_[ei].ends[0]].push_back({ei, 0});
    if (g.edges_[ei].kind == EdgeKind::Loop ||
        g.edges_[ei].ends[1] != g.edges_[ei].ends[0])
      incident[g.edges_[ei].ends[1]].push_back({ei, 1});
  }
  const auto parseEnd = [&](const std::string& text,
                            std::size_t vi) -> EdgeEnd {
    std::string name = text;
    int end = -1;
    if (auto dot = text.rfind('.'); dot != std::string::npos) {
      name = text.substr(0, dot);
      end = std::stoi(text.substr(dot + 1));
      if (end != 0 && end != 1) fail("edge end must be .0 or .1: " + text);
    }
    const std::size_t ei = g.edgeIndex(name);
    if (end < 0) {
      if (g.edges_[ei].kind == EdgeKind::Loop)
        fail("loop end needs .0/.1 suffix: " + text);
      if (g.edges_[ei].ends[0] == vi)
        end = 0;
      else if (g.edges_[ei].ends[1] == vi)
        end = 1;
      else
        fail("edge " + name + " has no end at the listed vertex");
    }
    return {ei, end};
  };
  if (spec.contains("cyclic")) {
    for (const auto& [vid, ring] : spec.at("cyclic").items()) {
      const std::size_t vi = g.vertexIndex(vid);
      for (const auto& entry : ring)
        g.cyclic_[vi].push_back(parseEnd(entry.get<std::string>(), vi));
    }
  }
  for (std::size_t vi = 0; vi < g.vertices_.size(); ++vi)
    if (g.cyclic_[vi].empty() && incident[vi].size() == 1)
      g.cyclic_[vi] = incident[vi];

  g.validate();
  return g;
}

// ---------------------------------------------------------------------------
// Skew form and algebra

std::vector<std::vector<int>> skewForm(const FatGraph& g) {
  const std::size_t n = g.edges().size();
  std::vector<std::vector<int>> eps(n, std::vector<int>(n, 0));
  for (std::size_t vi = 0; vi < g.vertices().size(); ++vi) {
    const auto& ring = g.cyclicOrders()[vi];
    if (ring.size() != 3) continue;
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const std::size_t a = ring[i].edge;
      const std::size_t b = ring[(i + 1) % ring.size()].edge;
      if (a == b) continue;  // loop corner, cancels anyway
      eps[a][b] += 1;
      eps[b][a] -= 1;
    }
  }
  for (std::size_t ei = 0; ei < n; ++ei) {
    if (g.edges()[ei].kind != EdgeKind::Loop) continue;
    for (std::size_t j = 0; j < n; ++j) eps[ei][j] = eps[j][ei] = 0;
  }
  return eps;
}

AlgebraPtr makeSurfaceAlgebra(const FatGraph& g) {
  std::vector<std::string> generators, centrals;
  std::vector<std::size_t> order;  // edge index per algebra symbol
  for (std::size_t ei = 0; ei < g.edges().size(); ++ei)
    if (g.edges()[ei].kind != EdgeKind::Loop) {
      generators.push_back(g.edges()[ei].label);
      order.push_back(ei);
    }
  for (std::size_t ei = 0; ei < g.edges().size(); ++ei)
    if (g.edges()[ei].kind == EdgeKind::Loop) {
      centrals.push_back(g.edges()[ei].label);
      order.push_back(ei);
    }
  const auto eps = skewForm(g);
  const std::size_t n = order.size();
  std::vector<std::vector<int>> skew(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) skew[i][j] = eps[order[i]][order[j]];
  return makeAlgebra(std::move(generators), std::move(centrals),
                     std::move(skew));
}

SurfaceShape describeSurface(const FatGraph& g) {
  SurfaceShape s;
  s.vertexCount = g.vertices().size();
  s.edgeCount = g.edges().size();
  s.eulerCharacteristic =
      static_cast<int>(s.vertexCount) - static_cast<int>(s.edgeCount);
  for (const SurfaceEdge& e : g.edges())
    if (e.kind == EdgeKind::CuspEdge) ++s.cusps;

  // Boundary faces: orbits of h -> ccwNext(otherEnd(h)) over all edge-ends.
  std::set<std::pair<std::size_t, int>> pending;
  for (std::size_t ei = 0; ei < g.edges().size(); ++ei) {
    pending.insert({ei, 0});
    pending.insert({ei, 1});
  }
  int faces = 0;
  while (!pending.empty()) {
    ++faces;
    const auto seed = *pending.begin();
    EdgeEnd h{seed.first, seed.second};
    while (pending.erase({h.edge, h.end}) == 1)
      h = g.ccwNext(EdgeEnd{h.edge, 1 - h.end});
  }
  s.holes = faces;
  s.genus = (2 - faces - s.eulerCharacteristic) / 2;
  return s;
}

// ---------------------------------------------------------------------------
// Tokens

Token parseToken(const std::string& text) {
  if (text == "L") return {TokenKind::TurnLeft, ""};
  if (text == "R") return {TokenKind::TurnRight, ""};
  if (text.rfind("X:", 0) == 0) return {TokenKind::Edge, text.substr(2)};
  if (text.rfind("F:", 0) == 0) return {TokenKind::LoopFactor, text.substr(2)};
  fail("unknown token: " + text);
}

std::string tokenText(const Token& t) {
  switch (t.kind) {
    case TokenKind::Edge:
      return "X:" + t.label;
    case TokenKind::TurnLeft:
      return "L";
    case TokenKind::TurnRight:
      return "R";
    case TokenKind::LoopFactor:
      return "F:" + t.label;
  }
  return "?";
}

Mat<QElement> tokenMatrix(const Token& t, const AlgebraPtr& alg, Mode mode) {
  Mat<QElement> m(2, 2);
  switch (t.kind) {
    case TokenKind::Edge:
      if (alg->isCentral(alg->index(t.label)))
        fail("edge crossing needs a shear or cusp symbol: " + t.label);
      m(0, 1) = -QElement::symbolExp(alg, t.label, 1);
      m(1, 0) = QElement::symbolExp(alg, t.label, -1);
      break;
    case TokenKind::TurnLeft: {
      const QElement u = mode == Mode::Quantum ? QElement::qPower(alg, 1)
                                               : QElement::one(alg);
      m(0, 1) = u;
      m(1, 0) = -u;
      m(1, 1) = -u;
      break;
    }
    case TokenKind::TurnRight: {
      const QElement u = mode == Mode::Quantum ? QElement::qPower(alg, -1)
                                               : QElement::one(alg);
      m(0, 0) = u;
      m(0, 1) = u;
      m(1, 0) = -u;
      break;
    }
    case TokenKind::LoopFactor: {
      const std::size_t idx = alg->index(t.label);
      if (!alg->isCentral(idx))
        fail("loop factor needs a central symbol: " + t.label);
      std::vector<int> exps(alg->size(), 0);
      exps[idx] = 1;
      m(0, 1) = QElement::one(alg);
      m(1, 0) = -QElement::one(alg);
      m(1, 1) = QElement::weyl(alg, std::move(exps), 0, -1);
      break;
    }
  }
  return m;
}

Mat<CLaurent> tokenMatrixClassical(const Token& t, const AlgebraPtr& alg) {
  Mat<CLaurent> m(2, 2);
  switch (t.kind) {
    case TokenKind::Edge:
      if (alg->isCentral(alg->index(t.label)))
        fail("edge crossing needs a shear or cusp symbol: " + t.label);
      m(0, 1) = -CLaurent::symbolExp(alg, t.label, 1);
      m(1, 0) = CLaurent::symbolExp(alg, t.label, -1);
      break;
    case TokenKind::TurnLeft:
      m(0, 1) = CLaurent::one(alg);
      m(1, 0) = -CLaurent::one(alg);
      m(1, 1) = -CLaurent::one(alg);
      break;
    case TokenKind::TurnRight:
      m(0, 0) = CLaurent::one(alg);
      m(0, 1) = CLaurent::one(alg);
      m(1, 0) = -CLaurent::one(alg);
      break;
    case TokenKind::LoopFactor: {
      const std::size_t idx = alg->index(t.label);
      if (!alg->isCentral(idx))
        fail("loop factor needs a central symbol: " + t.label);
      std::vector<int> exps(alg->size(), 0);
      exps[idx] = 1;
      m(0, 1) = CLaurent::one(alg);
      m(1, 0) = -CLaurent::one(alg);
      m(1, 1) = CLaurent::monomial(alg, std::move(exps), -1);
      break;
    }
  }
  return m;
}

Mat<QElement> tokenInverse(const Token& t, const AlgebraPtr& alg, Mode mode) {
  switch (t.kind) {
    case TokenKind::Edge:
      // X_A^2 = -1 exactly (the exponentials cancel), so X^{-1} = -X.
      return -tokenMatrix(t, alg, mode);
    case TokenKind::TurnLeft: {
      // L R = -1 including the q^{1/4} q^{-1/4} scales, so L^{-1} = -R.
      Token r;
      r.kind = TokenKind::TurnRight;
      return -tokenMatrix(r, alg, mode);
    }
    case TokenKind::TurnRight: {
      Token l;
      l.kind = TokenKind::TurnLeft;
      return -tokenMatrix(l, alg, mode);
    }
    case TokenKind::LoopFactor: {
      // det F_omega = 1, so the inverse is the adjugate [[-omega,-1],[1,0]].
      const std::size_t idx = alg->index(t.label);
      if (!alg->isCentral(idx))
        fail("loop factor needs a central symbol: " + t.label);
      std::vector<int> exps(alg->size(), 0);
      exps[idx] = 1;
      Mat<QElement> m(2, 2);
      m(0, 0) = QElement::weyl(alg, std::move(exps), 0, -1);
      m(0, 1) = -QElement::one(alg);
      m(1, 0) = QElement::one(alg);
      return m;
    }
  }
  fail("unknown token kind");
  return Mat<QElement>(2, 2);
}

Mat<CLaurent> tokenInverseClassical(const Token& t, const AlgebraPtr& alg) {
  switch (t.kind) {
    case TokenKind::Edge:
      return -tokenMatrixClassical(t, alg);
    case TokenKind::TurnLeft: {
      Token r;
      r.kind = TokenKind::TurnRight;
      return -tokenMatrixClassical(r, alg);
    }
    case TokenKind::TurnRight: {
      Token l;
      l.kind = TokenKind::TurnLeft;
      return -tokenMatrixClassical(l, alg);
    }
    case TokenKind::LoopFactor: {
      const std::size_t idx = alg->index(t.label);
      if (!alg->isCentral(idx))
        fail("loop factor needs a central symbol: " + t.label);
      std::vector<int> exps(alg->size(), 0);
      exps[idx] = 1;
      Mat<CLaurent> m(2, 2);
      m(0, 0) = CLaurent::monomial(alg, std::move(exps), -1);
      m(0, 1) = -CLaurent::one(alg);
      m(1, 0) = CLaurent::one(alg);
      return m;
    }
  }
  fail("unknown token kind");
  return Mat<CLaurent>(2, 2);
}

namespace {

/// A turn between crossings is realizable when some vertex has ends of both
/// edges in the demanded corner position.  Word order is reversed path
/// order, so in "X:B T X:A" the path crosses A, turns, then crosses B: a
/// right turn departs along the counterclockwise successor of the arrival
/// end, a left turn along the predecessor.
bool turnExists(const FatGraph& g, const std::string& arriveLabel,
                const std::string& departLabel, TokenKind turn) {
  const std::size_t ea = g.edgeIndex(arriveLabel);
  const std::size_t eb = g.edgeIndex(departLabel);
  for (int s = 0; s < 2; ++s) {
    const EdgeEnd arrival{ea, s};
    const std::size_t v = g.endVertex(arrival);
    if (g.cyclicOrders()[v].size() < 2) continue;
    const EdgeEnd depart = turn == TokenKind::TurnRight ? g.ccwNext(arrival)
                                                        : g.ccwPrev(arrival);
    if (depart.edge == eb) return true;
  }
  return false;
}

void validateWord(const FatGraph& g, const PathWord& w) {
  const auto& ts = w.tokens;
  if (ts.empty() || ts.size() % 2 == 0)
    fail("word " + w.name + " must alternate crossings and turns");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const bool crossingSlot = i % 2 == 0;
    if (crossingSlot) {
      if (ts[i].kind != TokenKind::Edge)
        fail("word " + w.name + " expects an edge crossing at position " +
             std::to_string(i));
      if (g.edge(ts[i].label).kind == EdgeKind::Loop)
        fail("word " + w.name + " crosses loop edge " + ts[i].label);
    } else if (ts[i].kind == TokenKind::Edge) {
      fail("word " + w.name + " expects a turn or loop factor at position " +
           std::to_string(i));
    }
  }
  for (const std::string& endLabel :
       {ts.front().label, ts.back().label}) {
    if (g.edge(endLabel).kind != EdgeKind::CuspEdge)
      fail("word " + w.name + " must begin and end at cusp edges, got " +
           endLabel);
  }
  for (std::size_t i = 1; i + 1 < ts.size(); i += 2) {
    const Token& t = ts[i];
    if (t.kind == TokenKind::LoopFactor) {
      const SurfaceEdge& loop = g.edge(t.label);
      if (loop.kind != EdgeKind::Loop)
        fail("word " + w.name + " uses F on non-loop edge " + t.label);
      const std::size_t anchor = loop.ends[0];
      for (const Token& nb : {ts[i - 1], ts[i + 1]}) {
        const SurfaceEdge& e = g.edge(nb.label);
        if (e.ends[0] != anchor && e.ends[1] != anchor)
          fail("word " + w.name + " loops around " + t.label +
               " away from its anchor");
      }
    } else {
      if (!turnExists(g, ts[i + 1].label, ts[i - 1].label, t.kind))
        fail("word " + w.name + " has no corner for " + tokenText(ts[i - 1]) +
             " " + tokenText(t) + " " + tokenText(ts[i + 1]));
    }
  }
}

std::string cuspOfWordEnd(const FatGraph& g, const Token& t) {
  return g.vertices()[g.cuspVertexOf(g.edgeIndex(t.label))].id;
}

}  // namespace

QMatrix monodromy(const FatGraph& g, const PathWord& w, Mode mode,
                  const AlgebraPtr& alg) {
  validateWord(g, w);
  Mat<QElement> acc = Mat<QElement>::identity(2, QElement::one(alg));
  for (const Token& t : w.tokens) acc = acc * tokenMatrix(t, alg, mode);
  QMatrix result;
  result.m = std::move(acc);
  result.target = {cuspOfWordEnd(g, w.tokens.front()), 1};
  result.source = {cuspOfWordEnd(g, w.tokens.back()), 1};
  return result;
}

CMatrix monodromyClassical(const FatGraph& g, const PathWord& w,
                           const AlgebraPtr& alg) {
  validateWord(g, w);
  Mat<CLaurent> acc = Mat<CLaurent>::identity(2, CLaurent::one(alg));
  for (const Token& t : w.tokens) acc = acc * tokenMatrixClassical(t, alg);
  CMatrix result;
  result.m = std::move(acc);
  result.target = {cuspOfWordEnd(g, w.tokens.front()), 1};
  result.source = {cuspOfWordEnd(g, w.tokens.back()), 1};
  return result;
}

QElement lambdaLength(const QMatrix& m) { return m.m(0, 0); }

QElement trK(const QMatrix& m) { return -m.m(0, m.m.cols() - 1); }

CLaurent det2(const Mat<CLaurent>& m) {
  return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

PathWord walkToWord(const FatGraph& g, const std::string& name,
                    const std::vector<std::string>& walk) {
  if (walk.size() < 3 || walk.size() % 2 == 0)
    fail("walk must alternate edge, vertex, ..., edge");
  std::vector<Token> reversed;
  for (std::size_t i = 0; i + 2 < walk.size(); i += 2) {
    const std::size_t ea = g.edgeIndex(walk[i]);
    const std::size_t v = g.vertexIndex(walk[i + 1]);
    const std::size_t eb = g.edgeIndex(walk[i + 2]);
    if (g.edges()[ea].kind == EdgeKind::Loop ||
        g.edges()[eb].kind == EdgeKind::Loop)
      fail("walks cannot traverse loop edges; use explicit F tokens");
    const auto endAt = [&](std::size_t edge) -> EdgeEnd {
      if (g.edges()[edge].ends[0] == v) return {edge, 0};
      if (g.edges()[edge].ends[1] == v) return {edge, 1};
      fail("walk edge " + g.edges()[edge].id + " misses vertex " +
           walk[i + 1]);
    };
    const EdgeEnd arrival = endAt(ea);
    const EdgeEnd depart = endAt(eb);
    TokenKind turn;
    if (g.ccwNext(arrival) == depart)
      turn = TokenKind::TurnRight;
    else if (g.ccwPrev(arrival) == depart)
      turn = TokenKind::TurnLeft;
    else
      fail("walk has no corner from " + walk[i] + " to " + walk[i + 2] +
           " at " + walk[i + 1]);
    reversed.push_back({TokenKind::Edge, g.edges()[ea].label});
    reversed.push_back({turn, ""});
  }
  reversed.push_back(
      {TokenKind::Edge, g.edges()[g.edgeIndex(walk.back())].label});
  PathWord w;
  w.name = name;
  w.tokens.assign(reversed.rbegin(), reversed.rend());
  return w;
}

// ---------------------------------------------------------------------------
// Flips

FlipResult classicalFlip(const FatGraph& g, const std::string& edge) {
  const std::size_t ei = g.edgeIndex(edge);
  const SurfaceEdge& e = g.edges()[ei];
  if (e.kind == EdgeKind::Loop)
    fail("unsupported flip: " + edge + " is a loop edge");
  if (e.kind == EdgeKind::CuspEdge)
    fail("unsupported flip: " + edge + " is a cusp edge");
  for (int s = 0; s < 2; ++s)
    if (g.vertices()[e.ends[s]].kind != VertexKind::Internal)
      fail("unsupported flip: " + edge + " touches a monogon anchor");

  FlipResult out{g, {e.label, {}}};
  FatGraph& f = out.graph;

  // Rotate each endpoint ring to put the flipped edge first:
  // (Z, successor, predecessor).
  const auto rotated = [&](std::size_t vi, int end) {
    auto ring = f.cyclic_[vi];
    const EdgeEnd ze{ei, end};
    const auto it = std::find(ring.begin(), ring.end(), ze);
    if (it == ring.end()) fail("flip edge missing from its vertex ring");
    std::rotate(ring.begin(), it, ring.end());
    return ring;
  };
  const std::size_t p = e.ends[0], q = e.ends[1];
  const auto ringP = rotated(p, 0);
  const auto ringQ = rotated(q, 1);
  const EdgeEnd succP = ringP[1], predP = ringP[2];
  const EdgeEnd succQ = ringQ[1], predQ = ringQ[2];

  // The successor ends trade vertices; predecessor ends stay put.
  f.cyclic_[p] = {EdgeEnd{ei, 0}, predP, succQ};
  f.cyclic_[q] = {EdgeEnd{ei, 1}, predQ, succP};
  f.edges_[succP.edge].ends[succP.end] = q;
  f.edges_[succQ.edge].ends[succQ.end] = p;
  f.validate();

  for (const EdgeEnd& pe : {predP, predQ})
    out.subst.factorCounts[g.edges()[pe.edge].label].first += 1;
  for (const EdgeEnd& se : {succP, succQ})
    out.subst.factorCounts[g.edges()[se.edge].label].second += 1;
  return out;
}

// ---------------------------------------------------------------------------
// Rational-function field with one radical t, t^2 = 1 + y_Z^2

FPoly FPoly::zero(const AlgebraPtr& alg, std::size_t zIndex) {
  return FPoly(alg, zIndex);
}

FPoly FPoly::constant(const AlgebraPtr& alg, std::size_t zIndex,
                      const Rat& c) {
  FPoly p(alg, zIndex);
  p.insertReduced(std::vector<int>(alg->size(), 0), 0, c);
  return p;
}

FPoly FPoly::radical(const AlgebraPtr& alg, std::size_t zIndex) {
  FPoly p(alg, zIndex);
  p.insertReduced(std::vector<int>(alg->size(), 0), 1, Rat(1));
  return p;
}

FPoly FPoly::monomial(const AlgebraPtr& alg, std::size_t zIndex,
                      std::vector<int> exps, Rat coeff) {
  FPoly p(alg, zIndex);
  p.insertReduced(std::move(exps), 0, coeff);
  return p;
}

FPoly FPoly::fromLaurent(const CLaurent& p, std::size_t zIndex) {
  FPoly out(p.algebra(), zIndex);
  for (const auto& [exps, coeff] : p.terms()) out.insertReduced(exps, 0, coeff);
  return out;
}

void FPoly::insertReduced(std::vector<int> exps, int tdeg, const Rat& coeff) {
  if (coeff == 0) return;
  if (tdeg >= 2) {
    // t^2 = 1 + y_Z^2: split into the two reduced images.
    std::vector<int> bumped = exps;
    bumped[zIndex_] += 2;
    insertReduced(std::move(bumped), tdeg - 2, coeff);
    insertReduced(std::move(exps), tdeg - 2, coeff);
    return;
  }
  FKey key{std::move(exps), tdeg};
  auto [it, fresh] = terms_.try_emplace(std::move(key), coeff);
  if (!fresh) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

namespace {
const AlgebraPtr& pickAlg(const AlgebraPtr& a, const AlgebraPtr& b) {
  return a ? a : b;
}
}  // namespace

FPoly FPoly::operator+(const FPoly& o) const {
  FPoly r(pickAlg(alg_, o.alg_), alg_ ? zIndex_ : o.zIndex_);
  r.terms_ = terms_;
  for (const auto& [k, c] : o.terms_) {
    auto [it, fresh] = r.terms_.try_emplace(k, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) r.terms_.erase(it);
    }
  }
  return r;
}

FPoly FPoly::operator-(const FPoly& o) const {
  FPoly neg(pickAlg(o.alg_, alg_), o.alg_ ? o.zIndex_ : zIndex_);
  for (const auto& [k, c] : o.terms_) neg.terms_.emplace(k, -c);
  return *this + neg;
}

FPoly FPoly::operator*(const FPoly& o) const {
  FPoly r(pickAlg(alg_, o.alg_), alg_ ? zIndex_ : o.zIndex_);
  for (const auto& [ka, ca] : terms_)
    for (const auto& [kb, cb] : o.terms_) {
      std::vector<int> exps = ka.exps;
      for (std::size_t i = 0; i < exps.size(); ++i) exps[i] += kb.exps[i];
      r.insertReduced(std::move(exps), ka.tdeg + kb.tdeg, Rat(ca * cb));
    }
  return r;
}

FElem::FElem(FPoly num, FPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.isZero()) fail("zero denominator");
}

FElem FElem::fromLaurent(const CLaurent& p, std::size_t zIndex) {
  return FElem(FPoly::fromLaurent(p, zIndex),
               FPoly::constant(p.algebra(), zIndex, Rat(1)));
}

FElem FElem::operator+(const FElem& o) const {
  return FElem(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

FElem FElem::operator-(const FElem& o) const {
  return FElem(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

FElem FElem::operator*(const FElem& o) const {
  return FElem(num_ * o.num_, den_ * o.den_);
}

FElem FElem::inverse() const {
  if (num_.isZero()) fail("inverting zero rational function");
  return FElem(den_, num_);
}

FElem FElem::pow(int n) const {
  if (n < 0) return inverse().pow(-n);
  FElem r(den_, den_);  // one, expressed inside the same ring context
  FElem base = *this;
  while (n > 0) {
    if (n & 1) r = r * base;
    base = base * base;
    n >>= 1;
  }
  return r;
}

bool FElem::operator==(const FElem& o) const {
  return num_ * o.den_ == o.num_ * den_;
}

FElem applyFlipSubstitution(const CLaurent& value, const FlipSubstitution& s,
                            const AlgebraPtr& alg) {
  const std::size_t z = alg->index(s.flippedLabel);
  const FPoly one = FPoly::constant(alg, z, Rat(1));
  const FPoly t = FPoly::radical(alg, z);
  // t^2 as a polynomial (denominator for negative t powers).
  const FPoly tSquared = t * t;

  // Image of each coordinate exponential y_e under the flip.
  const auto imageOf = [&](std::size_t i) -> FElem {
    std::vector<int> exps(alg->size(), 0);
    if (i == z) {
      exps[z] = -1;
      return FElem(FPoly::monomial(alg, z, std::move(exps)), one);
    }
    int pred = 0, succ = 0;
    if (auto it = s.factorCounts.find(alg->nameOf(i));
        it != s.factorCounts.end()) {
      pred = it->second.first;
      succ = it->second.second;
    }
    exps[i] = 1;
    exps[z] += succ;
    FPoly num = FPoly::monomial(alg, z, std::move(exps));
    FPoly den = one;
    int tPow = pred - succ;
    if (tPow < 0) {
      // t^{-k} = t^k / (1 + y_Z^2)^k
      for (int r = 0; r < -tPow; ++r) den = den * tSquared;
      tPow = -tPow;
    }
    for (int r = 0; r < tPow; ++r) num = num * t;
    return FElem(std::move(num), std::move(den));
  };

  std::vector<FElem> images;
  images.reserve(alg->size());
  for (std::size_t i = 0; i < alg->size(); ++i) images.push_back(imageOf(i));

  FElem acc(FPoly::zero(alg, z), one);
  for (const auto& [exps, coeff] : value.terms()) {
    FElem term(FPoly::constant(alg, z, coeff), one);
    for (std::size_t i = 0; i < exps.size(); ++i)
      if (exps[i] != 0) term = term * images[i].pow(exps[i]);
    acc = acc + term;
  }
  return acc;
}

std::string describe(const Token& t) { return tokenText(t); }

std::string describe(const SurfaceShape& s) {
  std::ostringstream os;
  os << "genus " << s.genus << ", holes " << s.holes << ", cusps " << s.cusps
     << " (V=" << s.vertexCount << ", E=" << s.edgeCount
     << ", euler=" << s.eulerCharacteristic << ")";
  return os.str();
}

}  // namespace monodromy
