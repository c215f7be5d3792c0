#pragma once
// Loading of surface test fixtures: a JSON file bundles one fat graph, named
// arc words over it, and the endpoint/thread metadata of each arc.  Thread
// positions are data (they encode how arcs are nested at each cusp), so they
// live in the fixture rather than being re-derived.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "monodromy/surface.hpp"

namespace monodromy {

struct SurfaceFixture {
  std::string name;
  FatGraph graph;
  AlgebraPtr algebra;
  std::map<std::string, PathWord> words;
  // Words that are realizable only after an edge flip (kept apart so generic
  // per-word checks on the unflipped graph skip them).
  std::map<std::string, PathWord> flipWords;
  // Names of the arcs whose quantum lambda-length (trK) is involution-fixed:
  // the reduced arc forms whose turn words balance L against R.
  std::vector<std::string> hermitianArcs;
  std::map<std::string, std::pair<ArcEndpoint, ArcEndpoint>>
      arcs;  // word name -> (source, target)
  nlohmann::json raw;

  const PathWord& word(const std::string& wordName) const;

  /// Arc matrix with the fixture's thread metadata applied.
  QMatrix arcMatrix(const std::string& wordName, Mode mode) const;
  CMatrix arcMatrixClassical(const std::string& wordName) const;
};

/// Directory holding fixture files: $MONODROMY_FIXTURE_DIR or "fixtures".
std::string fixtureDirectory();

SurfaceFixture loadSurfaceFixture(const std::string& path);

/// Loads "<fixtureDirectory()>/<name>.json".
SurfaceFixture loadFixtureByName(const std::string& name);

}  // namespace monodromy
