#include "monodromy/fixtures.hpp"

#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace monodromy {

const PathWord& SurfaceFixture::word(const std::string& wordName) const {
  if (auto it = words.find(wordName); it != words.end()) return it->second;
  if (auto it = flipWords.find(wordName); it != flipWords.end())
    return it->second;
  throw std::invalid_argument("fixture " + name + " has no word " + wordName);
}

QMatrix SurfaceFixture::arcMatrix(const std::string& wordName,
                                  Mode mode) const {
  QMatrix m = monodromy(graph, word(wordName), mode, algebra);
  if (auto it = arcs.find(wordName); it != arcs.end()) {
    m.source = it->second.first;
    m.target = it->second.second;
  }
  return m;
}

CMatrix SurfaceFixture::arcMatrixClassical(const std::string& wordName) const {
  CMatrix m = monodromyClassical(graph, word(wordName), algebra);
  if (auto it = arcs.find(wordName); it != arcs.end()) {
    m.source = it->second.first;
    m.target = it->second.second;
  }
  return m;
}

std::string fixtureDirectory() {
  if (const char* dir = std::getenv("MONODROMY_FIXTURE_DIR"); dir && *dir)
    return dir;
  return "fixtures";
}

SurfaceFixture loadSurfaceFixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fixture file " + path);
  nlohmann::json doc = nlohmann::json::parse(in);

  SurfaceFixture fx;
  fx.raw = doc;
  const auto slash = path.find_last_of('/');
  fx.name = path.substr(slash == std::string::npos ? 0 : slash + 1);
  if (fx.name.size() > 5 && fx.name.ends_with(".json"))
    fx.name.resize(fx.name.size() - 5);

  fx.graph = buildFatGraph(doc.at("graph"));
  fx.algebra = makeSurfaceAlgebra(fx.graph);

  if (doc.contains("words")) {
    for (const auto& [wname, tokens] : doc.at("words").items()) {
      PathWord w;
      w.name = wname;
      for (const auto& t : tokens)
        w.tokens.push_back(parseToken(t.get<std::string>()));
      fx.words.emplace(wname, std::move(w));
    }
  }
  if (doc.contains("flipWords")) {
    for (const auto& [wname, tokens] : doc.at("flipWords").items()) {
      PathWord w;
      w.name = wname;
      for (const auto& t : tokens)
        w.tokens.push_back(parseToken(t.get<std::string>()));
      fx.flipWords.emplace(wname, std::move(w));
    }
  }
  if (doc.contains("hermitianArcs")) {
    for (const auto& n : doc.at("hermitianArcs"))
      fx.hermitianArcs.push_back(n.get<std::string>());
  }
  if (doc.contains("arcs")) {
    for (const auto& [wname, ends] : doc.at("arcs").items()) {
      const auto parseEndpoint = [](const nlohmann::json& j) {
        return ArcEndpoint{j.at("cusp").get<std::string>(),
                           j.at("thread").get<int>()};
      };
      fx.arcs.emplace(wname,
                      std::make_pair(parseEndpoint(ends.at("source")),
                                     parseEndpoint(ends.at("target"))));
    }
  }
  return fx;
}

SurfaceFixture loadFixtureByName(const std::string& name) {
  return loadSurfaceFixture(fixtureDirectory() + "/" + name + ".json");
}

}  // namespace monodromy
