#include "thingc/corpus.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace thingc {

std::vector<CorpusEntry> load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& err) {
    throw std::runtime_error("malformed manifest " + path + ": " + err.what());
  }
  std::vector<CorpusEntry> entries;
  for (const auto& item : doc.at("entries")) {
    CorpusEntry e;
    e.name = item.at("name").get<std::string>();
    e.file = item.at("file").get<std::string>();
    for (const auto& o : item.at("oracles")) e.oracles.push_back(o.get<std::string>());
    if (item.contains("notes")) e.notes = item["notes"].get<std::string>();
    if (item.contains("validates")) e.validates = item["validates"].get<bool>();
    if (item.contains("acyclic")) e.acyclic = item["acyclic"].get<bool>();
    entries.push_back(std::move(e));
  }
  return entries;
}

}  // namespace thingc
