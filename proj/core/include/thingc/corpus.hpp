#pragma once

#include <string>
#include <vector>

namespace thingc {

/// One bundled model with its expected behavior. The manifest is the
/// machine-readable index of everything under models/.
struct CorpusEntry {
  std::string name;
  std::string file;                  // relative to the manifest's directory
  std::vector<std::string> oracles;  // identifiers of the checks that pin it
  std::string notes;
  bool validates = true;
  bool acyclic = true;
};

/// Loads models/manifest.json. Throws std::runtime_error on malformed input.
std::vector<CorpusEntry> load_manifest(const std::string& path);

}  // namespace thingc
