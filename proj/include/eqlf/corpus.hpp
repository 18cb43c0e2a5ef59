#pragma once

#include <string>
#include <vector>

#include "eqlf/syntax.hpp"

namespace eqlf::stdsigs {

// One bundled signature.  The text is embedded at build time from the
// file named by filePath, so the library needs no runtime data files.
struct CorpusEntry {
  std::string id;
  std::string filePath;      // source-tree location, for reference
  int expectedRuleCount;     // rewrite rules extraction should yield
  std::string description;
  const char* text;
};

// All bundled signatures, in a stable order.
const std::vector<CorpusEntry>& corpus();

// Entry lookup; null when id is unknown.
const CorpusEntry* find(const std::string& id);

// Parse and kernel-check the signature with the given id.
// Throws std::invalid_argument on an unknown id and propagates
// parse/check failures (none occur for the bundled files).
Telescope load(const std::string& id);

}  // namespace eqlf::stdsigs
