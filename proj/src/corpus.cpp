#include "eqlf/corpus.hpp"

#include <stdexcept>

#include "corpus_data.hpp"
#include "eqlf/kernel.hpp"
#include "eqlf/parser.hpp"

namespace eqlf::stdsigs {

const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> entries = {
      {"godel_t", "stdsigs/godel_t.eqlf", 4,
       "Goedel's T: nat and simple function types", data::godel_t},
      {"dependent_t", "stdsigs/dependent_t.eqlf", 4,
       "Goedel's T with dependent function types", data::dependent_t},
      {"eq_type", "stdsigs/eq_type.eqlf", 4,
       "extensional equality type with reflection and unicity",
       data::eq_type},
      {"id_type", "stdsigs/id_type.eqlf", 5,
       "intensional identity type eliminated by j", data::id_type},
      {"universes", "stdsigs/universes.eqlf", 9,
       "cumulative Tarskian universes over built-in levels",
       data::universes},
      {"sigma_neg", "stdsigs/sigma_neg.eqlf", 7,
       "dependent sums with projection eliminators", data::sigma_neg},
      {"sigma_pos", "stdsigs/sigma_pos.eqlf", 6,
       "dependent sums with a splitting eliminator", data::sigma_pos},
  };
  return entries;
}

const CorpusEntry* find(const std::string& id) {
  for (const CorpusEntry& e : corpus())
    if (e.id == id) return &e;
  return nullptr;
}

Telescope load(const std::string& id) {
  const CorpusEntry* e = find(id);
  if (!e) throw std::invalid_argument("unknown corpus id '" + id + "'");
  Telescope sig = parseSignature(e->text, e->filePath);
  Checker::checkSignature(sig);
  return sig;
}

}  // namespace eqlf::stdsigs
