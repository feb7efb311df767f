#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ple/hierarchy.hpp"

namespace ple {

struct TokenRecord {
  std::string text;
  std::string pos;        // empty = no annotation
  std::string dep_label;  // empty = no annotation
  int dep_gov = -1;       // sentence position of governor, -1 = none
  std::string brown;      // Brown cluster bit-string, empty = none
};

struct Mention {
  int id = 0;
  std::string entity_id;  // optional KB entity, unused by training
  std::string doc_id;
  std::string sentence_id;
  std::vector<TokenRecord> context;  // enclosing sentence tokens
  int start = 0;                     // mention offset in context
  int length = 0;                    // mention token count
  int head_index = 0;                // into the mention span
  std::vector<TypeId> candidates;    // sorted, ancestor-closed at load
  std::vector<TypeId> gold;          // sorted; empty = unlabeled

  std::span<const TokenRecord> tokens() const {
    return std::span<const TokenRecord>(context).subspan(start, length);
  }
  const TokenRecord& head() const { return context[start + head_index]; }
};

struct LabeledCorpus {
  std::vector<Mention> mentions;
  int size() const { return static_cast<int>(mentions.size()); }
};

struct KBFacts {
  // entities_by_type[t] is E_t, sorted unique entity ids.
  std::vector<std::vector<std::string>> entities_by_type;
  long skipped_facts = 0;  // facts whose type could not be mapped
};

using GroundTruth = std::map<int, std::set<TypeId>>;

/// Line-delimited JSON mention records. Candidate sets are ancestor-closed
/// unless close_candidates is false.
LabeledCorpus load_corpus(const std::string& path, const TypeHierarchy& hierarchy,
                          bool close_candidates = true);

void write_corpus(const std::string& path, const LabeledCorpus& corpus,
                  const TypeHierarchy& hierarchy);

/// `kb_facts.tsv` (entity<TAB>type) filtered through `type_map.tsv`
/// (kb_type<TAB>target_type). Empty map path = identity mapping.
KBFacts load_kb_facts(const std::string& facts_path, const std::string& type_map_path,
                      const TypeHierarchy& hierarchy);

/// Gold type-paths of the mentions that carry them.
GroundTruth ground_truth(const LabeledCorpus& corpus);

}  // namespace ple
