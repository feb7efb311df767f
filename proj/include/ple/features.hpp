#pragma once

#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ple/corpus.hpp"

namespace ple {

// Feature family tags, usable in FeatureConfig::enabled_families.
// head, token, pos, trigram, shape, length, context, brown, dep

struct FeatureConfig {
  int context_window = 3;  // words on each side of the mention
  std::vector<int> brown_prefix_lengths = {4, 8, 12};
  int min_count = 2;
  std::set<std::string> enabled_families;  // empty = all families

  bool family_on(std::string_view tag) const {
    return enabled_families.empty() ||
           enabled_families.count(std::string(tag)) > 0;
  }
};

/// Uppercase->'A', lowercase->'a', digit->'0', other->'-', runs collapsed.
std::string word_shape(std::string_view token);

/// Consecutive 3-grams of ":" + lowercase(head) + ":".
std::vector<std::string> char_trigrams(std::string_view head);

/// Deterministic multiset of prefixed feature strings for one mention.
std::vector<std::string> extract_features(const Mention& mention,
                                          const FeatureConfig& config);

struct FeatureVocabulary {
  std::vector<std::string> strings;              // id -> feature string
  std::unordered_map<std::string, int> index;    // feature string -> id
  std::vector<long> counts;                      // id -> corpus frequency

  int size() const { return static_cast<int>(strings.size()); }
};

/// Features with corpus frequency >= min_count; ids assigned in
/// lexicographic order of the feature string.
FeatureVocabulary build_vocabulary(const LabeledCorpus& corpus,
                                   const FeatureConfig& config);

/// `feature_id<TAB>feature_string<TAB>count`
void save_vocabulary(const std::string& path, const FeatureVocabulary& vocab);
FeatureVocabulary load_vocabulary(const std::string& path);

}  // namespace ple
