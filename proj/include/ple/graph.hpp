#pragma once

#include <string>
#include <vector>

#include "ple/corpus.hpp"
#include "ple/features.hpp"
#include "ple/hierarchy.hpp"

namespace ple {

enum class Variant { kPle, kPleCoH, kPleNoCo };

Variant parse_variant(const std::string& name);  // "ple" | "ple-coh" | "ple-noco"
const char* variant_name(Variant v);

struct Link {
  int src = 0;
  int dst = 0;
  double weight = 1.0;
};

struct HeteroGraph {
  int num_mentions = 0;
  int num_features = 0;
  int num_types = 0;

  std::vector<Link> mention_type;     // binary weights
  std::vector<Link> mention_feature;  // binary weights
  std::vector<Link> type_type;        // one entry per unordered pair, src < dst

  // Optional hierarchy parents (kRoot for top-level types). When present, the
  // trainer elects whole candidate paths instead of single candidate types.
  std::vector<int> type_parent;

  // Adjacency, filled by finalize().
  std::vector<std::vector<int>> candidates_of;   // mention -> sorted type ids
  std::vector<std::vector<int>> mf_of_mention;   // mention -> link indices
  std::vector<std::vector<int>> mf_of_feature;   // feature -> link indices
  std::vector<std::vector<int>> yy_of_type;      // type -> link indices

  long total_links() const {
    return static_cast<long>(mention_type.size()) +
           static_cast<long>(mention_feature.size()) +
           static_cast<long>(type_type.size());
  }

  std::vector<double> feature_degrees() const;  // degree in G_MF
  std::vector<double> type_degrees() const;     // link count in G_YY

  void finalize();
};

std::vector<Link> build_mention_type_graph(const LabeledCorpus& corpus);

std::vector<Link> build_mention_feature_graph(const LabeledCorpus& corpus,
                                              const FeatureVocabulary& vocab,
                                              const FeatureConfig& config);

/// w = 1/(1 + shortest path); pairs whose path passes the root get no link.
std::vector<Link> build_hierarchy_correlation(const TypeHierarchy& hierarchy);

/// Shared-entity overlap weight; zero-overlap pairs get no link.
std::vector<Link> build_kb_correlation(const KBFacts& kb,
                                       const TypeHierarchy& hierarchy);

HeteroGraph build_graph(const LabeledCorpus& corpus, const FeatureVocabulary& vocab,
                        const FeatureConfig& config, const TypeHierarchy& hierarchy,
                        const KBFacts* kb, Variant variant);

/// Edge-list dump, `src<TAB>dst<TAB>weight` with 12 significant digits.
void save_links(const std::string& path, const std::vector<Link>& links);
std::vector<Link> load_links(const std::string& path);

}  // namespace ple
