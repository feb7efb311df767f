#pragma once

#include <span>
#include <string>
#include <vector>

#include "ple/corpus.hpp"
#include "ple/features.hpp"
#include "ple/hierarchy.hpp"
#include "ple/trainer.hpp"

namespace ple {

struct InferenceConfig {
  double eta = 0.1;                 // score threshold
  std::string unseen_pooling = "mean";  // "mean" | "sum"

  void validate() const;
};

/// Top-down search in the candidate sub-tree. Returns the type-path in
/// root-to-node order; may be empty. Ties broken by smallest type id.
std::vector<TypeId> infer_type_path(std::span<const double> mention_vec,
                                    const std::vector<TypeId>& candidates,
                                    const TypeHierarchy& hierarchy,
                                    const EmbeddingStore& store,
                                    const InferenceConfig& config);

/// Pools learned feature embeddings for a mention unseen at training time.
/// Throws FormatError if no feature is in the vocabulary.
std::vector<double> embed_unseen_mention(const std::vector<std::string>& features,
                                         const FeatureVocabulary& vocab,
                                         const EmbeddingStore& store,
                                         const InferenceConfig& config);

struct DenoiseResult {
  LabeledCorpus corpus;          // candidate sets replaced by inferred paths
  std::vector<int> dropped_ids;  // mentions with empty inferred paths
};

DenoiseResult denoise_corpus(const LabeledCorpus& corpus,
                             const EmbeddingStore& store,
                             const TypeHierarchy& hierarchy,
                             const InferenceConfig& config);

}  // namespace ple
