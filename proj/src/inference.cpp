#include "ple/inference.hpp"

#include <algorithm>
#include <set>

#include "ple/errors.hpp"

namespace ple {

void InferenceConfig::validate() const {
  if (unseen_pooling != "mean" && unseen_pooling != "sum")
    throw ConfigError("unknown unseen_pooling '" + unseen_pooling + "'");
}

std::vector<TypeId> infer_type_path(std::span<const double> mention_vec,
                                    const std::vector<TypeId>& candidates,
                                    const TypeHierarchy& hierarchy,
                                    const EmbeddingStore& store,
                                    const InferenceConfig& config) {
  std::set<TypeId> cand(candidates.begin(), candidates.end());
  std::vector<TypeId> path;
  TypeId cur = kRoot;
  for (;;) {
    TypeId best = kRoot;
    double best_score = 0;
    for (TypeId child : hierarchy.children(cur)) {
      if (!cand.count(child)) continue;
      double s = dot(mention_vec, store.type(child));
      if (best == kRoot || s > best_score) {
        best = child;
        best_score = s;
      }
    }
    if (best == kRoot) break;  // no candidate children: leaf of candidate subtree
    if (best_score <= config.eta) break;
    path.push_back(best);
    cur = best;
  }
  return path;
}

std::vector<double> embed_unseen_mention(const std::vector<std::string>& features,
                                         const FeatureVocabulary& vocab,
                                         const EmbeddingStore& store,
                                         const InferenceConfig& config) {
  config.validate();
  std::set<int> ids;
  for (const auto& f : features) {
    auto it = vocab.index.find(f);
    if (it != vocab.index.end()) ids.insert(it->second);
  }
  if (ids.empty())
    throw FormatError("mention has no in-vocabulary features, cannot embed");
  std::vector<double> vec(store.dim, 0.0);
  for (int j : ids) {
    auto cj = store.feature(j);
    for (int x = 0; x < store.dim; ++x) vec[x] += cj[x];
  }
  if (config.unseen_pooling == "mean")
    for (double& x : vec) x /= static_cast<double>(ids.size());
  return vec;
}

DenoiseResult denoise_corpus(const LabeledCorpus& corpus,
                             const EmbeddingStore& store,
                             const TypeHierarchy& hierarchy,
                             const InferenceConfig& config) {
  if (store.num_mentions != corpus.size())
    throw FormatError("model mention count does not match corpus");
  if (store.num_types != hierarchy.size())
    throw FormatError("model type count does not match hierarchy");
  DenoiseResult result;
  for (int i = 0; i < corpus.size(); ++i) {
    const Mention& m = corpus.mentions[i];
    auto path = infer_type_path(store.mention(i), m.candidates, hierarchy,
                                store, config);
    if (path.empty()) {
      result.dropped_ids.push_back(m.id);
      continue;
    }
    Mention kept = m;
    kept.candidates = path;
    std::sort(kept.candidates.begin(), kept.candidates.end());
    result.corpus.mentions.push_back(std::move(kept));
  }
  return result;
}

}  // namespace ple
