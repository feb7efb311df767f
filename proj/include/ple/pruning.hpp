#pragma once

#include <string>

#include "ple/corpus.hpp"
#include "ple/hierarchy.hpp"

namespace ple {

struct PruneResult {
  LabeledCorpus corpus;
  int discarded = 0;  // mentions whose candidate set became empty
};

/// Removes every group of >=2 sibling candidate types (and their candidate
/// descendants). Top-level types are siblings under the synthetic root.
PruneResult sib_prune(const LabeledCorpus& corpus, const TypeHierarchy& hierarchy);

/// Removes candidate types occurring on only one mention within a document.
/// Throws FormatError if any mention lacks a document id.
PruneResult min_prune(const LabeledCorpus& corpus);

/// Sib pruning followed by Min pruning.
PruneResult all_prune(const LabeledCorpus& corpus, const TypeHierarchy& hierarchy);

struct NoiseStats {
  int mentions = 0;
  int with_sibling_types = 0;  // candidate set contains >=2 siblings
  int deleted_sib = 0, deleted_min = 0, deleted_all = 0;

  double sibling_fraction() const {
    return mentions ? static_cast<double>(with_sibling_types) / mentions : 0.0;
  }
  double deleted_fraction(int deleted) const {
    return mentions ? static_cast<double>(deleted) / mentions : 0.0;
  }
};

NoiseStats noise_stats(const LabeledCorpus& corpus, const TypeHierarchy& hierarchy);

std::string format_noise_stats(const NoiseStats& stats);

}  // namespace ple
