#include "ple/pruning.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "ple/errors.hpp"

namespace ple {

namespace {

// Removes the marked types plus their candidate descendants from one set.
std::vector<TypeId> drop_with_descendants(const std::vector<TypeId>& candidates,
                                          const std::set<TypeId>& marked,
                                          const TypeHierarchy& hierarchy) {
  std::vector<TypeId> kept;
  for (TypeId t : candidates) {
    bool removed = marked.count(t) > 0;
    if (!removed)
      for (TypeId anc : marked)
        if (hierarchy.is_ancestor(anc, t)) {
          removed = true;
          break;
        }
    if (!removed) kept.push_back(t);
  }
  return kept;
}

}  // namespace

PruneResult sib_prune(const LabeledCorpus& corpus, const TypeHierarchy& hierarchy) {
  PruneResult result;
  for (const Mention& m : corpus.mentions) {
    // Group candidates by parent; the synthetic root groups top-level types.
    std::map<TypeId, std::vector<TypeId>> by_parent;
    for (TypeId t : m.candidates) by_parent[hierarchy.parent(t)].push_back(t);
    std::set<TypeId> marked;
    for (const auto& [parent, group] : by_parent)
      if (group.size() >= 2) marked.insert(group.begin(), group.end());
    auto kept = drop_with_descendants(m.candidates, marked, hierarchy);
    if (kept.empty()) {
      ++result.discarded;
      continue;
    }
    Mention pruned = m;
    pruned.candidates = std::move(kept);
    result.corpus.mentions.push_back(std::move(pruned));
  }
  return result;
}

PruneResult min_prune(const LabeledCorpus& corpus) {
  for (const Mention& m : corpus.mentions)
    if (m.doc_id.empty())
      throw FormatError("min pruning needs document ids (mention " +
                        std::to_string(m.id) + " has none)");

  // Document-level occurrence counts, one per mention carrying the type.
  std::map<std::string, std::map<TypeId, int>> doc_counts;
  for (const Mention& m : corpus.mentions)
    for (TypeId t : m.candidates) ++doc_counts[m.doc_id][t];

  PruneResult result;
  for (const Mention& m : corpus.mentions) {
    const auto& counts = doc_counts[m.doc_id];
    std::vector<TypeId> kept;
    for (TypeId t : m.candidates)
      if (counts.at(t) > 1) kept.push_back(t);
    if (kept.empty()) {
      ++result.discarded;
      continue;
    }
    Mention pruned = m;
    pruned.candidates = std::move(kept);
    result.corpus.mentions.push_back(std::move(pruned));
  }
  return result;
}

PruneResult all_prune(const LabeledCorpus& corpus, const TypeHierarchy& hierarchy) {
  PruneResult sib = sib_prune(corpus, hierarchy);
  PruneResult min = min_prune(sib.corpus);
  min.discarded += sib.discarded;
  return min;
}

NoiseStats noise_stats(const LabeledCorpus& corpus, const TypeHierarchy& hierarchy) {
  NoiseStats stats;
  stats.mentions = corpus.size();
  for (const Mention& m : corpus.mentions) {
    std::map<TypeId, int> per_parent;
    bool has_siblings = false;
    for (TypeId t : m.candidates)
      if (++per_parent[hierarchy.parent(t)] >= 2) has_siblings = true;
    if (has_siblings) ++stats.with_sibling_types;
  }
  stats.deleted_sib = sib_prune(corpus, hierarchy).discarded;
  bool has_docs = std::all_of(corpus.mentions.begin(), corpus.mentions.end(),
                              [](const Mention& m) { return !m.doc_id.empty(); });
  if (has_docs && stats.mentions > 0) {
    stats.deleted_min = min_prune(corpus).discarded;
    stats.deleted_all = all_prune(corpus, hierarchy).discarded;
  } else {
    stats.deleted_min = -1;  // not computable without document ids
    stats.deleted_all = -1;
  }
  return stats;
}

std::string format_noise_stats(const NoiseStats& stats) {
  std::ostringstream out;
  auto pct = [&](double x) {
    std::ostringstream s;
    s.precision(2);
    s << std::fixed << 100.0 * x << "%";
    return s.str();
  };
  out << "mentions:              " << stats.mentions << "\n";
  out << "with sibling types:    " << pct(stats.sibling_fraction()) << "\n";
  out << "deleted by Sib:        " << pct(stats.deleted_fraction(stats.deleted_sib)) << "\n";
  if (stats.deleted_min >= 0) {
    out << "deleted by Min:        " << pct(stats.deleted_fraction(stats.deleted_min)) << "\n";
    out << "deleted by All:        " << pct(stats.deleted_fraction(stats.deleted_all)) << "\n";
  } else {
    out << "deleted by Min:        n/a (no document ids)\n";
    out << "deleted by All:        n/a (no document ids)\n";
  }
  return out.str();
}

}  // namespace ple
