#pragma once

#include <map>
#include <set>
#include <string>

#include "ple/hierarchy.hpp"

namespace ple {

using TypeSets = std::map<int, std::set<TypeId>>;  // mention id -> type set

struct Prf {
  double precision = 0, recall = 0, f1 = 0;
};

struct EvalReport {
  double strict = 0;
  Prf macro;
  Prf micro;
  std::map<int, double> accuracy_by_level;  // hierarchy depth -> accuracy
};

/// Exact set equality, averaged over mentions.
double strict_accuracy(const TypeSets& predictions, const TypeSets& gold);

/// Per-mention averaged precision/recall. Empty prediction scores precision 0
/// unless gold is also empty.
Prf loose_macro(const TypeSets& predictions, const TypeSets& gold);

/// Corpus-pooled counts.
Prf loose_micro(const TypeSets& predictions, const TypeSets& gold);

EvalReport evaluate(const TypeSets& predictions, const TypeSets& gold,
                    const TypeHierarchy& hierarchy);

std::string format_report(const EvalReport& report);
void save_report(const std::string& path, const EvalReport& report);

}  // namespace ple
