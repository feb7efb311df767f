#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ple {

using TypeId = int;

// Sentinel for the synthetic root sitting above all top-level types. The root
// is never embedded, never a candidate, never predicted.
inline constexpr TypeId kRoot = -1;

/// Rooted tree of K target types. Type ids are dense in [0, K).
class TypeHierarchy {
 public:
  // edges are (child_name, parent_name); empty parent name means top-level.
  static TypeHierarchy from_edges(
      const std::vector<std::pair<std::string, std::string>>& edges);

  int size() const { return static_cast<int>(names_.size()); }

  TypeId id_of(std::string_view name) const;  // throws FormatError if unknown
  std::optional<TypeId> find(std::string_view name) const;
  const std::string& name(TypeId t) const { return names_.at(t); }

  TypeId parent(TypeId t) const { return parents_.at(t); }
  const std::vector<TypeId>& children(TypeId t) const {
    return t == kRoot ? top_level_ : children_.at(t);
  }
  int depth(TypeId t) const { return t == kRoot ? 0 : depths_.at(t); }

  /// Ancestors from top level down to t, inclusive (root excluded).
  std::vector<TypeId> path_from_top(TypeId t) const;

  /// Tree shortest-path length between two distinct types.
  int tree_distance(TypeId a, TypeId b) const;

  /// True if the unique tree path between a and b passes through the
  /// synthetic root, i.e. the types live in different top-level subtrees.
  bool path_through_root(TypeId a, TypeId b) const;

  /// Adds every ancestor of every member. Idempotent and monotone.
  std::set<TypeId> ancestor_closure(const std::set<TypeId>& types) const;

  bool is_ancestor(TypeId anc, TypeId t) const;

 private:
  std::vector<std::string> names_;
  std::vector<TypeId> parents_;
  std::vector<std::vector<TypeId>> children_;
  std::vector<TypeId> top_level_;
  std::vector<int> depths_;
  std::unordered_map<std::string, TypeId> index_;
};

/// Parses `child<TAB>parent` lines; empty parent = top level.
TypeHierarchy load_hierarchy(const std::string& path);

}  // namespace ple
