#include "ple/hierarchy.hpp"

#include <algorithm>
#include <fstream>

#include "ple/errors.hpp"

namespace ple {

TypeHierarchy TypeHierarchy::from_edges(
    const std::vector<std::pair<std::string, std::string>>& edges) {
  TypeHierarchy h;
  std::unordered_map<std::string, std::string> parent_name;
  for (const auto& [child, parent] : edges) {
    if (child.empty()) throw FormatError("hierarchy: empty child name");
    if (parent_name.count(child))
      throw FormatError("hierarchy: duplicate child '" + child + "'");
    parent_name[child] = parent;
    if (h.index_.emplace(child, static_cast<TypeId>(h.names_.size())).second)
      h.names_.push_back(child);
  }
  // Parents mentioned only on the right-hand side become top-level types.
  for (const auto& [child, parent] : edges) {
    (void)child;
    if (parent.empty()) continue;
    if (h.index_.emplace(parent, static_cast<TypeId>(h.names_.size())).second)
      h.names_.push_back(parent);
  }

  const int k = h.size();
  h.parents_.assign(k, kRoot);
  h.children_.assign(k, {});
  for (const auto& [child, parent] : edges) {
    if (parent.empty()) continue;
    h.parents_[h.index_.at(child)] = h.index_.at(parent);
  }
  for (TypeId t = 0; t < k; ++t) {
    if (h.parents_[t] == kRoot)
      h.top_level_.push_back(t);
    else
      h.children_[h.parents_[t]].push_back(t);
  }

  // Depth assignment doubles as cycle detection.
  h.depths_.assign(k, 0);
  for (TypeId t = 0; t < k; ++t) {
    int depth = 1;
    TypeId cur = t;
    while (h.parents_[cur] != kRoot) {
      cur = h.parents_[cur];
      if (++depth > k)
        throw FormatError("hierarchy: cycle involving type '" + h.names_[t] + "'");
    }
    h.depths_[t] = depth;
  }
  return h;
}

TypeId TypeHierarchy::id_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end())
    throw FormatError("unknown type name '" + std::string(name) + "'");
  return it->second;
}

std::optional<TypeId> TypeHierarchy::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<TypeId> TypeHierarchy::path_from_top(TypeId t) const {
  std::vector<TypeId> path;
  for (TypeId cur = t; cur != kRoot; cur = parents_.at(cur)) path.push_back(cur);
  std::reverse(path.begin(), path.end());
  return path;
}

int TypeHierarchy::tree_distance(TypeId a, TypeId b) const {
  TypeId x = a, y = b;
  while (depth(x) > depth(y)) x = parents_.at(x);
  while (depth(y) > depth(x)) y = parents_.at(y);
  while (x != y) {
    x = x == kRoot ? kRoot : parents_.at(x);
    y = y == kRoot ? kRoot : parents_.at(y);
  }
  // x is now the lowest common ancestor (possibly the root).
  return depth(a) + depth(b) - 2 * depth(x);
}

bool TypeHierarchy::path_through_root(TypeId a, TypeId b) const {
  TypeId x = a, y = b;
  while (depth(x) > 1) x = parents_.at(x);
  while (depth(y) > 1) y = parents_.at(y);
  return x != y;  // different top-level subtrees
}

std::set<TypeId> TypeHierarchy::ancestor_closure(const std::set<TypeId>& types) const {
  std::set<TypeId> closed;
  for (TypeId t : types)
    for (TypeId cur = t; cur != kRoot; cur = parents_.at(cur)) closed.insert(cur);
  return closed;
}

bool TypeHierarchy::is_ancestor(TypeId anc, TypeId t) const {
  for (TypeId cur = parents_.at(t); cur != kRoot; cur = parents_.at(cur))
    if (cur == anc) return true;
  return false;
}

TypeHierarchy load_hierarchy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open hierarchy file: " + path);
  std::vector<std::pair<std::string, std::string>> edges;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    std::string child = tab == std::string::npos ? line : line.substr(0, tab);
    std::string parent = tab == std::string::npos ? "" : line.substr(tab + 1);
    if (child.empty())
      throw FormatError(path + ":" + std::to_string(lineno) + ": empty child");
    edges.emplace_back(child, parent);
  }
  if (edges.empty()) throw FormatError("hierarchy file is empty: " + path);
  return TypeHierarchy::from_edges(edges);
}

}  // namespace ple
