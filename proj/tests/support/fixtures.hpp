#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "ple/corpus.hpp"
#include "ple/hierarchy.hpp"

namespace ple::testing {

// person -> artist -> actor, person -> politician, person -> artist -> singer,
// location -> city
inline TypeHierarchy small_hierarchy() {
  return TypeHierarchy::from_edges({
      {"person", ""},
      {"artist", "person"},
      {"actor", "artist"},
      {"singer", "artist"},
      {"politician", "person"},
      {"location", ""},
      {"city", "location"},
  });
}

inline Mention make_mention(int id, std::vector<std::string> tokens,
                            std::vector<TypeId> candidates,
                            std::string doc = "doc0") {
  Mention m;
  m.id = id;
  m.doc_id = std::move(doc);
  for (auto& t : tokens) {
    TokenRecord rec;
    rec.text = std::move(t);
    m.context.push_back(std::move(rec));
  }
  m.start = 0;
  m.length = static_cast<int>(m.context.size());
  m.head_index = m.length - 1;
  std::sort(candidates.begin(), candidates.end());
  m.candidates = std::move(candidates);
  return m;
}

inline std::string temp_path(const std::string& name) {
  const char* t = std::getenv("TMPDIR");
  return std::string(t ? t : "/tmp") + "/" + name;
}

}  // namespace ple::testing
