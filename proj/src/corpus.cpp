#include "ple/corpus.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "ple/errors.hpp"

namespace ple {

using nlohmann::json;

namespace {

std::vector<TypeId> to_sorted_ids(const json& names, const TypeHierarchy& hierarchy) {
  std::set<TypeId> ids;
  for (const auto& name : names) ids.insert(hierarchy.id_of(name.get<std::string>()));
  return {ids.begin(), ids.end()};
}

Mention parse_mention(const json& rec, const TypeHierarchy& hierarchy,
                      bool close_candidates, int line_index) {
  Mention m;
  m.id = rec.value("id", line_index);
  m.entity_id = rec.value("entity", "");
  m.doc_id = rec.value("doc", "");
  m.sentence_id = rec.value("sent_id", "");

  if (!rec.contains("tokens") || !rec["tokens"].is_array() || rec["tokens"].empty())
    throw FormatError("mention has no tokens");
  std::vector<std::string> span;
  for (const auto& t : rec["tokens"]) span.push_back(t.get<std::string>());

  std::vector<std::string> sentence;
  if (rec.contains("sentence")) {
    for (const auto& t : rec["sentence"]) sentence.push_back(t.get<std::string>());
    m.start = rec.value("start", 0);
  } else {
    sentence = span;
    m.start = 0;
  }
  m.length = static_cast<int>(span.size());
  if (m.start < 0 || m.start + m.length > static_cast<int>(sentence.size()))
    throw FormatError("mention span outside sentence");
  for (int i = 0; i < m.length; ++i)
    if (sentence[m.start + i] != span[i])
      throw FormatError("mention tokens disagree with sentence at span offset " +
                        std::to_string(i));

  m.head_index = rec.value("head", m.length - 1);
  if (m.head_index < 0 || m.head_index >= m.length)
    throw FormatError("head index out of range");

  m.context.resize(sentence.size());
  for (size_t i = 0; i < sentence.size(); ++i) m.context[i].text = sentence[i];

  auto fill = [&](const char* field, auto&& set_one) {
    if (!rec.contains(field) || rec[field].is_null()) return;
    const auto& arr = rec[field];
    if (arr.size() != sentence.size())
      throw FormatError(std::string(field) + " array length != sentence length");
    for (size_t i = 0; i < arr.size(); ++i)
      if (!arr[i].is_null()) set_one(m.context[i], arr[i]);
  };
  fill("pos", [](TokenRecord& t, const json& v) { t.pos = v.get<std::string>(); });
  fill("brown", [](TokenRecord& t, const json& v) {
    auto bits = v.get<std::string>();
    if (bits.find_first_not_of("01") != std::string::npos)
      throw FormatError("brown path contains non-binary characters");
    t.brown = bits;
  });
  fill("dep", [](TokenRecord& t, const json& v) {
    t.dep_label = v.value("label", "");
    t.dep_gov = v.value("gov", -1);
  });

  if (!rec.contains("candidates") || rec["candidates"].empty())
    throw FormatError("mention has empty candidate set");
  m.candidates = to_sorted_ids(rec["candidates"], hierarchy);
  if (close_candidates) {
    std::set<TypeId> set(m.candidates.begin(), m.candidates.end());
    set = hierarchy.ancestor_closure(set);
    m.candidates.assign(set.begin(), set.end());
  }
  if (rec.contains("gold")) m.gold = to_sorted_ids(rec["gold"], hierarchy);
  return m;
}

}  // namespace

LabeledCorpus load_corpus(const std::string& path, const TypeHierarchy& hierarchy,
                          bool close_candidates) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file: " + path);
  LabeledCorpus corpus;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
      corpus.mentions.push_back(
          parse_mention(rec, hierarchy, close_candidates, lineno - 1));
    } catch (const json::exception& e) {
      throw FormatError(path + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const FormatError& e) {
      throw FormatError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return corpus;
}

void write_corpus(const std::string& path, const LabeledCorpus& corpus,
                  const TypeHierarchy& hierarchy) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write corpus file: " + path);
  for (const Mention& m : corpus.mentions) {
    json rec;
    rec["id"] = m.id;
    if (!m.entity_id.empty()) rec["entity"] = m.entity_id;
    if (!m.doc_id.empty()) rec["doc"] = m.doc_id;
    if (!m.sentence_id.empty()) rec["sent_id"] = m.sentence_id;

    json tokens = json::array();
    for (const auto& t : m.tokens()) tokens.push_back(t.text);
    rec["tokens"] = tokens;
    rec["head"] = m.head_index;

    json sentence = json::array();
    bool any_pos = false, any_dep = false, any_brown = false;
    for (const auto& t : m.context) {
      sentence.push_back(t.text);
      any_pos |= !t.pos.empty();
      any_dep |= !t.dep_label.empty() || t.dep_gov >= 0;
      any_brown |= !t.brown.empty();
    }
    rec["sentence"] = sentence;
    rec["start"] = m.start;
    if (any_pos) {
      json arr = json::array();
      for (const auto& t : m.context)
        arr.push_back(t.pos.empty() ? json() : json(t.pos));
      rec["pos"] = arr;
    }
    if (any_dep) {
      json arr = json::array();
      for (const auto& t : m.context) {
        if (t.dep_label.empty() && t.dep_gov < 0) {
          arr.push_back(json());
        } else {
          json d;
          if (!t.dep_label.empty()) d["label"] = t.dep_label;
          if (t.dep_gov >= 0) d["gov"] = t.dep_gov;
          arr.push_back(d);
        }
      }
      rec["dep"] = arr;
    }
    if (any_brown) {
      json arr = json::array();
      for (const auto& t : m.context)
        arr.push_back(t.brown.empty() ? json() : json(t.brown));
      rec["brown"] = arr;
    }

    json candidates = json::array();
    for (TypeId t : m.candidates) candidates.push_back(hierarchy.name(t));
    rec["candidates"] = candidates;
    if (!m.gold.empty()) {
      json gold = json::array();
      for (TypeId t : m.gold) gold.push_back(hierarchy.name(t));
      rec["gold"] = gold;
    }
    out << rec.dump() << '\n';
  }
}

KBFacts load_kb_facts(const std::string& facts_path, const std::string& type_map_path,
                      const TypeHierarchy& hierarchy) {
  std::unordered_map<std::string, TypeId> type_map;
  if (!type_map_path.empty()) {
    std::ifstream in(type_map_path);
    if (!in) throw IoError("cannot open type map file: " + type_map_path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      auto tab = line.find('\t');
      if (tab == std::string::npos)
        throw FormatError(type_map_path + ":" + std::to_string(lineno) +
                          ": expected kb_type<TAB>target_type");
      std::string kb_type = line.substr(0, tab);
      std::string target = line.substr(tab + 1);
      TypeId id = hierarchy.id_of(target);
      auto [it, inserted] = type_map.emplace(kb_type, id);
      if (!inserted && it->second != id)
        throw FormatError(type_map_path + ":" + std::to_string(lineno) +
                          ": kb type '" + kb_type + "' mapped to two targets");
    }
  }

  std::ifstream in(facts_path);
  if (!in) throw IoError("cannot open kb facts file: " + facts_path);
  KBFacts kb;
  kb.entities_by_type.assign(hierarchy.size(), {});
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw FormatError(facts_path + ":" + std::to_string(lineno) +
                        ": expected entity<TAB>type");
    std::string entity = line.substr(0, tab);
    std::string type_name = line.substr(tab + 1);
    TypeId id;
    if (!type_map.empty()) {
      auto it = type_map.find(type_name);
      if (it == type_map.end()) {
        ++kb.skipped_facts;
        continue;
      }
      id = it->second;
    } else {
      auto found = hierarchy.find(type_name);
      if (!found) {
        ++kb.skipped_facts;
        continue;
      }
      id = *found;
    }
    kb.entities_by_type[id].push_back(entity);
  }
  for (auto& entities : kb.entities_by_type) {
    std::sort(entities.begin(), entities.end());
    entities.erase(std::unique(entities.begin(), entities.end()), entities.end());
  }
  return kb;
}

GroundTruth ground_truth(const LabeledCorpus& corpus) {
  GroundTruth gt;
  for (const Mention& m : corpus.mentions)
    if (!m.gold.empty()) gt[m.id] = {m.gold.begin(), m.gold.end()};
  return gt;
}

}  // namespace ple
