#include "ple/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "ple/errors.hpp"

namespace ple {

Variant parse_variant(const std::string& name) {
  if (name == "ple") return Variant::kPle;
  if (name == "ple-coh") return Variant::kPleCoH;
  if (name == "ple-noco") return Variant::kPleNoCo;
  throw ConfigError("unknown variant '" + name + "' (expected ple|ple-coh|ple-noco)");
}

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::kPle: return "ple";
    case Variant::kPleCoH: return "ple-coh";
    case Variant::kPleNoCo: return "ple-noco";
  }
  return "?";
}

std::vector<Link> build_mention_type_graph(const LabeledCorpus& corpus) {
  std::vector<Link> links;
  for (int i = 0; i < corpus.size(); ++i)
    for (TypeId t : corpus.mentions[i].candidates) links.push_back({i, t, 1.0});
  return links;
}

std::vector<Link> build_mention_feature_graph(const LabeledCorpus& corpus,
                                              const FeatureVocabulary& vocab,
                                              const FeatureConfig& config) {
  std::vector<Link> links;
  for (int i = 0; i < corpus.size(); ++i) {
    std::set<int> ids;
    for (const auto& f : extract_features(corpus.mentions[i], config)) {
      auto it = vocab.index.find(f);
      if (it != vocab.index.end()) ids.insert(it->second);
    }
    for (int j : ids) links.push_back({i, j, 1.0});
  }
  return links;
}

std::vector<Link> build_hierarchy_correlation(const TypeHierarchy& hierarchy) {
  std::vector<Link> links;
  const int k = hierarchy.size();
  for (TypeId a = 0; a < k; ++a)
    for (TypeId b = a + 1; b < k; ++b) {
      if (hierarchy.path_through_root(a, b)) continue;
      int rho = hierarchy.tree_distance(a, b);
      links.push_back({a, b, 1.0 / (1.0 + rho)});
    }
  return links;
}

std::vector<Link> build_kb_correlation(const KBFacts& kb,
                                       const TypeHierarchy& hierarchy) {
  std::vector<Link> links;
  const int k = hierarchy.size();
  if (static_cast<int>(kb.entities_by_type.size()) != k)
    throw FormatError("kb facts sized for a different hierarchy");
  for (TypeId a = 0; a < k; ++a) {
    const auto& ea = kb.entities_by_type[a];
    if (ea.empty()) continue;
    for (TypeId b = a + 1; b < k; ++b) {
      const auto& eb = kb.entities_by_type[b];
      if (eb.empty()) continue;
      std::vector<std::string> common;
      std::set_intersection(ea.begin(), ea.end(), eb.begin(), eb.end(),
                            std::back_inserter(common));
      if (common.empty()) continue;
      double overlap = static_cast<double>(common.size());
      links.push_back({a, b, (overlap / ea.size() + overlap / eb.size()) / 2.0});
    }
  }
  return links;
}

std::vector<double> HeteroGraph::feature_degrees() const {
  std::vector<double> degrees(num_features, 0.0);
  for (const Link& l : mention_feature) degrees[l.dst] += 1.0;
  return degrees;
}

std::vector<double> HeteroGraph::type_degrees() const {
  std::vector<double> degrees(num_types, 0.0);
  for (const Link& l : type_type) {
    degrees[l.src] += 1.0;
    degrees[l.dst] += 1.0;
  }
  return degrees;
}

void HeteroGraph::finalize() {
  candidates_of.assign(num_mentions, {});
  for (const Link& l : mention_type) candidates_of[l.src].push_back(l.dst);
  for (auto& c : candidates_of) std::sort(c.begin(), c.end());

  mf_of_mention.assign(num_mentions, {});
  mf_of_feature.assign(num_features, {});
  for (size_t e = 0; e < mention_feature.size(); ++e) {
    mf_of_mention[mention_feature[e].src].push_back(static_cast<int>(e));
    mf_of_feature[mention_feature[e].dst].push_back(static_cast<int>(e));
  }

  yy_of_type.assign(num_types, {});
  for (size_t e = 0; e < type_type.size(); ++e) {
    yy_of_type[type_type[e].src].push_back(static_cast<int>(e));
    yy_of_type[type_type[e].dst].push_back(static_cast<int>(e));
  }
}

HeteroGraph build_graph(const LabeledCorpus& corpus, const FeatureVocabulary& vocab,
                        const FeatureConfig& config, const TypeHierarchy& hierarchy,
                        const KBFacts* kb, Variant variant) {
  HeteroGraph g;
  g.num_mentions = corpus.size();
  g.num_features = vocab.size();
  g.num_types = hierarchy.size();
  g.mention_type = build_mention_type_graph(corpus);
  g.type_parent.resize(g.num_types);
  for (TypeId t = 0; t < g.num_types; ++t) g.type_parent[t] = hierarchy.parent(t);
  g.mention_feature = build_mention_feature_graph(corpus, vocab, config);
  switch (variant) {
    case Variant::kPle:
      if (!kb) throw ConfigError("variant 'ple' needs kb facts for G_YY");
      g.type_type = build_kb_correlation(*kb, hierarchy);
      break;
    case Variant::kPleCoH:
      g.type_type = build_hierarchy_correlation(hierarchy);
      break;
    case Variant::kPleNoCo:
      break;
  }
  g.finalize();
  return g;
}

void save_links(const std::string& path, const std::vector<Link>& links) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write edge list: " + path);
  char buf[64];
  for (const Link& l : links) {
    std::snprintf(buf, sizeof(buf), "%.12g", l.weight);
    out << l.src << '\t' << l.dst << '\t' << buf << '\n';
  }
}

std::vector<Link> load_links(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open edge list: " + path);
  std::vector<Link> links;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    Link l;
    if (!(ss >> l.src >> l.dst >> l.weight))
      throw FormatError(path + ":" + std::to_string(lineno) +
                        ": expected src<TAB>dst<TAB>weight");
    links.push_back(l);
  }
  return links;
}

}  // namespace ple
