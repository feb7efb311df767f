#include "ple/features.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "ple/errors.hpp"

namespace ple {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string join(std::span<const TokenRecord> tokens, int begin, int end) {
  std::string out;
  for (int i = begin; i < end; ++i) {
    if (!out.empty()) out += ' ';
    out += tokens[i].text;
  }
  return out;
}

}  // namespace

std::string word_shape(std::string_view token) {
  std::string shape;
  for (unsigned char c : token) {
    char sym;
    if (std::isupper(c))
      sym = 'A';
    else if (std::islower(c))
      sym = 'a';
    else if (std::isdigit(c))
      sym = '0';
    else
      sym = '-';
    if (shape.empty() || shape.back() != sym) shape += sym;
  }
  return shape;
}

std::vector<std::string> char_trigrams(std::string_view head) {
  std::string padded = ":" + lower(head) + ":";
  std::vector<std::string> grams;
  for (size_t i = 0; i + 3 <= padded.size(); ++i) grams.push_back(padded.substr(i, 3));
  return grams;
}

std::vector<std::string> extract_features(const Mention& mention,
                                          const FeatureConfig& config) {
  std::vector<std::string> out;
  auto span = mention.tokens();
  const TokenRecord& head = mention.head();

  if (config.family_on("head")) out.push_back("HEAD_" + head.text);

  if (config.family_on("token"))
    for (const auto& t : span) out.push_back("TKN_" + t.text);

  if (config.family_on("pos"))
    for (const auto& t : span)
      if (!t.pos.empty()) out.push_back("POS_" + t.pos);

  if (config.family_on("trigram"))
    for (const auto& g : char_trigrams(head.text)) out.push_back("TRI_" + g);

  if (config.family_on("shape"))
    for (const auto& t : span) out.push_back("SHAPE_" + word_shape(t.text));

  if (config.family_on("length")) {
    int n = mention.length;
    out.push_back(n > 10 ? "LEN_10+" : "LEN_" + std::to_string(n));
  }

  if (config.family_on("context")) {
    int ctx_len = static_cast<int>(mention.context.size());
    int before_lo = std::max(0, mention.start - config.context_window);
    int after_hi = std::min(ctx_len, mention.start + mention.length + config.context_window);
    std::span<const TokenRecord> ctx(mention.context);
    for (int i = before_lo; i < mention.start; ++i) {
      out.push_back("CXT_B:" + ctx[i].text);
      if (i + 1 < mention.start) out.push_back("CXT_B:" + join(ctx, i, i + 2));
    }
    for (int i = mention.start + mention.length; i < after_hi; ++i) {
      out.push_back("CXT_A:" + ctx[i].text);
      if (i + 1 < after_hi) out.push_back("CXT_A:" + join(ctx, i, i + 2));
    }
  }

  if (config.family_on("brown") && !head.brown.empty()) {
    for (int p : config.brown_prefix_lengths)
      if (p > 0 && p <= static_cast<int>(head.brown.size()))
        out.push_back("BROWN_" + std::to_string(p) + "_" + head.brown.substr(0, p));
  }

  if (config.family_on("dep")) {
    if (!head.dep_label.empty()) out.push_back("GOV:" + head.dep_label);
    if (head.dep_gov >= 0 &&
        head.dep_gov < static_cast<int>(mention.context.size()))
      out.push_back("GOV:" + lower(mention.context[head.dep_gov].text));
  }

  return out;
}

FeatureVocabulary build_vocabulary(const LabeledCorpus& corpus,
                                   const FeatureConfig& config) {
  std::map<std::string, long> counts;  // ordered: ids come out lexicographic
  for (const Mention& m : corpus.mentions)
    for (const auto& f : extract_features(m, config)) ++counts[f];

  FeatureVocabulary vocab;
  for (const auto& [str, count] : counts) {
    if (count < config.min_count) continue;
    vocab.index.emplace(str, static_cast<int>(vocab.strings.size()));
    vocab.strings.push_back(str);
    vocab.counts.push_back(count);
  }
  if (vocab.strings.empty())
    throw FormatError("feature vocabulary is empty after min_count filtering");
  return vocab;
}

void save_vocabulary(const std::string& path, const FeatureVocabulary& vocab) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write vocabulary file: " + path);
  for (int j = 0; j < vocab.size(); ++j)
    out << j << '\t' << vocab.strings[j] << '\t' << vocab.counts[j] << '\n';
}

FeatureVocabulary load_vocabulary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open vocabulary file: " + path);
  FeatureVocabulary vocab;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    // fields are id<TAB>string<TAB>count
    auto t1 = line.find('\t');
    auto t2 = line.rfind('\t');
    if (t1 == std::string::npos || t2 == t1)
      throw FormatError(path + ":" + std::to_string(lineno) + ": expected 3 fields");
    int id = std::stoi(line.substr(0, t1));
    std::string str = line.substr(t1 + 1, t2 - t1 - 1);
    long count = std::stol(line.substr(t2 + 1));
    if (id != vocab.size())
      throw FormatError(path + ":" + std::to_string(lineno) + ": ids not dense");
    vocab.index.emplace(str, id);
    vocab.strings.push_back(str);
    vocab.counts.push_back(count);
  }
  if (vocab.strings.empty()) throw FormatError("vocabulary file is empty: " + path);
  return vocab;
}

}  // namespace ple
