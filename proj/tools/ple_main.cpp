// Pipeline driver: ingestion -> features -> graph -> training -> inference ->
// denoising -> evaluation, with every stage usable standalone. Artifacts are
// plain files so chained stages and the one-shot `pipeline` command produce
// byte-identical output.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ple/corpus.hpp"
#include "ple/errors.hpp"
#include "ple/features.hpp"
#include "ple/graph.hpp"
#include "ple/hierarchy.hpp"
#include "ple/inference.hpp"
#include "ple/metrics.hpp"
#include "ple/pruning.hpp"
#include "ple/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ple;

namespace {

bool verbose() {
  const char* v = std::getenv("PLE_VERBOSE");
  return v && *v && std::string(v) != "0";
}

struct Options {
  std::string corpus, hierarchy, kb_facts, type_map, config;
  std::string variant = "ple";
  unsigned seed = 1;
  std::string out_dir = "out";
  bool deterministic = true;
  int threads = 1;
  bool seed_set = false, threads_set = false;

  // subcommand extras
  std::string model, vocab, predictions, rule = "all";
  int iters = 1;

  TrainingConfig training;
  InferenceConfig inference;
  FeatureConfig features;
};

void apply_config_file(Options& opt) {
  if (opt.config.empty()) return;
  std::ifstream in(opt.config);
  if (!in) throw IoError("cannot open config file: " + opt.config);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FormatError(opt.config + ": " + e.what());
  }
  try {
    if (j.contains("training")) {
      const json& t = j["training"];
      TrainingConfig& c = opt.training;
      c.dim = t.value("dim", c.dim);
      c.negatives = t.value("negatives", c.negatives);
      c.lambda = t.value("lambda", c.lambda);
      c.alpha = t.value("alpha", c.alpha);
      c.max_iters = t.value("max_iters", c.max_iters);
      c.tol = t.value("tol", c.tol);
      c.init_scale = t.value("init_scale", c.init_scale);
      c.seed = t.value("seed", c.seed);
      c.threads = t.value("threads", c.threads);
      if (t.contains("variant")) opt.variant = t["variant"].get<std::string>();
    }
    if (j.contains("inference")) {
      const json& t = j["inference"];
      opt.inference.eta = t.value("eta", opt.inference.eta);
      opt.inference.unseen_pooling =
          t.value("unseen_pooling", opt.inference.unseen_pooling);
    }
    if (j.contains("features")) {
      const json& t = j["features"];
      FeatureConfig& c = opt.features;
      c.context_window = t.value("context_window", c.context_window);
      c.min_count = t.value("min_count", c.min_count);
      if (t.contains("brown_prefix_lengths"))
        c.brown_prefix_lengths =
            t["brown_prefix_lengths"].get<std::vector<int>>();
      if (t.contains("enabled_families"))
        for (const auto& f : t["enabled_families"])
          c.enabled_families.insert(f.get<std::string>());
    }
  } catch (const json::exception& e) {
    throw FormatError(opt.config + ": " + e.what());
  }
}

// Flags given on the command line win over the config file.
void finish_options(Options& opt) {
  if (opt.seed_set) opt.training.seed = opt.seed;
  if (opt.threads_set) opt.training.threads = opt.threads;
  opt.training.variant = parse_variant(opt.variant);
  opt.training.validate();
  opt.inference.validate();
}

void write_effective_config(const Options& opt) {
  json j;
  j["variant"] = opt.variant;
  j["deterministic"] = opt.deterministic;
  json t;
  t["dim"] = opt.training.dim;
  t["negatives"] = opt.training.negatives;
  t["lambda"] = opt.training.lambda;
  t["alpha"] = opt.training.alpha;
  t["max_iters"] = opt.training.max_iters;
  t["tol"] = opt.training.tol;
  t["init_scale"] = opt.training.init_scale;
  t["seed"] = opt.training.seed;
  t["threads"] = opt.training.threads;
  j["training"] = t;
  j["inference"] = {{"eta", opt.inference.eta},
                    {"unseen_pooling", opt.inference.unseen_pooling}};
  json f;
  f["context_window"] = opt.features.context_window;
  f["min_count"] = opt.features.min_count;
  f["brown_prefix_lengths"] = opt.features.brown_prefix_lengths;
  f["enabled_families"] = opt.features.enabled_families;
  j["features"] = f;
  std::ofstream out(fs::path(opt.out_dir) / "effective_config.json");
  if (!out) throw IoError("cannot write effective config in " + opt.out_dir);
  out << j.dump(2) << '\n';
}

TypeHierarchy need_hierarchy(const Options& opt) {
  if (opt.hierarchy.empty()) throw ConfigError("--hierarchy is required");
  return load_hierarchy(opt.hierarchy);
}

LabeledCorpus need_corpus(const Options& opt, const TypeHierarchy& h) {
  if (opt.corpus.empty()) throw ConfigError("--corpus is required");
  return load_corpus(opt.corpus, h);
}

const KBFacts* maybe_kb(const Options& opt, const TypeHierarchy& h, KBFacts& kb) {
  if (opt.kb_facts.empty()) return nullptr;
  kb = load_kb_facts(opt.kb_facts, opt.type_map, h);
  return &kb;
}

std::string out_path(const Options& opt, const char* name) {
  return (fs::path(opt.out_dir) / name).string();
}

// ------------------------------------------------------------------- stages

std::string stage_extract_features(const Options& opt) {
  auto h = need_hierarchy(opt);
  auto corpus = need_corpus(opt, h);
  auto vocab = build_vocabulary(corpus, opt.features);
  auto path = out_path(opt, "features.tsv");
  save_vocabulary(path, vocab);
  if (verbose())
    std::cerr << "features: " << vocab.size() << " kept\n";
  return path;
}

HeteroGraph assemble_graph(const Options& opt, const LabeledCorpus& corpus,
                           const TypeHierarchy& h, const FeatureVocabulary& vocab) {
  KBFacts kb;
  const KBFacts* kb_ptr = maybe_kb(opt, h, kb);
  return build_graph(corpus, vocab, opt.features, h, kb_ptr,
                     opt.training.variant);
}

FeatureVocabulary need_vocab(const Options& opt, const LabeledCorpus& corpus) {
  if (!opt.vocab.empty()) return load_vocabulary(opt.vocab);
  return build_vocabulary(corpus, opt.features);
}

void stage_build_graph(const Options& opt) {
  auto h = need_hierarchy(opt);
  auto corpus = need_corpus(opt, h);
  auto vocab = need_vocab(opt, corpus);
  auto graph = assemble_graph(opt, corpus, h, vocab);
  save_links(out_path(opt, "mention_type.tsv"), graph.mention_type);
  save_links(out_path(opt, "mention_feature.tsv"), graph.mention_feature);
  save_links(out_path(opt, "type_type.tsv"), graph.type_type);
  if (verbose())
    std::cerr << "graph: " << graph.total_links() << " links\n";
}

std::string stage_train(const Options& opt, const LabeledCorpus& corpus,
                        const TypeHierarchy& h, const FeatureVocabulary& vocab,
                        const char* model_name) {
  auto graph = assemble_graph(opt, corpus, h, vocab);
  auto result = train(graph, opt.training);
  if (verbose())
    for (const auto& r : result.log)
      std::fprintf(stderr, "iter %d O %.6g\n", r.iter, r.o);
  auto path = out_path(opt, model_name);
  save_model(path, result.store, opt.training.variant, opt.training.seed);
  save_train_log(out_path(opt, "train_log.csv"), result.log);
  return path;
}

TypeSets infer_all(const LabeledCorpus& corpus, const EmbeddingStore& store,
                   const TypeHierarchy& h, const InferenceConfig& icfg,
                   const std::vector<std::vector<TypeId>>* candidate_override =
                       nullptr) {
  if (store.num_mentions != corpus.size())
    throw FormatError("model was trained on a different corpus size");
  TypeSets pred;
  for (int i = 0; i < corpus.size(); ++i) {
    const auto& cands = candidate_override ? (*candidate_override)[i]
                                           : corpus.mentions[i].candidates;
    auto path = infer_type_path(store.mention(i), cands, h, store, icfg);
    pred[corpus.mentions[i].id] = {path.begin(), path.end()};
  }
  return pred;
}

void save_predictions(const std::string& path, const TypeSets& pred,
                      const TypeHierarchy& h) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write predictions: " + path);
  for (const auto& [id, types] : pred) {
    out << id << '\t';
    bool first = true;
    for (TypeId t : types) {
      if (!first) out << ',';
      out << h.name(t);
      first = false;
    }
    out << '\n';
  }
}

TypeSets load_predictions(const std::string& path, const TypeHierarchy& h) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open predictions: " + path);
  TypeSets pred;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw FormatError(path + ":" + std::to_string(lineno) + ": expected id<TAB>types");
    int id = 0;
    try {
      id = std::stoi(line.substr(0, tab));
    } catch (const std::exception&) {
      throw FormatError(path + ":" + std::to_string(lineno) + ": bad mention id");
    }
    std::set<TypeId> types;
    std::stringstream names(line.substr(tab + 1));
    std::string name;
    while (std::getline(names, name, ','))
      if (!name.empty()) types.insert(h.id_of(name));
    pred[id] = std::move(types);
  }
  return pred;
}

std::string stage_infer(const Options& opt, const LabeledCorpus& corpus,
                        const TypeHierarchy& h, const EmbeddingStore& store) {
  auto pred = infer_all(corpus, store, h, opt.inference);
  auto path = out_path(opt, "predictions.tsv");
  save_predictions(path, pred, h);
  return path;
}

std::string stage_denoise(const Options& opt, const LabeledCorpus& corpus,
                          const TypeHierarchy& h, const EmbeddingStore& store) {
  auto result = denoise_corpus(corpus, store, h, opt.inference);
  auto path = out_path(opt, "denoised.jsonl");
  write_corpus(path, result.corpus, h);
  std::ofstream out(out_path(opt, "dropped.tsv"));
  if (!out) throw IoError("cannot write dropped mention ids");
  for (int id : result.dropped_ids) out << id << '\n';
  if (verbose())
    std::cerr << "denoise: dropped " << result.dropped_ids.size() << " mentions\n";
  return path;
}

void stage_evaluate(const Options& opt, const LabeledCorpus& corpus,
                    const TypeHierarchy& h, const TypeSets& pred_all) {
  auto gold = ground_truth(corpus);
  if (gold.empty()) throw FormatError("corpus carries no gold labels");
  TypeSets pred;
  for (const auto& [id, types] : gold) {
    auto it = pred_all.find(id);
    pred[id] = it == pred_all.end() ? std::set<TypeId>{} : it->second;
  }
  auto report = evaluate(pred, gold, h);
  save_report(out_path(opt, "report.txt"), report);
  std::cout << format_report(report);
}

EmbeddingStore need_model(const Options& opt) {
  if (opt.model.empty()) throw ConfigError("--model is required");
  return load_model(opt.model);
}

// ------------------------------------------------------------- subcommands

int run_pipeline(Options opt) {
  auto h = need_hierarchy(opt);
  auto corpus = need_corpus(opt, h);
  auto vocab = build_vocabulary(corpus, opt.features);
  save_vocabulary(out_path(opt, "features.tsv"), vocab);
  auto graph = assemble_graph(opt, corpus, h, vocab);
  save_links(out_path(opt, "mention_type.tsv"), graph.mention_type);
  save_links(out_path(opt, "mention_feature.tsv"), graph.mention_feature);
  save_links(out_path(opt, "type_type.tsv"), graph.type_type);
  stage_train(opt, corpus, h, vocab, "model.tsv");
  auto store = load_model(out_path(opt, "model.tsv"));
  auto pred = infer_all(corpus, store, h, opt.inference);
  save_predictions(out_path(opt, "predictions.tsv"), pred, h);
  stage_denoise(opt, corpus, h, store);
  stage_evaluate(opt, corpus, h, pred);
  return 0;
}

int run_retrain_loop(Options opt) {
  if (opt.iters < 1) throw ConfigError("--iters must be >= 1");
  auto h = need_hierarchy(opt);
  auto corpus = need_corpus(opt, h);
  auto vocab = build_vocabulary(corpus, opt.features);
  save_vocabulary(out_path(opt, "features.tsv"), vocab);

  // Inference always happens within the original candidate sets, no matter
  // how the working labels shrink between rounds.
  std::vector<std::vector<TypeId>> original(corpus.size());
  for (int i = 0; i < corpus.size(); ++i)
    original[i] = corpus.mentions[i].candidates;

  LabeledCorpus working = corpus;
  TypeSets pred;
  for (int t = 1; t <= opt.iters; ++t) {
    std::string model_name = "model_iter" + std::to_string(t) + ".tsv";
    stage_train(opt, working, h, vocab, model_name.c_str());
    auto store = load_model(out_path(opt, model_name.c_str()));
    pred = infer_all(working, store, h, opt.inference, &original);
    for (int i = 0; i < working.size(); ++i) {
      const auto& p = pred[working.mentions[i].id];
      working.mentions[i].candidates.assign(p.begin(), p.end());
    }
    if (verbose()) std::cerr << "retrain round " << t << " done\n";
  }
  save_predictions(out_path(opt, "predictions.tsv"), pred, h);
  write_corpus(out_path(opt, "denoised.jsonl"), working, h);
  stage_evaluate(opt, corpus, h, pred);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"Corpus denoiser for distantly-supervised entity typing"};
  app.require_subcommand(1);

  app.add_option("--corpus", opt.corpus, "mention corpus, line-delimited JSON");
  app.add_option("--hierarchy", opt.hierarchy, "type hierarchy TSV");
  app.add_option("--kb-facts", opt.kb_facts, "entity-type facts TSV");
  app.add_option("--type-map", opt.type_map, "KB-type to target-type map TSV");
  app.add_option("--config", opt.config, "JSON configuration file");
  app.add_option("--variant", opt.variant, "ple | ple-coh | ple-noco");
  auto* seed_opt = app.add_option("--seed", opt.seed, "training seed");
  app.add_option("--out-dir", opt.out_dir, "artifact directory");
  app.add_flag("--deterministic,!--no-deterministic", opt.deterministic,
               "single-threaded reproducible mode (default on)");
  auto* threads_opt = app.add_option("--threads", opt.threads, "worker threads");

  auto* c_feat = app.add_subcommand("extract-features", "build the feature vocabulary");
  auto* c_graph = app.add_subcommand("build-graph", "dump the three edge lists");
  auto* c_train = app.add_subcommand("train", "learn embeddings");
  auto* c_infer = app.add_subcommand("infer", "predict one type-path per mention");
  auto* c_denoise = app.add_subcommand("denoise", "replace candidate sets by inferred paths");
  auto* c_prune = app.add_subcommand("prune", "heuristic candidate deletion");
  auto* c_stats = app.add_subcommand("stats", "label noise statistics");
  auto* c_eval = app.add_subcommand("evaluate", "score predictions against gold labels");
  auto* c_pipe = app.add_subcommand("pipeline", "run every stage in order");
  auto* c_loop = app.add_subcommand("retrain-loop", "alternate training and denoising");

  for (auto* c : {c_graph, c_train})
    c->add_option("--vocab", opt.vocab, "feature vocabulary TSV (default: rebuild)");
  for (auto* c : {c_infer, c_denoise})
    c->add_option("--model", opt.model, "trained model file")->required();
  c_eval->add_option("--predictions", opt.predictions, "predictions TSV")->required();
  c_prune->add_option("--rule", opt.rule, "sib | min | all");
  c_loop->add_option("--iters", opt.iters, "number of retraining rounds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 4;
  }

  try {
    apply_config_file(opt);
    opt.seed_set = seed_opt->count() > 0;
    opt.threads_set = threads_opt->count() > 0;
    finish_options(opt);
    fs::create_directories(opt.out_dir);
    write_effective_config(opt);

    if (c_feat->parsed()) {
      stage_extract_features(opt);
    } else if (c_graph->parsed()) {
      stage_build_graph(opt);
    } else if (c_train->parsed()) {
      auto h = need_hierarchy(opt);
      auto corpus = need_corpus(opt, h);
      auto vocab = need_vocab(opt, corpus);
      stage_train(opt, corpus, h, vocab, "model.tsv");
    } else if (c_infer->parsed()) {
      auto h = need_hierarchy(opt);
      auto corpus = need_corpus(opt, h);
      auto store = need_model(opt);
      stage_infer(opt, corpus, h, store);
    } else if (c_denoise->parsed()) {
      auto h = need_hierarchy(opt);
      auto corpus = need_corpus(opt, h);
      auto store = need_model(opt);
      stage_denoise(opt, corpus, h, store);
    } else if (c_prune->parsed()) {
      auto h = need_hierarchy(opt);
      auto corpus = need_corpus(opt, h);
      PruneResult result;
      if (opt.rule == "sib") result = sib_prune(corpus, h);
      else if (opt.rule == "min") result = min_prune(corpus);
      else if (opt.rule == "all") result = all_prune(corpus, h);
      else throw ConfigError("unknown prune rule '" + opt.rule + "'");
      write_corpus(out_path(opt, "pruned.jsonl"), result.corpus, h);
      std::cout << "discarded " << result.discarded << " mentions\n";
    } else if (c_stats->parsed()) {
      auto h = need_hierarchy(opt);
      auto corpus = need_corpus(opt, h);
      auto stats = noise_stats(corpus, h);
      auto text = format_noise_stats(stats);
      std::ofstream out(out_path(opt, "noise_stats.txt"));
      if (!out) throw IoError("cannot write noise stats");
      out << text;
      std::cout << text;
    } else if (c_eval->parsed()) {
      auto h = need_hierarchy(opt);
      auto corpus = need_corpus(opt, h);
      stage_evaluate(opt, corpus, h, load_predictions(opt.predictions, h));
    } else if (c_pipe->parsed()) {
      return run_pipeline(opt);
    } else if (c_loop->parsed()) {
      return run_retrain_loop(opt);
    }
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
