#pragma once

#include <random>
#include <span>
#include <string>
#include <vector>

#include "ple/graph.hpp"

namespace ple {

struct TrainingConfig {
  int dim = 50;             // d
  int negatives = 5;        // Z
  double lambda = 1e-4;     // l2 regularization
  double alpha = 0.25;      // learning rate
  int max_iters = 50;       // T
  double tol = 1e-4;        // relative objective change
  unsigned seed = 1;
  Variant variant = Variant::kPle;
  double init_scale = 0.01;
  int threads = 1;          // >1 waives determinism

  void validate() const;  // throws ConfigError
};

struct EmbeddingStore {
  int num_mentions = 0, num_features = 0, num_types = 0, dim = 0;
  std::vector<double> u;        // N x d, mention vectors
  std::vector<double> c;        // M x d, feature vectors
  std::vector<double> v;        // K x d, type vectors
  std::vector<double> v_ctx;    // K x d, type context vectors

  std::span<double> mention(int i) { return {u.data() + static_cast<size_t>(i) * dim, static_cast<size_t>(dim)}; }
  std::span<const double> mention(int i) const { return {u.data() + static_cast<size_t>(i) * dim, static_cast<size_t>(dim)}; }
  std::span<double> feature(int j) { return {c.data() + static_cast<size_t>(j) * dim, static_cast<size_t>(dim)}; }
  std::span<const double> feature(int j) const { return {c.data() + static_cast<size_t>(j) * dim, static_cast<size_t>(dim)}; }
  std::span<double> type(int k) { return {v.data() + static_cast<size_t>(k) * dim, static_cast<size_t>(dim)}; }
  std::span<const double> type(int k) const { return {v.data() + static_cast<size_t>(k) * dim, static_cast<size_t>(dim)}; }
  std::span<double> type_ctx(int k) { return {v_ctx.data() + static_cast<size_t>(k) * dim, static_cast<size_t>(dim)}; }
  std::span<const double> type_ctx(int k) const { return {v_ctx.data() + static_cast<size_t>(k) * dim, static_cast<size_t>(dim)}; }

  static EmbeddingStore random_init(int n, int m, int k, int dim, double scale,
                                    std::mt19937& rng);
};

double dot(std::span<const double> a, std::span<const double> b);
double sigmoid(double x);

/// One fixed draw of negative samples: the surrogate objective and its
/// gradients are deterministic functions of the draw.
struct NegativeDraw {
  std::vector<std::vector<int>> mf;      // per G_MF link, Z feature ids
  std::vector<std::vector<int>> yy_fwd;  // per G_YY link, direction src->dst
  std::vector<std::vector<int>> yy_rev;  // per G_YY link, direction dst->src
};

NegativeDraw draw_negatives(const HeteroGraph& graph, int negatives,
                            std::mt19937& rng);

struct ObjectiveValue {
  double total = 0, o_my = 0, o_mf = 0, o_yy = 0;
};

/// Hinge partial-label loss for one mention; ties broken by smallest type id.
double partial_label_loss(const HeteroGraph& graph, const EmbeddingStore& store,
                          int mention_id);

ObjectiveValue objective(const HeteroGraph& graph, const EmbeddingStore& store,
                         const TrainingConfig& config, const NegativeDraw& draw);

struct Gradients {
  std::vector<double> u, c, v, v_ctx;  // same shapes as EmbeddingStore
};

/// Simultaneous gradients of `objective` at the current embeddings.
Gradients gradients(const HeteroGraph& graph, const EmbeddingStore& store,
                    const TrainingConfig& config, const NegativeDraw& draw);

struct IterRecord {
  int iter = 0;
  double o = 0, o_my = 0, o_mf = 0, o_yy = 0;
  double wall_ms = 0;
};

struct TrainResult {
  EmbeddingStore store;
  std::vector<IterRecord> log;
  bool converged = false;
};

TrainResult train(const HeteroGraph& graph, const TrainingConfig& config);

void save_model(const std::string& path, const EmbeddingStore& store,
                Variant variant, unsigned seed);
EmbeddingStore load_model(const std::string& path);

void save_train_log(const std::string& path, const std::vector<IterRecord>& log);

}  // namespace ple
