#include "ple/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "ple/errors.hpp"
#include "ple/sampler.hpp"

namespace ple {

void TrainingConfig::validate() const {
  if (dim < 1) throw ConfigError("dim must be >= 1");
  if (negatives < 0) throw ConfigError("negatives must be >= 0");
  if (lambda < 0) throw ConfigError("lambda must be >= 0");
  if (alpha <= 0) throw ConfigError("alpha must be > 0");
  if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (tol <= 0) throw ConfigError("tol must be > 0");
  if (init_scale <= 0) throw ConfigError("init_scale must be > 0");
  if (threads < 1) throw ConfigError("threads must be >= 1");
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw NumericError("dot: dimension mismatch");
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

namespace {

// log(sigmoid(x)), stable for large |x|.
double log_sigmoid(double x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

// Projects a vector back onto the ball of radius `r`; keeps the max-margin
// updates from inflating norms without bound.
void cap_norm(std::span<double> x, double r) {
  double s = 0;
  for (double v : x) s += v * v;
  if (s > r * r) {
    double scale = r / std::sqrt(s);
    for (double& v : x) v *= scale;
  }
}

double sq_norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return s;
}

struct HingeState {
  bool active = false;
  int pos = -1;  // argmax over candidates, smallest id on ties
  int neg = -1;  // argmax over non-candidates
  double loss = 0;
};

// Candidate list must be sorted ascending.
HingeState hinge_state(const std::vector<int>& candidates,
                       const EmbeddingStore& store, int mention_id) {
  HingeState hs;
  if (candidates.empty() ||
      static_cast<int>(candidates.size()) == store.num_types)
    return hs;  // degenerate: loss defined as 0

  auto u = store.mention(mention_id);
  double best_pos = 0, best_neg = 0;
  size_t ci = 0;
  for (int k = 0; k < store.num_types; ++k) {
    bool is_cand = ci < candidates.size() && candidates[ci] == k;
    if (is_cand) ++ci;
    double s = dot(u, store.type(k));
    if (is_cand) {
      if (hs.pos < 0 || s > best_pos) {
        hs.pos = k;
        best_pos = s;
      }
    } else {
      if (hs.neg < 0 || s > best_neg) {
        hs.neg = k;
        best_neg = s;
      }
    }
  }
  double margin = best_pos - best_neg;
  if (margin < 1.0) {
    hs.active = true;
    hs.loss = 1.0 - margin;
  }
  return hs;
}

// Training-time election: the update rule picks a full candidate path rather
// than the single argmax candidate. The deepest candidates compete, the best
// one is elected (smallest id on ties) and every candidate on its path gets a
// positive vote; the best-scoring non-candidate is the rival. Updates stay
// active until the elected leaf itself clears the unit margin, which is
// stronger than the loss requires but matches what top-down inference needs:
// every type on the predicted path must score above the threshold.
struct Election {
  bool active = false;
  int rival = -1;
  int leaf = -1;
  std::vector<int> path;  // leaf-to-root order, candidates only
};

Election elect_path(const std::vector<int>& candidates,
                    const std::vector<int>& parent, const EmbeddingStore& store,
                    int mention_id) {
  Election el;
  if (candidates.empty() ||
      static_cast<int>(candidates.size()) == store.num_types)
    return el;
  auto u = store.mention(mention_id);

  double best_neg = 0;
  size_t ci = 0;
  for (int k = 0; k < store.num_types; ++k) {
    if (ci < candidates.size() && candidates[ci] == k) {
      ++ci;
      continue;
    }
    double s = dot(u, store.type(k));
    if (el.rival < 0 || s > best_neg) {
      el.rival = k;
      best_neg = s;
    }
  }

  double best_pos = 0;
  if (parent.empty()) {
    for (int k : candidates) {
      double s = dot(u, store.type(k));
      if (el.leaf < 0 || s > best_pos) {
        el.leaf = k;
        best_pos = s;
      }
    }
    el.path = {el.leaf};
  } else {
    // Leaves of the candidate set: candidates no other candidate points to.
    std::vector<char> internal(candidates.size(), 0);
    for (int k : candidates) {
      int p = parent[k];
      if (p == kRoot) continue;
      auto it = std::lower_bound(candidates.begin(), candidates.end(), p);
      if (it != candidates.end() && *it == p)
        internal[it - candidates.begin()] = 1;
    }
    auto path_of = [&](int leaf) {
      std::vector<int> path;
      for (int t = leaf;
           t != kRoot &&
           std::binary_search(candidates.begin(), candidates.end(), t);
           t = parent[t])
        path.push_back(t);
      return path;
    };
    // Rank candidate leaves by a weighted mean score along their path: the
    // leaf counts extra, but coarse evidence still weighs in without
    // dominating the choice.
    constexpr double kLeafWeight = 1.5;
    double best_mean = 0;
    for (size_t x = 0; x < candidates.size(); ++x) {
      if (internal[x]) continue;
      auto path = path_of(candidates[x]);
      double mean = 0, wsum = 0;
      for (int t : path) {
        double w = t == candidates[x] ? kLeafWeight : 1.0;
        mean += w * dot(u, store.type(t));
        wsum += w;
      }
      mean /= wsum;
      if (el.leaf < 0 || mean > best_mean) {
        el.leaf = candidates[x];
        best_mean = mean;
        el.path = std::move(path);
      }
    }
    best_pos = dot(u, store.type(el.leaf));
  }
  el.active = best_pos - best_neg < 1.0;
  return el;
}

void check_draw(const HeteroGraph& graph, const NegativeDraw& draw) {
  if (draw.mf.size() != graph.mention_feature.size() ||
      draw.yy_fwd.size() != graph.type_type.size() ||
      draw.yy_rev.size() != graph.type_type.size())
    throw ConfigError("negative draw does not match graph link counts");
}

void parallel_for(int n, int threads, const std::function<void(int, int)>& body) {
  if (threads <= 1 || n < 2 * threads) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    int lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(body, lo, hi);
  }
  for (auto& th : pool) th.join();
}

}  // namespace

EmbeddingStore EmbeddingStore::random_init(int n, int m, int k, int dim,
                                           double scale, std::mt19937& rng) {
  EmbeddingStore s;
  s.num_mentions = n;
  s.num_features = m;
  s.num_types = k;
  s.dim = dim;
  std::uniform_real_distribution<double> unif(-scale, scale);
  auto fill = [&](std::vector<double>& block, int rows) {
    block.resize(static_cast<size_t>(rows) * dim);
    for (double& x : block) x = unif(rng);
  };
  fill(s.u, n);
  fill(s.c, m);
  fill(s.v, k);
  fill(s.v_ctx, k);
  return s;
}

NegativeDraw draw_negatives(const HeteroGraph& graph, int negatives,
                            std::mt19937& rng) {
  NegativeDraw draw;
  draw.mf.resize(graph.mention_feature.size());
  draw.yy_fwd.resize(graph.type_type.size());
  draw.yy_rev.resize(graph.type_type.size());
  if (negatives == 0) return draw;

  if (!graph.mention_feature.empty()) {
    AliasSampler feature_noise(graph.feature_degrees());
    for (size_t e = 0; e < graph.mention_feature.size(); ++e) {
      draw.mf[e].reserve(negatives);
      for (int z = 0; z < negatives; ++z)
        draw.mf[e].push_back(
            feature_noise.sample_excluding(rng, graph.mention_feature[e].dst));
    }
  }
  if (!graph.type_type.empty()) {
    AliasSampler type_noise(graph.type_degrees());
    for (size_t e = 0; e < graph.type_type.size(); ++e) {
      draw.yy_fwd[e].reserve(negatives);
      draw.yy_rev[e].reserve(negatives);
      for (int z = 0; z < negatives; ++z)
        draw.yy_fwd[e].push_back(
            type_noise.sample_excluding(rng, graph.type_type[e].dst));
      for (int z = 0; z < negatives; ++z)
        draw.yy_rev[e].push_back(
            type_noise.sample_excluding(rng, graph.type_type[e].src));
    }
  }
  return draw;
}

double partial_label_loss(const HeteroGraph& graph, const EmbeddingStore& store,
                          int mention_id) {
  return hinge_state(graph.candidates_of.at(mention_id), store, mention_id).loss;
}

ObjectiveValue objective(const HeteroGraph& graph, const EmbeddingStore& store,
                         const TrainingConfig& config, const NegativeDraw& draw) {
  check_draw(graph, draw);
  ObjectiveValue o;

  for (int i = 0; i < graph.num_mentions; ++i)
    o.o_my += hinge_state(graph.candidates_of[i], store, i).loss;
  o.o_my += 0.5 * config.lambda * (sq_norm(store.u) + sq_norm(store.v));

  for (size_t e = 0; e < graph.mention_feature.size(); ++e) {
    const Link& l = graph.mention_feature[e];
    auto u = store.mention(l.src);
    double term = log_sigmoid(dot(store.feature(l.dst), u));
    for (int neg : draw.mf[e]) term += log_sigmoid(-dot(store.feature(neg), u));
    o.o_mf -= l.weight * term;
  }

  if (config.variant != Variant::kPleNoCo) {
    for (size_t e = 0; e < graph.type_type.size(); ++e) {
      const Link& l = graph.type_type[e];
      double term = log_sigmoid(dot(store.type_ctx(l.dst), store.type(l.src)));
      for (int neg : draw.yy_fwd[e])
        term += log_sigmoid(-dot(store.type_ctx(neg), store.type(l.src)));
      term += log_sigmoid(dot(store.type_ctx(l.src), store.type(l.dst)));
      for (int neg : draw.yy_rev[e])
        term += log_sigmoid(-dot(store.type_ctx(neg), store.type(l.dst)));
      o.o_yy -= l.weight * term;
    }
  }

  if (!std::isfinite(o.o_my)) throw NumericError("objective: non-finite O_MY");
  if (!std::isfinite(o.o_mf)) throw NumericError("objective: non-finite O_MF");
  if (!std::isfinite(o.o_yy)) throw NumericError("objective: non-finite O_YY");
  o.total = o.o_my + o.o_mf + o.o_yy;
  return o;
}

Gradients gradients(const HeteroGraph& graph, const EmbeddingStore& store,
                    const TrainingConfig& config, const NegativeDraw& draw) {
  check_draw(graph, draw);
  const int d = store.dim;
  Gradients g;
  g.u.assign(store.u.size(), 0.0);
  g.c.assign(store.c.size(), 0.0);
  g.v.assign(store.v.size(), 0.0);
  g.v_ctx.assign(store.v_ctx.size(), 0.0);
  auto gu = [&](int i) { return std::span<double>(g.u.data() + static_cast<size_t>(i) * d, d); };
  auto gc = [&](int j) { return std::span<double>(g.c.data() + static_cast<size_t>(j) * d, d); };
  auto gv = [&](int k) { return std::span<double>(g.v.data() + static_cast<size_t>(k) * d, d); };
  auto gvp = [&](int k) { return std::span<double>(g.v_ctx.data() + static_cast<size_t>(k) * d, d); };

  // Hinge terms and regularization.
  for (int i = 0; i < graph.num_mentions; ++i) {
    axpy(config.lambda, store.mention(i), gu(i));
    HingeState hs = hinge_state(graph.candidates_of[i], store, i);
    if (!hs.active) continue;
    axpy(1.0, store.type(hs.neg), gu(i));
    axpy(-1.0, store.type(hs.pos), gu(i));
    axpy(1.0, store.mention(i), gv(hs.neg));
    axpy(-1.0, store.mention(i), gv(hs.pos));
  }
  for (int k = 0; k < graph.num_types; ++k)
    axpy(config.lambda, store.type(k), gv(k));

  for (size_t e = 0; e < graph.mention_feature.size(); ++e) {
    const Link& l = graph.mention_feature[e];
    auto u = store.mention(l.src);
    auto cj = store.feature(l.dst);
    double coef = -l.weight * sigmoid(-dot(cj, u));
    axpy(coef, cj, gu(l.src));
    axpy(coef, u, gc(l.dst));
    for (int neg : draw.mf[e]) {
      auto cl = store.feature(neg);
      double coef_neg = l.weight * sigmoid(dot(cl, u));
      axpy(coef_neg, cl, gu(l.src));
      axpy(coef_neg, u, gc(neg));
    }
  }

  if (config.variant != Variant::kPleNoCo) {
    auto directed = [&](int src, int dst, double w,
                        const std::vector<int>& negs) {
      auto vs = store.type(src);
      auto vp = store.type_ctx(dst);
      double coef = -w * sigmoid(-dot(vp, vs));
      axpy(coef, vp, gv(src));
      axpy(coef, vs, gvp(dst));
      for (int neg : negs) {
        auto vn = store.type_ctx(neg);
        double coef_neg = w * sigmoid(dot(vn, vs));
        axpy(coef_neg, vn, gv(src));
        axpy(coef_neg, vs, gvp(neg));
      }
    };
    for (size_t e = 0; e < graph.type_type.size(); ++e) {
      const Link& l = graph.type_type[e];
      directed(l.src, l.dst, l.weight, draw.yy_fwd[e]);
      directed(l.dst, l.src, l.weight, draw.yy_rev[e]);
    }
  }

  for (const auto* block : {&g.u, &g.c, &g.v, &g.v_ctx})
    for (double x : *block)
      if (!std::isfinite(x)) throw NumericError("gradients: non-finite value");
  return g;
}

namespace {

// One block-coordinate pass in the order: mentions, features, types, type
// contexts. Each vector is updated by stepping through its own link terms in a
// fixed order, re-evaluating the sigmoid coefficient as the vector moves; this
// keeps the effective step size stable independent of node degree. Every vector
// update is independent of the others within a block, so the pass is
// deterministic regardless of thread count.
void update_blocks(const HeteroGraph& graph, EmbeddingStore& store,
                   const TrainingConfig& config, const NegativeDraw& draw,
                   int iter) {
  // Linear step-size decay: anneals the stochastic churn from resampled
  // negatives so the objective settles instead of oscillating.
  const double frac = static_cast<double>(iter - 1) / config.max_iters;
  const double alpha = config.alpha * std::max(1e-4, (1.0 - frac) * (1.0 - frac));
  constexpr double kNormCap = 3.5;
  const bool use_yy = config.variant != Variant::kPleNoCo;

  // Mention block.
  parallel_for(graph.num_mentions, config.threads, [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
      auto u = store.mention(i);
      axpy(-alpha * config.lambda, u, u);
      for (int e : graph.mf_of_mention[i]) {
        const Link& l = graph.mention_feature[e];
        auto cj = store.feature(l.dst);
        axpy(alpha * l.weight * sigmoid(-dot(cj, u)), cj, u);
        for (int neg : draw.mf[e]) {
          auto cl = store.feature(neg);
          axpy(-alpha * l.weight * sigmoid(dot(cl, u)), cl, u);
        }
      }
      Election el = elect_path(graph.candidates_of[i], graph.type_parent, store, i);
      if (el.active) {
        double w = alpha / static_cast<double>(el.path.size());
        for (int t : el.path) axpy(w, store.type(t), u);
        axpy(-alpha, store.type(el.rival), u);
      }
      cap_norm(u, kNormCap);
    }
  });

  // Feature block. Invert the negative draw first: feature -> mentions whose
  // links drew it.
  std::vector<std::vector<std::pair<int, double>>> neg_mentions(graph.num_features);
  for (size_t e = 0; e < draw.mf.size(); ++e)
    for (int neg : draw.mf[e])
      neg_mentions[neg].emplace_back(graph.mention_feature[e].src,
                                     graph.mention_feature[e].weight);
  parallel_for(graph.num_features, config.threads, [&](int lo, int hi) {
    for (int j = lo; j < hi; ++j) {
      auto cj = store.feature(j);
      for (int e : graph.mf_of_feature[j]) {
        const Link& l = graph.mention_feature[e];
        auto u = store.mention(l.src);
        axpy(alpha * l.weight * sigmoid(-dot(cj, u)), u, cj);
      }
      for (const auto& [i, w] : neg_mentions[j]) {
        auto u = store.mention(i);
        axpy(-alpha * w * sigmoid(dot(cj, u)), u, cj);
      }
      cap_norm(cj, kNormCap);
    }
  });

  // Type block. Elections are evaluated once against the embeddings at the
  // start of the block; the margin step then moves each type toward (away
  // from) the mean of the mentions voting on it, a centroid-style update that
  // keeps the assignment dynamics stable regardless of electorate size.
  std::vector<std::vector<std::pair<int, double>>> hinge_terms(graph.num_types);
  for (int i = 0; i < graph.num_mentions; ++i) {
    Election el = elect_path(graph.candidates_of[i], graph.type_parent, store, i);
    if (el.leaf < 0) continue;
    // Every mention votes for its elected path so each type tracks the mean of
    // its electorate; the best non-candidate is pushed away while the margin
    // is violated.
    for (int t : el.path) hinge_terms[t].emplace_back(i, 1.0);
    if (el.active) hinge_terms[el.rival].emplace_back(i, -1.0);
  }
  parallel_for(graph.num_types, config.threads, [&](int lo, int hi) {
    for (int k = lo; k < hi; ++k) {
      auto vk = store.type(k);
      axpy(-alpha * config.lambda, vk, vk);
      double scale = hinge_terms[k].empty()
                         ? 0.0
                         : alpha / static_cast<double>(hinge_terms[k].size());
      for (const auto& [i, sign] : hinge_terms[k])
        axpy(scale * sign, store.mention(i), vk);
      if (use_yy) {
        for (int e : graph.yy_of_type[k]) {
          const Link& l = graph.type_type[e];
          bool fwd = l.src == k;
          const auto& negs = fwd ? draw.yy_fwd[e] : draw.yy_rev[e];
          auto vp = store.type_ctx(fwd ? l.dst : l.src);
          axpy(alpha * l.weight * sigmoid(-dot(vp, vk)), vp, vk);
          for (int neg : negs) {
            auto vn = store.type_ctx(neg);
            axpy(-alpha * l.weight * sigmoid(dot(vn, vk)), vn, vk);
          }
        }
      }
      cap_norm(vk, kNormCap);
    }
  });

  // Type context block.
  if (use_yy && !graph.type_type.empty()) {
    std::vector<std::vector<std::pair<int, double>>> neg_sources(graph.num_types);
    for (size_t e = 0; e < graph.type_type.size(); ++e) {
      const Link& l = graph.type_type[e];
      for (int neg : draw.yy_fwd[e]) neg_sources[neg].emplace_back(l.src, l.weight);
      for (int neg : draw.yy_rev[e]) neg_sources[neg].emplace_back(l.dst, l.weight);
    }
    parallel_for(graph.num_types, config.threads, [&](int lo, int hi) {
      for (int k = lo; k < hi; ++k) {
        auto vpk = store.type_ctx(k);
        for (int e : graph.yy_of_type[k]) {
          const Link& l = graph.type_type[e];
          // k is the target of the direction coming from the other endpoint.
          auto vs = store.type(l.src == k ? l.dst : l.src);
          axpy(alpha * l.weight * sigmoid(-dot(vpk, vs)), vs, vpk);
        }
        for (const auto& [src, w] : neg_sources[k]) {
          auto vs = store.type(src);
          axpy(-alpha * w * sigmoid(dot(vpk, vs)), vs, vpk);
        }
        cap_norm(vpk, kNormCap);
      }
    });
  }
}

}  // namespace

TrainResult train(const HeteroGraph& graph, const TrainingConfig& config) {
  config.validate();
  std::mt19937 rng(config.seed);
  TrainResult result;
  result.store = EmbeddingStore::random_init(graph.num_mentions, graph.num_features,
                                             graph.num_types, config.dim,
                                             config.init_scale, rng);

  // The objective is monitored against one fixed negative draw so successive
  // values are comparable; training itself resamples negatives every pass.
  std::mt19937 eval_rng(config.seed ^ 0x9e3779b9u);
  NegativeDraw eval_draw = draw_negatives(graph, config.negatives, eval_rng);

  double prev = 0;
  std::vector<double> history;
  for (int t = 1; t <= config.max_iters; ++t) {
    auto start = std::chrono::steady_clock::now();
    NegativeDraw draw = draw_negatives(graph, config.negatives, rng);
    update_blocks(graph, result.store, config, draw, t);
    ObjectiveValue o = objective(graph, result.store, config, eval_draw);
    auto elapsed = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    result.log.push_back({t, o.total, o.o_my, o.o_mf, o.o_yy, elapsed});

    history.push_back(o.total);
    if (history.size() >= 6 && std::abs(o.total) > 10.0 * std::abs(history[history.size() - 6]) &&
        o.total > history[history.size() - 6]) {
      std::ostringstream msg;
      msg << "training diverged: objective grew from "
          << history[history.size() - 6] << " to " << o.total
          << " over 5 iterations (iter " << t << ")";
      throw NumericError(msg.str());
    }
    if (t > 1 && std::abs(o.total - prev) / std::max(1e-300, std::abs(prev)) <
                     config.tol) {
      result.converged = true;
      break;
    }
    prev = o.total;
  }
  return result;
}

void save_model(const std::string& path, const EmbeddingStore& store,
                Variant variant, unsigned seed) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write model file: " + path);
  out << store.num_mentions << ' ' << store.num_features << ' '
      << store.num_types << ' ' << store.dim << ' ' << variant_name(variant)
      << ' ' << seed << '\n';
  char buf[40];
  auto dump = [&](const char* tag, const std::vector<double>& block, int rows) {
    for (int r = 0; r < rows; ++r) {
      out << tag << '\t' << r;
      for (int x = 0; x < store.dim; ++x) {
        std::snprintf(buf, sizeof(buf), "%.17g",
                      block[static_cast<size_t>(r) * store.dim + x]);
        out << '\t' << buf;
      }
      out << '\n';
    }
  };
  dump("U", store.u, store.num_mentions);
  dump("C", store.c, store.num_features);
  dump("V", store.v, store.num_types);
  dump("VP", store.v_ctx, store.num_types);
}

EmbeddingStore load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file: " + path);
  EmbeddingStore s;
  std::string header;
  if (!std::getline(in, header)) throw FormatError("model file is empty: " + path);
  {
    std::istringstream ss(header);
    std::string variant;
    unsigned seed;
    if (!(ss >> s.num_mentions >> s.num_features >> s.num_types >> s.dim >>
          variant >> seed))
      throw FormatError("model header malformed: " + path);
  }
  s.u.assign(static_cast<size_t>(s.num_mentions) * s.dim, 0.0);
  s.c.assign(static_cast<size_t>(s.num_features) * s.dim, 0.0);
  s.v.assign(static_cast<size_t>(s.num_types) * s.dim, 0.0);
  s.v_ctx.assign(static_cast<size_t>(s.num_types) * s.dim, 0.0);
  std::string line;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tag;
    int id;
    if (!(ss >> tag >> id))
      throw FormatError(path + ":" + std::to_string(lineno) + ": bad row");
    std::vector<double>* block = nullptr;
    int rows = 0;
    if (tag == "U") block = &s.u, rows = s.num_mentions;
    else if (tag == "C") block = &s.c, rows = s.num_features;
    else if (tag == "V") block = &s.v, rows = s.num_types;
    else if (tag == "VP") block = &s.v_ctx, rows = s.num_types;
    else throw FormatError(path + ":" + std::to_string(lineno) + ": unknown tag " + tag);
    if (id < 0 || id >= rows)
      throw FormatError(path + ":" + std::to_string(lineno) + ": id out of range");
    for (int x = 0; x < s.dim; ++x)
      if (!(ss >> (*block)[static_cast<size_t>(id) * s.dim + x]))
        throw FormatError(path + ":" + std::to_string(lineno) + ": short row");
  }
  return s;
}

void save_train_log(const std::string& path, const std::vector<IterRecord>& log) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write training log: " + path);
  out << "iter,O,O_MY,O_MF,O_YY,wall_ms\n";
  char buf[160];
  for (const IterRecord& r : log) {
    std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g,%.12g,%.12g,%.3f\n", r.iter,
                  r.o, r.o_my, r.o_mf, r.o_yy, r.wall_ms);
    out << buf;
  }
}

}  // namespace ple
