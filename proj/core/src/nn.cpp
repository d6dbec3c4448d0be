#include "motifsp/nn.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "motifsp/dataset.hpp"
#include "motifsp/error.hpp"
#include "motifsp/parallel.hpp"
#include "motifsp/rng.hpp"

namespace motifsp {

std::string_view name_of(Backbone b) noexcept { return b == Backbone::Gin ? "gin" : "sage"; }
std::string_view name_of(JumpingKnowledge jk) noexcept { return jk == JumpingKnowledge::Max ? "max" : "cat"; }

std::optional<Backbone> backbone_from_name(std::string_view s) {
  if (s == "gin") return Backbone::Gin;
  if (s == "sage") return Backbone::Sage;
  return std::nullopt;
}

std::optional<JumpingKnowledge> jk_from_name(std::string_view s) {
  if (s == "max") return JumpingKnowledge::Max;
  if (s == "cat") return JumpingKnowledge::Cat;
  return std::nullopt;
}

std::string check_config(const ModelConfig& c) {
  if (c.gnn_depth == 0) return "gnn_depth must be positive";
  if (c.hidden_dim == 0) return "hidden_dim must be positive";
  if (c.mlp_depth == 0) return "mlp_depth must be positive";
  if (c.mlp_hidden_dim == 0) return "mlp_hidden_dim must be positive";
  if (c.output_dim == 0) return "output_dim must be positive";
  if (c.batch_size == 0) return "batch_size must be positive";
  if (!(c.gnn_dropout >= 0.0 && c.gnn_dropout < 1.0)) return "gnn_dropout must lie in [0,1)";
  if (!(c.mlp_dropout >= 0.0 && c.mlp_dropout < 1.0)) return "mlp_dropout must lie in [0,1)";
  if (!(c.learning_rate >= 0.0) || !std::isfinite(c.learning_rate)) return "learning_rate must be >= 0";
  return {};
}

bool in_hyperspace(const ModelConfig& c) {
  constexpr std::array<std::size_t, 5> batches{16, 32, 64, 128, 256};
  return c.gnn_depth >= 2 && c.gnn_depth <= 3 && c.hidden_dim >= 6 && c.hidden_dim <= 16 &&
         c.gnn_dropout >= 0.0 && c.gnn_dropout <= 0.9 && c.mlp_depth >= 2 && c.mlp_depth <= 6 &&
         c.mlp_hidden_dim >= 6 && c.mlp_hidden_dim <= 16 && c.mlp_dropout >= 0.2 && c.mlp_dropout <= 0.9 &&
         c.epochs >= 1 && c.epochs <= 100 &&
         std::find(batches.begin(), batches.end(), c.batch_size) != batches.end() &&
         c.learning_rate >= 1e-5 && c.learning_rate <= 1e-3;
}

ModelConfig sample_config(std::uint64_t seed) {
  Rng rng = make_rng(seed);
  constexpr std::array<std::size_t, 5> batches{16, 32, 64, 128, 256};
  ModelConfig c;
  c.backbone = uniform_index(rng, 2) ? Backbone::Sage : Backbone::Gin;
  c.gnn_depth = 2 + uniform_index(rng, 2);
  c.hidden_dim = 6 + uniform_index(rng, 11);
  c.gnn_dropout = uniform_real(rng, 0.0, 0.9);
  c.jumping_knowledge = uniform_index(rng, 2) ? JumpingKnowledge::Cat : JumpingKnowledge::Max;
  c.mlp_depth = 2 + uniform_index(rng, 5);
  c.mlp_hidden_dim = 6 + uniform_index(rng, 11);
  c.mlp_dropout = uniform_real(rng, 0.2, 0.9);
  c.epochs = 100;
  c.batch_size = batches[uniform_index(rng, batches.size())];
  c.learning_rate = std::exp(uniform_real(rng, std::log(1e-5), std::log(1e-3)));
  c.seed = derive_seed({seed, 1});
  return c;
}

namespace {

using NodeMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using IndexMat = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXd;
using WMap = Eigen::Map<const NodeMat>;
using GMap = Eigen::Map<NodeMat>;
using BMap = Eigen::Map<const Vec>;
using GBMap = Eigen::Map<Vec>;

struct Dense {
  std::size_t w = 0, b = 0, in = 0, out = 0;
};

struct GnnSlot {
  std::size_t in = 0;
  std::size_t eps = 0;  // GIN
  Dense d1, d2;         // GIN
  std::size_t ws = 0, wn = 0, b = 0;  // SAGE
};

struct Layout {
  std::vector<GnnSlot> gnn;
  std::vector<Dense> mlp;
  std::size_t jk_dim = 0;
  std::size_t total = 0;
};

Layout make_layout(const ModelConfig& c) {
  Layout L;
  std::size_t off = 0;
  auto take = [&](std::size_t k) {
    std::size_t o = off;
    off += k;
    return o;
  };
  const std::size_t h = c.hidden_dim;
  for (std::size_t l = 0; l < c.gnn_depth; ++l) {
    GnnSlot s;
    s.in = l == 0 ? 1 : h;
    if (c.backbone == Backbone::Gin) {
      s.eps = take(1);
      s.d1.in = s.in;
      s.d1.out = h;
      s.d1.w = take(h * s.in);
      s.d1.b = take(h);
      s.d2.in = h;
      s.d2.out = h;
      s.d2.w = take(h * h);
      s.d2.b = take(h);
    } else {
      s.ws = take(h * s.in);
      s.wn = take(h * s.in);
      s.b = take(h);
    }
    L.gnn.push_back(s);
  }
  L.jk_dim = c.jumping_knowledge == JumpingKnowledge::Cat ? c.gnn_depth * h : h;
  std::size_t in = L.jk_dim;
  for (std::size_t i = 0; i < c.mlp_depth; ++i) {
    Dense d;
    d.in = in;
    d.out = i + 1 == c.mlp_depth ? c.output_dim : c.mlp_hidden_dim;
    d.w = take(d.out * d.in);
    d.b = take(d.out);
    L.mlp.push_back(d);
    in = d.out;
  }
  L.total = off;
  return L;
}

struct GnnCache {
  NodeMat in, agg, u1, r1, u2, mask, out;
};

struct MlpCache {
  Vec in, pre, mask;
};

struct Cache {
  std::vector<GnnCache> gnn;
  IndexMat arg;
  Vec pooled;
  std::vector<MlpCache> mlp;
  Vec out;
};

NodeMat neighbor_sum(const Graph& g, const NodeMat& h) {
  NodeMat s = NodeMat::Zero(h.rows(), h.cols());
  for (NodeId v = 0; v < g.num_nodes(); ++v)
    for (NodeId u : g.neighbors(v)) s.row(static_cast<Eigen::Index>(v)) += h.row(static_cast<Eigen::Index>(u));
  return s;
}

NodeMat relu(const NodeMat& x) { return x.cwiseMax(0.0); }
NodeMat relu_mask(const NodeMat& x) { return (x.array() > 0.0).cast<double>().matrix(); }

// Inverted dropout mask (entries 0 or 1/(1-p)); empty when inactive.
template <class M>
M draw_mask(Eigen::Index rows, Eigen::Index cols, double p, bool active, std::uint64_t seed) {
  if (!active || p <= 0.0) return M();
  Rng rng = make_rng(seed);
  M mask(rows, cols);
  const double keep = 1.0 / (1.0 - p);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) mask(i, j) = uniform01(rng) < p ? 0.0 : keep;
  return mask;
}

class Net {
 public:
  Net(const ModelParams& p, const ModelConfig& c) : p_(p.values), c_(c), L_(make_layout(c)) {
    if (p_.size() != L_.total)
      throw std::invalid_argument("parameter vector has " + std::to_string(p_.size()) + " entries, expected " +
                                  std::to_string(L_.total));
  }

  const Layout& layout() const { return L_; }

  void encode(const Graph& g, bool train, std::uint64_t seed, Cache& cache) const {
    const auto n = static_cast<Eigen::Index>(g.num_nodes());
    const auto h = static_cast<Eigen::Index>(c_.hidden_dim);
    const std::size_t K = c_.gnn_depth;
    cache.gnn.assign(K, {});
    NodeMat x = NodeMat::Ones(n, 1);
    for (std::size_t l = 0; l < K; ++l) {
      const auto& s = L_.gnn[l];
      auto& lc = cache.gnn[l];
      lc.in = std::move(x);
      const NodeMat nsum = neighbor_sum(g, lc.in);
      NodeMat act;
      if (c_.backbone == Backbone::Gin) {
        lc.agg = (1.0 + p_[s.eps]) * lc.in + nsum;
        lc.u1 = lc.agg * w(s.d1).transpose();
        lc.u1.rowwise() += bias(s.d1).transpose();
        lc.r1 = relu(lc.u1);
        lc.u2 = lc.r1 * w(s.d2).transpose();
        lc.u2.rowwise() += bias(s.d2).transpose();
        act = relu(lc.u2);
      } else {
        lc.agg = nsum;
        for (NodeId v = 0; v < g.num_nodes(); ++v)
          if (auto d = g.degree(v)) lc.agg.row(static_cast<Eigen::Index>(v)) /= static_cast<double>(d);
        lc.u1 = lc.in * mat(s.ws, s.in).transpose() + lc.agg * mat(s.wn, s.in).transpose();
        lc.u1.rowwise() += vec(s.b, c_.hidden_dim).transpose();
        act = relu(lc.u1);
      }
      lc.mask = draw_mask<NodeMat>(n, h, c_.gnn_dropout, train, derive_seed({seed, l}));
      lc.out = lc.mask.size() ? NodeMat(act.cwiseProduct(lc.mask)) : act;
      x = lc.out;
    }

    // jumping knowledge + add pooling
    cache.pooled = Vec::Zero(static_cast<Eigen::Index>(L_.jk_dim));
    if (c_.jumping_knowledge == JumpingKnowledge::Cat) {
      for (std::size_t l = 0; l < K; ++l)
        cache.pooled.segment(static_cast<Eigen::Index>(l) * h, h) = cache.gnn[l].out.colwise().sum().transpose();
    } else {
      cache.arg = IndexMat::Zero(n, h);
      NodeMat best = cache.gnn[0].out;
      for (std::size_t l = 1; l < K; ++l) {
        const auto& o = cache.gnn[l].out;
        for (Eigen::Index i = 0; i < n; ++i)
          for (Eigen::Index j = 0; j < h; ++j)
            if (o(i, j) > best(i, j)) {
              best(i, j) = o(i, j);
              cache.arg(i, j) = static_cast<int>(l);
            }
      }
      cache.pooled = best.colwise().sum().transpose();
    }
  }

  void head(bool train, std::uint64_t seed, Cache& cache) const {
    Vec a = cache.pooled;
    cache.mlp.assign(L_.mlp.size(), {});
    for (std::size_t i = 0; i < L_.mlp.size(); ++i) {
      const auto& d = L_.mlp[i];
      auto& mc = cache.mlp[i];
      mc.in = a;
      mc.pre = w(d) * a + bias(d);
      if (i + 1 == L_.mlp.size()) {
        a = mc.pre;
      } else {
        Vec r = mc.pre.cwiseMax(0.0);
        mc.mask = draw_mask<Vec>(r.size(), 1, c_.mlp_dropout, train, derive_seed({seed, c_.gnn_depth + i}));
        a = mc.mask.size() ? Vec(r.cwiseProduct(mc.mask)) : r;
      }
    }
    cache.out = a;
  }

  void forward(const Graph& g, bool train, std::uint64_t seed, Cache& cache) const {
    encode(g, train, seed, cache);
    head(train, seed, cache);
  }

  // Accumulates d(out)/d(params) contracted with dout into grad.
  void backward(const Graph& g, const Cache& cache, const Vec& dout, std::vector<double>& grad) const {
    Vec d = dout;
    for (std::size_t i = L_.mlp.size(); i-- > 0;) {
      const auto& dl = L_.mlp[i];
      const auto& mc = cache.mlp[i];
      if (i + 1 != L_.mlp.size()) {
        if (mc.mask.size()) d = d.cwiseProduct(mc.mask);
        d = d.cwiseProduct((mc.pre.array() > 0.0).cast<double>().matrix());
      }
      gw(grad, dl).noalias() += d * mc.in.transpose();
      gbias(grad, dl) += d;
      d = w(dl).transpose() * d;
    }
    const Vec& dpool = d;

    const auto n = static_cast<Eigen::Index>(g.num_nodes());
    const auto h = static_cast<Eigen::Index>(c_.hidden_dim);
    const std::size_t K = c_.gnn_depth;
    NodeMat carry = NodeMat::Zero(n, h);
    for (std::size_t l = K; l-- > 0;) {
      const auto& s = L_.gnn[l];
      const auto& lc = cache.gnn[l];
      NodeMat dout_l = carry;
      if (c_.jumping_knowledge == JumpingKnowledge::Cat) {
        dout_l.rowwise() += dpool.segment(static_cast<Eigen::Index>(l) * h, h).transpose();
      } else {
        for (Eigen::Index i = 0; i < n; ++i)
          for (Eigen::Index j = 0; j < h; ++j)
            if (cache.arg(i, j) == static_cast<int>(l)) dout_l(i, j) += dpool(j);
      }
      if (lc.mask.size()) dout_l = dout_l.cwiseProduct(lc.mask);

      if (c_.backbone == Backbone::Gin) {
        const NodeMat du2 = dout_l.cwiseProduct(relu_mask(lc.u2));
        gw(grad, s.d2).noalias() += du2.transpose() * lc.r1;
        gbias(grad, s.d2) += du2.colwise().sum().transpose();
        const NodeMat du1 = (du2 * w(s.d2)).cwiseProduct(relu_mask(lc.u1));
        gw(grad, s.d1).noalias() += du1.transpose() * lc.agg;
        gbias(grad, s.d1) += du1.colwise().sum().transpose();
        const NodeMat dz = du1 * w(s.d1);
        grad[s.eps] += dz.cwiseProduct(lc.in).sum();
        carry = (1.0 + p_[s.eps]) * dz + neighbor_sum(g, dz);
      } else {
        const NodeMat du = dout_l.cwiseProduct(relu_mask(lc.u1));
        const auto in = static_cast<Eigen::Index>(s.in);
        GMap(grad.data() + s.ws, h, in).noalias() += du.transpose() * lc.in;
        GMap(grad.data() + s.wn, h, in).noalias() += du.transpose() * lc.agg;
        GBMap(grad.data() + s.b, h) += du.colwise().sum().transpose();
        NodeMat dagg = du * mat(s.wn, s.in);
        for (NodeId v = 0; v < g.num_nodes(); ++v)
          if (auto dv = g.degree(v)) dagg.row(static_cast<Eigen::Index>(v)) /= static_cast<double>(dv);
        carry = du * mat(s.ws, s.in) + neighbor_sum(g, dagg);
      }
    }
  }

 private:
  WMap w(const Dense& d) const {
    return WMap(p_.data() + d.w, static_cast<Eigen::Index>(d.out), static_cast<Eigen::Index>(d.in));
  }
  BMap bias(const Dense& d) const { return BMap(p_.data() + d.b, static_cast<Eigen::Index>(d.out)); }
  WMap mat(std::size_t off, std::size_t in) const {
    return WMap(p_.data() + off, static_cast<Eigen::Index>(c_.hidden_dim), static_cast<Eigen::Index>(in));
  }
  BMap vec(std::size_t off, std::size_t len) const { return BMap(p_.data() + off, static_cast<Eigen::Index>(len)); }
  static GMap gw(std::vector<double>& g, const Dense& d) {
    return GMap(g.data() + d.w, static_cast<Eigen::Index>(d.out), static_cast<Eigen::Index>(d.in));
  }
  static GBMap gbias(std::vector<double>& g, const Dense& d) {
    return GBMap(g.data() + d.b, static_cast<Eigen::Index>(d.out));
  }

  const std::vector<double>& p_;
  const ModelConfig& c_;
  Layout L_;
};

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

void require_valid(const ModelConfig& c) {
  if (auto err = check_config(c); !err.empty()) throw std::invalid_argument("model config: " + err);
}

}  // namespace

std::size_t parameter_count(const ModelConfig& c) {
  require_valid(c);
  return make_layout(c).total;
}

ModelParams init_params(const ModelConfig& c, std::uint64_t seed) {
  require_valid(c);
  const Layout L = make_layout(c);
  ModelParams p;
  p.values.assign(L.total, 0.0);
  Rng rng = make_rng(seed);
  auto fill = [&](std::size_t off, std::size_t count, std::size_t fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (std::size_t i = 0; i < count; ++i) p.values[off + i] = uniform_real(rng, -bound, bound);
  };
  const std::size_t h = c.hidden_dim;
  for (const auto& s : L.gnn) {
    if (c.backbone == Backbone::Gin) {
      p.values[s.eps] = 0.0;
      fill(s.d1.w, h * s.in, s.in);
      fill(s.d1.b, h, s.in);
      fill(s.d2.w, h * h, h);
      fill(s.d2.b, h, h);
    } else {
      fill(s.ws, h * s.in, 2 * s.in);
      fill(s.wn, h * s.in, 2 * s.in);
      fill(s.b, h, 2 * s.in);
    }
  }
  for (const auto& d : L.mlp) {
    fill(d.w, d.out * d.in, d.in);
    fill(d.b, d.out, d.in);
  }
  return p;
}

std::vector<double> forward(const ModelParams& p, const ModelConfig& c, const Graph& g, bool train_mode,
                            std::uint64_t dropout_seed) {
  require_valid(c);
  Net net(p, c);
  Cache cache;
  net.forward(g, train_mode, dropout_seed, cache);
  return to_std(cache.out);
}

std::vector<double> pooled_embedding(const ModelParams& p, const ModelConfig& c, const Graph& g) {
  require_valid(c);
  Net net(p, c);
  Cache cache;
  net.encode(g, false, 0, cache);
  return to_std(cache.pooled);
}

double loss(std::span<const double> pred, std::span<const double> truth) {
  if (pred.size() != truth.size()) throw std::invalid_argument("loss: size mismatch");
  if (pred.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) acc += (pred[i] - truth[i]) * (pred[i] - truth[i]);
  return acc / static_cast<double>(pred.size());
}

LossAndGrad backward(const ModelParams& p, const ModelConfig& c, std::span<const Example> batch, bool train_mode,
                     std::uint64_t dropout_seed, const WorkerPool* pool) {
  require_valid(c);
  if (batch.empty()) throw std::invalid_argument("backward: empty batch");
  Net net(p, c);
  const std::size_t P = net.layout().total;
  std::vector<double> losses(batch.size());
  std::vector<std::vector<double>> grads(batch.size());
  parallel_for(pool, batch.size(), [&](std::size_t i) {
    const Example& ex = batch[i];
    if (ex.target.size() != c.output_dim) throw std::invalid_argument("backward: target width mismatch");
    Cache cache;
    net.forward(*ex.graph, train_mode, derive_seed({dropout_seed, i}), cache);
    const auto dim = static_cast<double>(c.output_dim);
    Vec dout(static_cast<Eigen::Index>(c.output_dim));
    double acc = 0.0;
    for (std::size_t k = 0; k < c.output_dim; ++k) {
      const double diff = cache.out(static_cast<Eigen::Index>(k)) - ex.target[k];
      acc += diff * diff;
      dout(static_cast<Eigen::Index>(k)) = 2.0 * diff / dim;
    }
    losses[i] = acc / dim;
    grads[i].assign(P, 0.0);
    net.backward(*ex.graph, cache, dout, grads[i]);
  });
  LossAndGrad out;
  out.grad.assign(P, 0.0);
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    out.loss += losses[i];
    for (std::size_t k = 0; k < P; ++k) out.grad[k] += grads[i][k];
  }
  out.loss *= inv;
  for (auto& gk : out.grad) gk *= inv;
  return out;
}

namespace {

std::vector<std::vector<double>> predict_all(const ModelParams& p, const ModelConfig& c,
                                             std::span<const Example> set, const WorkerPool* pool) {
  std::vector<std::vector<double>> out(set.size());
  Net net(p, c);
  parallel_for(pool, set.size(), [&](std::size_t i) {
    Cache cache;
    net.forward(*set[i].graph, false, 0, cache);
    out[i] = to_std(cache.out);
  });
  return out;
}

double mean_loss(const std::vector<std::vector<double>>& preds, std::span<const Example> set) {
  double acc = 0.0;
  for (std::size_t i = 0; i < set.size(); ++i) acc += loss(preds[i], set[i].target);
  return acc / static_cast<double>(set.size());
}

void check_examples(std::span<const Example> set, const ModelConfig& c, const char* what) {
  for (const auto& ex : set) {
    if (!ex.graph) throw std::invalid_argument(std::string(what) + ": example without graph");
    if (ex.target.size() != c.output_dim)
      throw std::invalid_argument(std::string(what) + ": target width differs from output_dim");
  }
}

}  // namespace

TrainedModel train(std::span<const Example> train_set, std::span<const Example> valid_set, const ModelConfig& c,
                   const WorkerPool* pool) {
  require_valid(c);
  if (train_set.empty() || valid_set.empty()) throw std::invalid_argument("train: empty train or valid split");
  check_examples(train_set, c, "train");
  check_examples(valid_set, c, "valid");

  TrainedModel model;
  model.config = c;
  ModelParams p = init_params(c, derive_seed({c.seed, 0x1417ULL}));
  ModelParams best = p;
  double best_loss = std::numeric_limits<double>::infinity();
  TrainReport& rep = model.report;

  const std::size_t P = p.values.size();
  std::vector<double> m1(P, 0.0), m2(P, 0.0);
  constexpr double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;
  double b1t = 1.0, b2t = 1.0;

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  Rng shuffle_rng = make_rng(derive_seed({c.seed, 0x5417ULL}));
  std::vector<Example> batch;

  for (std::size_t epoch = 1; epoch <= c.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_index(shuffle_rng, i)]);
    double epoch_loss = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < order.size(); start += c.batch_size, ++batch_index) {
      const std::size_t end = std::min(order.size(), start + c.batch_size);
      batch.clear();
      for (std::size_t k = start; k < end; ++k) batch.push_back(train_set[order[k]]);
      auto lg = backward(p, c, batch, true, derive_seed({c.seed, epoch, batch_index}), pool);
      if (!std::isfinite(lg.loss))
        throw DivergenceError("non-finite training loss at epoch " + std::to_string(epoch) + ", batch " +
                              std::to_string(batch_index));
      epoch_loss += lg.loss * static_cast<double>(batch.size());
      b1t *= beta1;
      b2t *= beta2;
      for (std::size_t k = 0; k < P; ++k) {
        const double g = lg.grad[k];
        m1[k] = beta1 * m1[k] + (1.0 - beta1) * g;
        m2[k] = beta2 * m2[k] + (1.0 - beta2) * g * g;
        const double mhat = m1[k] / (1.0 - b1t);
        const double vhat = m2[k] / (1.0 - b2t);
        p.values[k] -= c.learning_rate * mhat / (std::sqrt(vhat) + adam_eps);
      }
    }
    rep.train_mse.push_back(epoch_loss / static_cast<double>(train_set.size()));
    const double vl = mean_loss(predict_all(p, c, valid_set, pool), valid_set);
    if (!std::isfinite(vl)) throw DivergenceError("non-finite validation loss at epoch " + std::to_string(epoch));
    rep.valid_mse.push_back(vl);
    rep.stopping_epoch = epoch;
    if (vl < best_loss) {
      best_loss = vl;
      best = p;
      rep.best_epoch = epoch;
    }
    if (epoch >= c.grace_period && epoch - rep.best_epoch >= c.patience) {
      rep.early_stopped = true;
      break;
    }
  }
  model.params = std::move(best);

  const auto preds = predict_all(model.params, c, valid_set, pool);
  std::vector<double> abs_err;
  for (std::size_t i = 0; i < valid_set.size(); ++i) {
    double sum = 0.0;
    for (std::size_t k = 0; k < c.output_dim; ++k) {
      const double e = std::abs(preds[i][k] - valid_set[i].target[k]);
      abs_err.push_back(e);
      sum += e;
    }
    rep.max_abs_sum_error = std::max(rep.max_abs_sum_error, sum);
  }
  std::sort(abs_err.begin(), abs_err.end());
  rep.median_abs_error = abs_err[(abs_err.size() + 1) / 2 - 1];
  return model;
}

namespace {

void check_aligned(std::span<const DatasetRecord> records, std::span<const Graph> graphs) {
  if (records.size() != graphs.size()) throw std::invalid_argument("records and graphs are not aligned");
}

}  // namespace

std::vector<Example> profile_examples(std::span<const DatasetRecord> records, std::span<const Graph> graphs) {
  check_aligned(records, graphs);
  std::vector<Example> out;
  for (std::size_t i = 0; i < records.size(); ++i)
    out.push_back({&graphs[i], std::vector<double>(records[i].sp.s.begin(), records[i].sp.s.end())});
  return out;
}

std::vector<Example> single_pattern_examples(std::span<const DatasetRecord> records, std::span<const Graph> graphs,
                                             PatternId pattern) {
  check_aligned(records, graphs);
  std::vector<Example> out;
  for (std::size_t i = 0; i < records.size(); ++i) out.push_back({&graphs[i], {records[i].sp[pattern]}});
  return out;
}

std::vector<Example> log_count_examples(std::span<const DatasetRecord> records, std::span<const Graph> graphs) {
  check_aligned(records, graphs);
  std::vector<Example> out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::vector<double> t(kNumPatterns);
    for (std::size_t k = 0; k < kNumPatterns; ++k) t[k] = std::log1p(static_cast<double>(records[i].counts.values[k]));
    out.push_back({&graphs[i], std::move(t)});
  }
  return out;
}

TrainedModel train_profile(std::span<const DatasetRecord> train_records, std::span<const Graph> train_graphs,
                           std::span<const DatasetRecord> valid_records, std::span<const Graph> valid_graphs,
                           ModelConfig c, const WorkerPool* pool) {
  c.output_dim = kNumPatterns;
  auto tr = profile_examples(train_records, train_graphs);
  auto va = profile_examples(valid_records, valid_graphs);
  auto m = train(tr, va, c, pool);
  m.target = TargetKind::Profile;
  return m;
}

TrainedModel train_single_target(std::span<const DatasetRecord> train_records, std::span<const Graph> train_graphs,
                                 std::span<const DatasetRecord> valid_records, std::span<const Graph> valid_graphs,
                                 ModelConfig c, PatternId pattern, const WorkerPool* pool) {
  c.output_dim = 1;
  auto tr = single_pattern_examples(train_records, train_graphs, pattern);
  auto va = single_pattern_examples(valid_records, valid_graphs, pattern);
  auto m = train(tr, va, c, pool);
  m.target = TargetKind::SinglePattern;
  m.pattern = pattern;
  return m;
}

TrainedModel train_count_target(std::span<const DatasetRecord> train_records, std::span<const Graph> train_graphs,
                                std::span<const DatasetRecord> valid_records, std::span<const Graph> valid_graphs,
                                ModelConfig c, const WorkerPool* pool) {
  c.output_dim = kNumPatterns;
  auto tr = log_count_examples(train_records, train_graphs);
  auto va = log_count_examples(valid_records, valid_graphs);
  auto m = train(tr, va, c, pool);
  m.target = TargetKind::LogCounts;
  const auto preds = predict_all(m.params, m.config, tr, pool);
  m.residual_mean.assign(kNumPatterns, 0.0);
  m.residual_var.assign(kNumPatterns, 0.0);
  const auto N = static_cast<double>(tr.size());
  for (std::size_t k = 0; k < kNumPatterns; ++k) {
    double mean = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i) mean += preds[i][k] - tr[i].target[k];
    mean /= N;
    double var = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
      const double d = preds[i][k] - tr[i].target[k] - mean;
      var += d * d;
    }
    m.residual_mean[k] = mean;
    m.residual_var[k] = var / N;
  }
  return m;
}

std::vector<double> predict(const TrainedModel& m, const Graph& g) { return forward(m.params, m.config, g); }

namespace {

using nlohmann::json;

constexpr const char* kModelFormat = "motifsp-model";
constexpr int kModelVersion = 1;

std::string_view name_of(TargetKind t) {
  switch (t) {
    case TargetKind::Profile: return "profile";
    case TargetKind::SinglePattern: return "single_pattern";
    case TargetKind::LogCounts: return "log_counts";
  }
  return "profile";
}

json config_to_json(const ModelConfig& c) {
  return json{{"backbone", std::string(name_of(c.backbone))},
              {"gnn_depth", c.gnn_depth},
              {"hidden_dim", c.hidden_dim},
              {"gnn_dropout", c.gnn_dropout},
              {"jumping_knowledge", std::string(name_of(c.jumping_knowledge))},
              {"mlp_depth", c.mlp_depth},
              {"mlp_hidden_dim", c.mlp_hidden_dim},
              {"mlp_dropout", c.mlp_dropout},
              {"epochs", c.epochs},
              {"batch_size", c.batch_size},
              {"learning_rate", c.learning_rate},
              {"seed", c.seed},
              {"output_dim", c.output_dim},
              {"grace_period", c.grace_period},
              {"patience", c.patience}};
}

ModelConfig config_from_json(const json& j) {
  ModelConfig c;
  auto bb = backbone_from_name(j.at("backbone").get<std::string>());
  auto jk = jk_from_name(j.at("jumping_knowledge").get<std::string>());
  if (!bb || !jk) throw DataError("unknown backbone or jumping-knowledge mode");
  c.backbone = *bb;
  c.jumping_knowledge = *jk;
  c.gnn_depth = j.at("gnn_depth").get<std::size_t>();
  c.hidden_dim = j.at("hidden_dim").get<std::size_t>();
  c.gnn_dropout = j.at("gnn_dropout").get<double>();
  c.mlp_depth = j.at("mlp_depth").get<std::size_t>();
  c.mlp_hidden_dim = j.at("mlp_hidden_dim").get<std::size_t>();
  c.mlp_dropout = j.at("mlp_dropout").get<double>();
  c.epochs = j.at("epochs").get<std::size_t>();
  c.batch_size = j.at("batch_size").get<std::size_t>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.output_dim = j.at("output_dim").get<std::size_t>();
  c.grace_period = j.at("grace_period").get<std::size_t>();
  c.patience = j.at("patience").get<std::size_t>();
  return c;
}

}  // namespace

void save_model(const TrainedModel& m, std::ostream& out) {
  json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  j["config"] = config_to_json(m.config);
  std::vector<std::string> patterns;
  for (auto name : kPatternNames) patterns.emplace_back(name);
  j["patterns"] = patterns;
  j["target"] = std::string(name_of(m.target));
  j["pattern"] = std::string(name_of(m.pattern));
  j["residual_mean"] = m.residual_mean;
  j["residual_var"] = m.residual_var;
  j["report"] = json{{"train_mse", m.report.train_mse},
                     {"valid_mse", m.report.valid_mse},
                     {"median_abs_error", m.report.median_abs_error},
                     {"max_abs_sum_error", m.report.max_abs_sum_error},
                     {"best_epoch", m.report.best_epoch},
                     {"stopping_epoch", m.report.stopping_epoch},
                     {"early_stopped", m.report.early_stopped}};
  j["params"] = m.params.values;
  out << j.dump() << '\n';
}

TrainedModel load_model(std::istream& in) {
  try {
    const json j = json::parse(in);
    if (j.at("format").get<std::string>() != kModelFormat) throw DataError("not a model checkpoint");
    if (j.at("version").get<int>() != kModelVersion) throw DataError("unsupported checkpoint version");
    TrainedModel m;
    m.config = config_from_json(j.at("config"));
    if (auto err = check_config(m.config); !err.empty()) throw DataError("checkpoint config: " + err);
    const auto target = j.at("target").get<std::string>();
    if (target == "profile") m.target = TargetKind::Profile;
    else if (target == "single_pattern") m.target = TargetKind::SinglePattern;
    else if (target == "log_counts") m.target = TargetKind::LogCounts;
    else throw DataError("unknown target kind '" + target + "'");
    auto pat = pattern_from_name(j.at("pattern").get<std::string>());
    if (!pat) throw DataError("unknown pattern in checkpoint");
    m.pattern = *pat;
    m.residual_mean = j.at("residual_mean").get<std::vector<double>>();
    m.residual_var = j.at("residual_var").get<std::vector<double>>();
    const auto& r = j.at("report");
    m.report.train_mse = r.at("train_mse").get<std::vector<double>>();
    m.report.valid_mse = r.at("valid_mse").get<std::vector<double>>();
    m.report.median_abs_error = r.at("median_abs_error").get<double>();
    m.report.max_abs_sum_error = r.at("max_abs_sum_error").get<double>();
    m.report.best_epoch = r.at("best_epoch").get<std::size_t>();
    m.report.stopping_epoch = r.at("stopping_epoch").get<std::size_t>();
    m.report.early_stopped = r.at("early_stopped").get<bool>();
    m.params.values = j.at("params").get<std::vector<double>>();
    if (m.params.values.size() != make_layout(m.config).total)
      throw DataError("checkpoint parameter count does not match its config");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_model_file(const TrainedModel& m, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open " + path + " for writing");
  save_model(m, f);
}

TrainedModel load_model_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open " + path);
  return load_model(f);
}

}  // namespace motifsp
