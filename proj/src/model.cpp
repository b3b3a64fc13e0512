#include "rxai/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "rxai/common.hpp"
#include "rxai/eval.hpp"

namespace rxai {

namespace {

using Eigen::MatrixXd;
using Eigen::RowVectorXd;

constexpr double kLnEps = 1e-5;

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x * M_SQRT1_2)); }

double gelu_grad(double x) {
    const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    return 0.5 * (1.0 + std::erf(x * M_SQRT1_2)) + x * phi;
}

using RowRef = Eigen::Ref<Eigen::RowVectorXd, 0, Eigen::InnerStride<>>;

void softmax_row_inplace(RowRef row) {
    double m = row.maxCoeff();
    row = (row.array() - m).exp();
    row /= row.sum();
}

struct LnCache {
    MatrixXd xhat;            // L x d
    Eigen::VectorXd invstd;   // per row
};

MatrixXd layer_norm(const MatrixXd& x, const MatrixXd& scale, const MatrixXd& offset,
                    LnCache& cache) {
    const auto rows = x.rows();
    const auto cols = x.cols();
    cache.xhat.resize(rows, cols);
    cache.invstd.resize(rows);
    MatrixXd out(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        double mean = x.row(r).mean();
        double var = (x.row(r).array() - mean).square().mean();
        double invstd = 1.0 / std::sqrt(var + kLnEps);
        cache.invstd(r) = invstd;
        cache.xhat.row(r) = (x.row(r).array() - mean) * invstd;
        out.row(r) = cache.xhat.row(r).cwiseProduct(scale.row(0)) + offset.row(0);
    }
    return out;
}

MatrixXd layer_norm_backward(const MatrixXd& dy, const LnCache& cache,
                             const MatrixXd& scale, MatrixXd& dscale,
                             MatrixXd& doffset) {
    const auto rows = dy.rows();
    const auto cols = dy.cols();
    MatrixXd dx(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        RowVectorXd dxhat = dy.row(r).cwiseProduct(scale.row(0));
        double mean_dxhat = dxhat.mean();
        double mean_dxhat_xhat = dxhat.cwiseProduct(cache.xhat.row(r)).mean();
        dx.row(r) = cache.invstd(r) *
                    (dxhat.array() - mean_dxhat -
                     cache.xhat.row(r).array() * mean_dxhat_xhat);
        dscale.row(0) += dy.row(r).cwiseProduct(cache.xhat.row(r));
        doffset.row(0) += dy.row(r);
    }
    return dx;
}

// Relative position of key j seen from query i, clipped to the window and
// shifted into table coordinates [0, 2w].
inline int rel_index(Eigen::Index i, Eigen::Index j, int window) {
    long d = static_cast<long>(j) - static_cast<long>(i);
    d = std::clamp<long>(d, -window, window);
    return static_cast<int>(d + window);
}

struct LayerCache {
    MatrixXd x_in;                  // L x d
    MatrixXd q, k, v;               // L x d
    MatrixXd qr, kr;                // (2w+1) x d, disentangled
    std::vector<MatrixXd> attn;     // per head, L x L softmax rows
    MatrixXd ctx;                   // L x d
    MatrixXd drop1, drop2;          // dropout masks (scaled), empty when off
    LnCache ln1, ln2;
    MatrixXd x1;                    // LN1 output
    MatrixXd ffn_pre;               // L x d_ffn
    MatrixXd ffn_act;               // gelu(ffn_pre)
    MatrixXd x_out;                 // layer output
};

struct ExampleCache {
    std::vector<int> ids;           // real tokens, CLS first
    MatrixXd x0;
    std::vector<LayerCache> layers;
    Eigen::RowVectorXd logits;      // 1 x 2
};

std::vector<int> real_ids(const TransformerClassifier& model, const EncodedExample& ex) {
    const std::size_t max_len = static_cast<std::size_t>(model.config.max_len);
    if (ex.token_ids.size() != max_len || ex.attention_mask.size() != max_len)
        throw DataError("encoded example length does not match the model max_len");
    std::vector<int> ids;
    bool in_pad = false;
    for (std::size_t t = 0; t < max_len; ++t) {
        if (ex.attention_mask[t]) {
            if (in_pad) throw DataError("attention mask has a gap; padding must be a suffix");
            int id = ex.token_ids[t];
            if (id < 0 || id >= model.vocab_size)
                throw DataError("token id " + std::to_string(id) + " out of range");
            ids.push_back(id);
        } else {
            in_pad = true;
        }
    }
    if (ids.empty() || ids[0] != TokenVocab::kCls)
        throw DataError("encoded example must start with CLS");
    return ids;
}

MatrixXd dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate, Rng& rng) {
    MatrixXd mask(rows, cols);
    const double keep = 1.0 - rate;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
            mask(r, c) = rng.uniform() < keep ? 1.0 / keep : 0.0;
    return mask;
}

void forward_one(const TransformerClassifier& model, const std::vector<int>& ids,
                 ExampleCache& cache, Rng* dropout_rng) {
    const ModelConfig& cfg = model.config;
    const Eigen::Index L = static_cast<Eigen::Index>(ids.size());
    const int d = cfg.d_model;
    const int dh = d / cfg.n_heads;
    const bool disentangled = cfg.attention_mode == AttentionMode::disentangled;
    const double scale = disentangled ? 1.0 / std::sqrt(3.0 * dh) : 1.0 / std::sqrt(double(dh));
    const double rate = cfg.dropout_rate;
    const bool use_dropout = dropout_rng != nullptr && rate > 0.0;

    cache.ids = ids;
    cache.x0.resize(L, d);
    for (Eigen::Index t = 0; t < L; ++t) {
        cache.x0.row(t) = model.token_embeddings.row(ids[t]);
        if (!disentangled) cache.x0.row(t) += model.position_embeddings.row(t);
    }

    cache.layers.assign(cfg.n_layers, LayerCache{});
    MatrixXd x = cache.x0;
    for (int l = 0; l < cfg.n_layers; ++l) {
        const LayerWeights& w = model.layers[l];
        LayerCache& lc = cache.layers[l];
        lc.x_in = x;

        lc.q = (x * w.wq).rowwise() + w.bq.row(0);
        lc.k = (x * w.wk).rowwise() + w.bk.row(0);
        lc.v = (x * w.wv).rowwise() + w.bv.row(0);
        if (disentangled) {
            lc.qr = model.relative_position_embeddings * w.wq_pos;
            lc.kr = model.relative_position_embeddings * w.wk_pos;
        }

        lc.attn.assign(cfg.n_heads, MatrixXd());
        lc.ctx.resize(L, d);
        for (int h = 0; h < cfg.n_heads; ++h) {
            auto qh = lc.q.middleCols(h * dh, dh);
            auto kh = lc.k.middleCols(h * dh, dh);
            auto vh = lc.v.middleCols(h * dh, dh);
            MatrixXd scores = qh * kh.transpose();
            if (disentangled) {
                MatrixXd c2p = qh * lc.kr.middleCols(h * dh, dh).transpose();
                MatrixXd p2c = kh * lc.qr.middleCols(h * dh, dh).transpose();
                for (Eigen::Index i = 0; i < L; ++i)
                    for (Eigen::Index j = 0; j < L; ++j)
                        scores(i, j) += c2p(i, rel_index(i, j, cfg.relative_window)) +
                                        p2c(j, rel_index(j, i, cfg.relative_window));
            }
            scores *= scale;
            for (Eigen::Index i = 0; i < L; ++i) softmax_row_inplace(scores.row(i));
            lc.attn[h] = scores;
            lc.ctx.middleCols(h * dh, dh) = scores * vh;
        }

        MatrixXd attn_out = (lc.ctx * w.wo).rowwise() + w.bo.row(0);
        if (use_dropout) {
            lc.drop1 = dropout_mask(L, d, rate, *dropout_rng);
            attn_out = attn_out.cwiseProduct(lc.drop1);
        }
        lc.x1 = layer_norm(lc.x_in + attn_out, w.ln1_scale, w.ln1_offset, lc.ln1);

        lc.ffn_pre = (lc.x1 * w.ffn_w1).rowwise() + w.ffn_b1.row(0);
        lc.ffn_act = lc.ffn_pre.unaryExpr([](double v) { return gelu(v); });
        MatrixXd ffn_out = (lc.ffn_act * w.ffn_w2).rowwise() + w.ffn_b2.row(0);
        if (use_dropout) {
            lc.drop2 = dropout_mask(L, d, rate, *dropout_rng);
            ffn_out = ffn_out.cwiseProduct(lc.drop2);
        }
        lc.x_out = layer_norm(lc.x1 + ffn_out, w.ln2_scale, w.ln2_offset, lc.ln2);
        x = lc.x_out;
    }

    cache.logits = x.row(0) * model.head_w + model.head_b.row(0);
    if (!cache.logits.allFinite()) throw NumericError("non-finite logits in forward pass");
}

void backward_one(const TransformerClassifier& model, const ExampleCache& cache,
                  const Eigen::RowVectorXd& dlogits, TransformerClassifier& grads) {
    const ModelConfig& cfg = model.config;
    const Eigen::Index L = static_cast<Eigen::Index>(cache.ids.size());
    const int d = cfg.d_model;
    const int dh = d / cfg.n_heads;
    const bool disentangled = cfg.attention_mode == AttentionMode::disentangled;
    const double scale = disentangled ? 1.0 / std::sqrt(3.0 * dh) : 1.0 / std::sqrt(double(dh));

    const MatrixXd& x_final = cfg.n_layers > 0 ? cache.layers.back().x_out : cache.x0;
    grads.head_w += x_final.row(0).transpose() * dlogits;
    grads.head_b.row(0) += dlogits;

    MatrixXd dx = MatrixXd::Zero(L, d);
    dx.row(0) = dlogits * model.head_w.transpose();

    for (int l = cfg.n_layers - 1; l >= 0; --l) {
        const LayerWeights& w = model.layers[l];
        LayerWeights& g = grads.layers[l];
        const LayerCache& lc = cache.layers[l];

        MatrixXd dr2 = layer_norm_backward(dx, lc.ln2, w.ln2_scale, g.ln2_scale, g.ln2_offset);
        MatrixXd dx1 = dr2;
        MatrixXd dffn_out = lc.drop2.size() ? dr2.cwiseProduct(lc.drop2) : dr2;

        MatrixXd dact = dffn_out * w.ffn_w2.transpose();
        g.ffn_w2 += lc.ffn_act.transpose() * dffn_out;
        g.ffn_b2.row(0) += dffn_out.colwise().sum();
        MatrixXd dpre = dact.cwiseProduct(
            lc.ffn_pre.unaryExpr([](double v) { return gelu_grad(v); }));
        dx1 += dpre * w.ffn_w1.transpose();
        g.ffn_w1 += lc.x1.transpose() * dpre;
        g.ffn_b1.row(0) += dpre.colwise().sum();

        MatrixXd dr1 = layer_norm_backward(dx1, lc.ln1, w.ln1_scale, g.ln1_scale, g.ln1_offset);
        MatrixXd dx_in = dr1;
        MatrixXd dattn_out = lc.drop1.size() ? dr1.cwiseProduct(lc.drop1) : dr1;

        MatrixXd dctx = dattn_out * w.wo.transpose();
        g.wo += lc.ctx.transpose() * dattn_out;
        g.bo.row(0) += dattn_out.colwise().sum();

        MatrixXd dq = MatrixXd::Zero(L, d);
        MatrixXd dk = MatrixXd::Zero(L, d);
        MatrixXd dv = MatrixXd::Zero(L, d);
        MatrixXd dqr, dkr;
        if (disentangled) {
            dqr = MatrixXd::Zero(lc.qr.rows(), d);
            dkr = MatrixXd::Zero(lc.kr.rows(), d);
        }

        for (int h = 0; h < cfg.n_heads; ++h) {
            auto qh = lc.q.middleCols(h * dh, dh);
            auto kh = lc.k.middleCols(h * dh, dh);
            auto vh = lc.v.middleCols(h * dh, dh);
            const MatrixXd& attn = lc.attn[h];
            MatrixXd dctx_h = dctx.middleCols(h * dh, dh);

            MatrixXd dattn = dctx_h * vh.transpose();
            dv.middleCols(h * dh, dh) += attn.transpose() * dctx_h;

            MatrixXd dscores(L, L);
            for (Eigen::Index i = 0; i < L; ++i) {
                double dot = dattn.row(i).dot(attn.row(i));
                dscores.row(i) = attn.row(i).array() * (dattn.row(i).array() - dot);
            }
            dscores *= scale;

            dq.middleCols(h * dh, dh) += dscores * kh;
            dk.middleCols(h * dh, dh) += dscores.transpose() * qh;
            if (disentangled) {
                const int w_sz = 2 * cfg.relative_window + 1;
                MatrixXd dc2p = MatrixXd::Zero(L, w_sz);
                MatrixXd dp2c = MatrixXd::Zero(L, w_sz);
                for (Eigen::Index i = 0; i < L; ++i) {
                    for (Eigen::Index j = 0; j < L; ++j) {
                        dc2p(i, rel_index(i, j, cfg.relative_window)) += dscores(i, j);
                        dp2c(j, rel_index(j, i, cfg.relative_window)) += dscores(i, j);
                    }
                }
                auto krh = lc.kr.middleCols(h * dh, dh);
                auto qrh = lc.qr.middleCols(h * dh, dh);
                dq.middleCols(h * dh, dh) += dc2p * krh;
                dkr.middleCols(h * dh, dh) += dc2p.transpose() * qh;
                dk.middleCols(h * dh, dh) += dp2c * qrh;
                dqr.middleCols(h * dh, dh) += dp2c.transpose() * kh;
            }
        }

        dx_in += dq * w.wq.transpose() + dk * w.wk.transpose() + dv * w.wv.transpose();
        g.wq += lc.x_in.transpose() * dq;
        g.bq.row(0) += dq.colwise().sum();
        g.wk += lc.x_in.transpose() * dk;
        g.bk.row(0) += dk.colwise().sum();
        g.wv += lc.x_in.transpose() * dv;
        g.bv.row(0) += dv.colwise().sum();
        if (disentangled) {
            g.wq_pos += model.relative_position_embeddings.transpose() * dqr;
            g.wk_pos += model.relative_position_embeddings.transpose() * dkr;
            grads.relative_position_embeddings +=
                dqr * w.wq_pos.transpose() + dkr * w.wk_pos.transpose();
        }
        dx = dx_in;
    }

    for (Eigen::Index t = 0; t < L; ++t) {
        grads.token_embeddings.row(cache.ids[t]) += dx.row(t);
        if (!disentangled) grads.position_embeddings.row(t) += dx.row(t);
    }
}

void fill_normal(MatrixXd& m, double std, Rng& rng) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = std * rng.normal();
}

}  // namespace

std::string to_string(AttentionMode mode) {
    return mode == AttentionMode::absolute ? "absolute" : "disentangled";
}

AttentionMode attention_mode_from_string(const std::string& name) {
    if (name == "absolute") return AttentionMode::absolute;
    if (name == "disentangled") return AttentionMode::disentangled;
    throw ConfigError("unknown attention mode '" + name + "'");
}

void ModelConfig::validate() const {
    if (d_model < 1 || n_heads < 1 || n_layers < 1 || d_ffn < 1 || max_len < 1)
        throw ConfigError("model dimensions must be at least 1");
    if (d_model % n_heads != 0)
        throw ConfigError("d_model must be divisible by n_heads");
    if (relative_window < 1) throw ConfigError("relative_window must be at least 1");
    if (dropout_rate < 0.0 || dropout_rate >= 1.0)
        throw ConfigError("dropout_rate must be in [0, 1)");
}

std::vector<std::pair<std::string, Eigen::MatrixXd*>> TransformerClassifier::tensors() {
    std::vector<std::pair<std::string, MatrixXd*>> out;
    out.emplace_back("token_embeddings", &token_embeddings);
    if (config.attention_mode == AttentionMode::absolute)
        out.emplace_back("position_embeddings", &position_embeddings);
    else
        out.emplace_back("relative_position_embeddings", &relative_position_embeddings);
    for (std::size_t l = 0; l < layers.size(); ++l) {
        auto name = [&](const char* tensor) {
            return "layer" + std::to_string(l) + "." + tensor;
        };
        LayerWeights& w = layers[l];
        out.emplace_back(name("wq"), &w.wq);
        out.emplace_back(name("bq"), &w.bq);
        out.emplace_back(name("wk"), &w.wk);
        out.emplace_back(name("bk"), &w.bk);
        out.emplace_back(name("wv"), &w.wv);
        out.emplace_back(name("bv"), &w.bv);
        if (config.attention_mode == AttentionMode::disentangled) {
            out.emplace_back(name("wq_pos"), &w.wq_pos);
            out.emplace_back(name("wk_pos"), &w.wk_pos);
        }
        out.emplace_back(name("wo"), &w.wo);
        out.emplace_back(name("bo"), &w.bo);
        out.emplace_back(name("ln1_scale"), &w.ln1_scale);
        out.emplace_back(name("ln1_offset"), &w.ln1_offset);
        out.emplace_back(name("ffn_w1"), &w.ffn_w1);
        out.emplace_back(name("ffn_b1"), &w.ffn_b1);
        out.emplace_back(name("ffn_w2"), &w.ffn_w2);
        out.emplace_back(name("ffn_b2"), &w.ffn_b2);
        out.emplace_back(name("ln2_scale"), &w.ln2_scale);
        out.emplace_back(name("ln2_offset"), &w.ln2_offset);
    }
    out.emplace_back("head_w", &head_w);
    out.emplace_back("head_b", &head_b);
    return out;
}

std::vector<std::pair<std::string, const Eigen::MatrixXd*>> TransformerClassifier::tensors()
    const {
    auto mut = const_cast<TransformerClassifier*>(this)->tensors();
    std::vector<std::pair<std::string, const MatrixXd*>> out;
    out.reserve(mut.size());
    for (auto& [name, tensor] : mut) out.emplace_back(name, tensor);
    return out;
}

TransformerClassifier TransformerClassifier::zeros_like() const {
    TransformerClassifier z = *this;
    for (auto& [name, tensor] : z.tensors()) tensor->setZero();
    return z;
}

TransformerClassifier init_model(const ModelConfig& config, int vocab_size) {
    config.validate();
    if (vocab_size < 4) throw ConfigError("vocab_size must be at least 4");

    TransformerClassifier model;
    model.config = config;
    model.vocab_size = vocab_size;

    const int d = config.d_model;
    Rng rng(config.seed);
    const double std = 0.02;

    model.token_embeddings.resize(vocab_size, d);
    fill_normal(model.token_embeddings, std, rng);
    if (config.attention_mode == AttentionMode::absolute) {
        model.position_embeddings.resize(config.max_len, d);
        fill_normal(model.position_embeddings, std, rng);
        model.relative_position_embeddings.resize(0, 0);
    } else {
        model.relative_position_embeddings.resize(2 * config.relative_window + 1, d);
        fill_normal(model.relative_position_embeddings, std, rng);
        model.position_embeddings.resize(0, 0);
    }

    model.layers.resize(config.n_layers);
    for (auto& w : model.layers) {
        w.wq.resize(d, d);
        w.wk.resize(d, d);
        w.wv.resize(d, d);
        w.wo.resize(d, d);
        fill_normal(w.wq, std, rng);
        fill_normal(w.wk, std, rng);
        fill_normal(w.wv, std, rng);
        fill_normal(w.wo, std, rng);
        w.bq = MatrixXd::Zero(1, d);
        w.bk = MatrixXd::Zero(1, d);
        w.bv = MatrixXd::Zero(1, d);
        w.bo = MatrixXd::Zero(1, d);
        if (config.attention_mode == AttentionMode::disentangled) {
            w.wq_pos.resize(d, d);
            w.wk_pos.resize(d, d);
            fill_normal(w.wq_pos, std, rng);
            fill_normal(w.wk_pos, std, rng);
        } else {
            w.wq_pos.resize(0, 0);
            w.wk_pos.resize(0, 0);
        }
        w.ln1_scale = MatrixXd::Ones(1, d);
        w.ln1_offset = MatrixXd::Zero(1, d);
        w.ln2_scale = MatrixXd::Ones(1, d);
        w.ln2_offset = MatrixXd::Zero(1, d);
        w.ffn_w1.resize(d, config.d_ffn);
        w.ffn_w2.resize(config.d_ffn, d);
        fill_normal(w.ffn_w1, std, rng);
        fill_normal(w.ffn_w2, std, rng);
        w.ffn_b1 = MatrixXd::Zero(1, config.d_ffn);
        w.ffn_b2 = MatrixXd::Zero(1, d);
    }

    model.head_w.resize(d, 2);
    fill_normal(model.head_w, std, rng);
    model.head_b = MatrixXd::Zero(1, 2);
    return model;
}

ForwardResult forward(const TransformerClassifier& model,
                      const std::vector<EncodedExample>& batch, bool capture_attention) {
    ForwardResult result;
    result.logits.resize(static_cast<Eigen::Index>(batch.size()), 2);
    if (capture_attention) result.attentions.resize(batch.size());
    for (std::size_t b = 0; b < batch.size(); ++b) {
        ExampleCache cache;
        forward_one(model, real_ids(model, batch[b]), cache, nullptr);
        result.logits.row(static_cast<Eigen::Index>(b)) = cache.logits;
        if (capture_attention) {
            auto& per_layer = result.attentions[b];
            per_layer.reserve(cache.layers.size());
            for (const auto& lc : cache.layers) per_layer.push_back(lc.attn);
        }
    }
    return result;
}

LossGrad loss_and_grad(const TransformerClassifier& model,
                       const std::vector<EncodedExample>& batch, Rng* dropout_rng) {
    if (batch.empty()) throw DataError("loss_and_grad needs a non-empty batch");
    LossGrad out;
    out.grads = model.zeros_like();
    const double inv_b = 1.0 / static_cast<double>(batch.size());
    for (const auto& ex : batch) {
        if (ex.label != 0 && ex.label != 1)
            throw DataError("example label must be 0 or 1");
        ExampleCache cache;
        forward_one(model, real_ids(model, ex), cache, dropout_rng);

        // loss = logsumexp(logits) - logits[label]
        double m = cache.logits.maxCoeff();
        double lse = m + std::log((cache.logits.array() - m).exp().sum());
        out.loss += (lse - cache.logits(ex.label)) * inv_b;

        Eigen::RowVectorXd probs = cache.logits;
        softmax_row_inplace(probs);
        probs(ex.label) -= 1.0;
        backward_one(model, cache, probs * inv_b, out.grads);
    }
    return out;
}

void adamw_step(TransformerClassifier& params, const TransformerClassifier& grads,
                AdamWState& state, long step, double lr_t, const AdamWHyper& hyper) {
    if (step < 1) throw ConfigError("adamw step index starts at 1");
    auto p = params.tensors();
    auto g = grads.tensors();
    if (p.size() != g.size()) throw ConfigError("parameter/gradient tensor count mismatch");
    if (state.m.empty()) {
        state.m.reserve(p.size());
        state.v.reserve(p.size());
        for (auto& [name, tensor] : p) {
            state.m.push_back(MatrixXd::Zero(tensor->rows(), tensor->cols()));
            state.v.push_back(MatrixXd::Zero(tensor->rows(), tensor->cols()));
        }
    }
    const double bc1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(step));
    for (std::size_t i = 0; i < p.size(); ++i) {
        MatrixXd& param = *p[i].second;
        const MatrixXd& grad = *g[i].second;
        if (param.rows() != grad.rows() || param.cols() != grad.cols())
            throw ConfigError("gradient shape mismatch for tensor " + p[i].first);
        state.m[i] = hyper.beta1 * state.m[i] + (1.0 - hyper.beta1) * grad;
        state.v[i] = hyper.beta2 * state.v[i].array() +
                     (1.0 - hyper.beta2) * grad.array().square();
        param.array() -= lr_t * ((state.m[i].array() / bc1) /
                                     ((state.v[i].array() / bc2).sqrt() + hyper.eps) +
                                 hyper.weight_decay * param.array());
    }
}

double lr_at(long step, long total_steps, double base_lr) {
    if (total_steps <= 0) throw ConfigError("total_steps must be positive");
    if (step < 0 || step > total_steps)
        throw ConfigError("step must lie in [0, total_steps]");
    return base_lr * (1.0 - static_cast<double>(step) / static_cast<double>(total_steps));
}

TrainHistory train(TransformerClassifier& model,
                   const std::vector<EncodedExample>& train_set,
                   const std::vector<EncodedExample>& val_set, const TrainConfig& config) {
    if (train_set.empty() || val_set.empty())
        throw DataError("train and validation sets must be non-empty");
    if (config.batch_size < 1) throw ConfigError("batch_size must be at least 1");
    if (config.epochs < 1) throw ConfigError("epochs must be at least 1");

    TrainHistory history;
    const long n = static_cast<long>(train_set.size());
    const long steps_per_epoch = (n + config.batch_size - 1) / config.batch_size;
    const long total_steps = steps_per_epoch * config.epochs;

    AdamWState state;
    long step = 0;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        std::vector<int> order(n);
        for (long i = 0; i < n; ++i) order[i] = static_cast<int>(i);
        Rng shuffle_rng(mix_seed(config.seed, 0x45504f43ULL + static_cast<std::uint64_t>(epoch)));
        shuffle_rng.shuffle(order);

        for (long start = 0; start < n; start += config.batch_size) {
            long stop = std::min(n, start + config.batch_size);
            std::vector<EncodedExample> batch;
            batch.reserve(stop - start);
            for (long i = start; i < stop; ++i) batch.push_back(train_set[order[i]]);

            double lr_step = lr_at(step, total_steps, config.learning_rate);
            LossGrad lg;
            if (model.config.dropout_rate > 0.0) {
                Rng dropout_rng(mix_seed(config.seed, 0xd09d09ULL + static_cast<std::uint64_t>(step)));
                lg = loss_and_grad(model, batch, &dropout_rng);
            } else {
                lg = loss_and_grad(model, batch, nullptr);
            }
            adamw_step(model, lg.grads, state, step + 1, lr_step, config.adamw);
            history.step_loss.push_back(lg.loss);
            ++step;
        }

        Eigen::MatrixXd probs = predict_proba(model, val_set);
        std::vector<int> predicted(val_set.size()), actual(val_set.size());
        for (std::size_t i = 0; i < val_set.size(); ++i) {
            predicted[i] = probs(static_cast<Eigen::Index>(i), 1) >
                                   probs(static_cast<Eigen::Index>(i), 0)
                               ? 1
                               : 0;
            actual[i] = val_set[i].label;
        }
        ConfusionMatrix cm = confusion(predicted, actual);
        Metrics m = metrics(cm);
        history.val_accuracy.push_back(m.accuracy);
        history.val_f1.push_back(m.f1);
    }
    return history;
}

Eigen::MatrixXd predict_proba(const TransformerClassifier& model,
                              const std::vector<EncodedExample>& batch) {
    Eigen::MatrixXd probs = forward(model, batch).logits;
    for (Eigen::Index r = 0; r < probs.rows(); ++r) softmax_row_inplace(probs.row(r));
    return probs;
}

EmbeddingStats embedding_stats(const TransformerClassifier& model) {
    const int first = 3;  // skip PAD/UNK/CLS
    const int n = model.vocab_size - first;
    if (n < 2) throw DataError("embedding stats need at least two non-special tokens");
    MatrixXd emb = model.token_embeddings.bottomRows(n);

    EmbeddingStats stats;
    double cosine_sum = 0.0;
    long pairs = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double denom = emb.row(i).norm() * emb.row(j).norm();
            if (denom > 0.0) cosine_sum += emb.row(i).dot(emb.row(j)) / denom;
            ++pairs;
        }
    }
    stats.mean_pairwise_cosine = cosine_sum / static_cast<double>(pairs);

    RowVectorXd mean = emb.colwise().mean();
    MatrixXd centered = emb.rowwise() - mean;
    stats.per_dimension_variance.resize(emb.cols());
    for (Eigen::Index c = 0; c < emb.cols(); ++c)
        stats.per_dimension_variance[c] =
            centered.col(c).squaredNorm() / static_cast<double>(n);

    Eigen::JacobiSVD<MatrixXd> svd(centered);
    double total = svd.singularValues().array().square().sum();
    stats.top_singular_share =
        total > 0.0 ? svd.singularValues()(0) * svd.singularValues()(0) / total : 1.0;
    return stats;
}

void save_checkpoint(const TransformerClassifier& model, const std::string& path,
                     const std::string& vocab_hash) {
    static_assert(std::endian::native == std::endian::little,
                  "checkpoint blocks are little-endian");
    nlohmann::json header;
    header["format"] = "rxai-checkpoint-v1";
    header["class_order"] = {"Benign", "Ransomware"};
    header["vocab_hash"] = vocab_hash;
    header["vocab_size"] = model.vocab_size;
    const ModelConfig& c = model.config;
    header["config"] = {{"d_model", c.d_model},
                        {"n_heads", c.n_heads},
                        {"n_layers", c.n_layers},
                        {"d_ffn", c.d_ffn},
                        {"max_len", c.max_len},
                        {"attention_mode", to_string(c.attention_mode)},
                        {"relative_window", c.relative_window},
                        {"dropout_rate", c.dropout_rate},
                        {"seed", c.seed}};
    nlohmann::json manifest = nlohmann::json::array();
    for (const auto& [name, tensor] : model.tensors())
        manifest.push_back({{"name", name}, {"rows", tensor->rows()}, {"cols", tensor->cols()}});
    header["tensors"] = manifest;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write checkpoint: " + path);
    out << header.dump() << '\n';
    for (const auto& [name, tensor] : model.tensors()) {
        for (Eigen::Index r = 0; r < tensor->rows(); ++r) {
            for (Eigen::Index col = 0; col < tensor->cols(); ++col) {
                double v = (*tensor)(r, col);
                out.write(reinterpret_cast<const char*>(&v), sizeof(double));
            }
        }
    }
}

TransformerClassifier load_checkpoint(const std::string& path, std::string* vocab_hash) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open checkpoint: " + path);
    std::string header_line;
    if (!std::getline(in, header_line)) throw DataError("checkpoint has no header: " + path);
    nlohmann::json header = nlohmann::json::parse(header_line);
    if (header.value("format", "") != "rxai-checkpoint-v1")
        throw DataError("unrecognized checkpoint format in " + path);

    ModelConfig config;
    const auto& jc = header.at("config");
    config.d_model = jc.at("d_model").get<int>();
    config.n_heads = jc.at("n_heads").get<int>();
    config.n_layers = jc.at("n_layers").get<int>();
    config.d_ffn = jc.at("d_ffn").get<int>();
    config.max_len = jc.at("max_len").get<int>();
    config.attention_mode = attention_mode_from_string(jc.at("attention_mode").get<std::string>());
    config.relative_window = jc.at("relative_window").get<int>();
    config.dropout_rate = jc.at("dropout_rate").get<double>();
    config.seed = jc.at("seed").get<std::uint64_t>();

    TransformerClassifier model = init_model(config, header.at("vocab_size").get<int>());
    auto tensors = model.tensors();
    const auto& manifest = header.at("tensors");
    if (manifest.size() != tensors.size())
        throw DataError("checkpoint tensor manifest does not match the model layout");
    for (std::size_t i = 0; i < tensors.size(); ++i) {
        const auto& entry = manifest[i];
        MatrixXd& tensor = *tensors[i].second;
        if (entry.at("name") != tensors[i].first ||
            entry.at("rows").get<Eigen::Index>() != tensor.rows() ||
            entry.at("cols").get<Eigen::Index>() != tensor.cols())
            throw DataError("checkpoint tensor '" + tensors[i].first + "' has unexpected shape");
        for (Eigen::Index r = 0; r < tensor.rows(); ++r) {
            for (Eigen::Index c = 0; c < tensor.cols(); ++c) {
                double v;
                in.read(reinterpret_cast<char*>(&v), sizeof(double));
                if (!in) throw DataError("checkpoint truncated: " + path);
                tensor(r, c) = v;
            }
        }
    }
    if (vocab_hash) *vocab_hash = header.value("vocab_hash", "");
    return model;
}

}  // namespace rxai
