#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rxai/common.hpp"
#include "rxai/nttp.hpp"

namespace rxai {

enum class AttentionMode { absolute, disentangled };

std::string to_string(AttentionMode mode);
AttentionMode attention_mode_from_string(const std::string& name);

struct ModelConfig {
    int d_model = 32;
    int n_heads = 4;
    int n_layers = 2;
    int d_ffn = 64;
    int max_len = 128;
    AttentionMode attention_mode = AttentionMode::absolute;
    int relative_window = 8;  // disentangled mode only
    double dropout_rate = 0.0;
    std::uint64_t seed = 0;

    void validate() const;  // throws ConfigError
};

// All tensors are MatrixXd; vectors are stored 1 x n so the generic parameter
// walk (optimizer, checkpoints, gradient checks) sees a uniform shape.
struct LayerWeights {
    Eigen::MatrixXd wq, wk, wv, wo;  // d_model x d_model
    Eigen::MatrixXd bq, bk, bv, bo;  // 1 x d_model
    Eigen::MatrixXd wq_pos, wk_pos;  // d_model x d_model, disentangled only
    Eigen::MatrixXd ln1_scale, ln1_offset, ln2_scale, ln2_offset;  // 1 x d_model
    Eigen::MatrixXd ffn_w1;  // d_model x d_ffn
    Eigen::MatrixXd ffn_b1;  // 1 x d_ffn
    Eigen::MatrixXd ffn_w2;  // d_ffn x d_model
    Eigen::MatrixXd ffn_b2;  // 1 x d_model
};

struct TransformerClassifier {
    ModelConfig config;
    int vocab_size = 0;
    Eigen::MatrixXd token_embeddings;              // vocab x d_model
    Eigen::MatrixXd position_embeddings;           // max_len x d_model (absolute)
    Eigen::MatrixXd relative_position_embeddings;  // (2w+1) x d_model (disentangled)
    std::vector<LayerWeights> layers;
    Eigen::MatrixXd head_w;  // d_model x 2, logits ordered (Benign, Ransomware)
    Eigen::MatrixXd head_b;  // 1 x 2

    // Ordered live tensor set for the active attention mode.
    std::vector<std::pair<std::string, Eigen::MatrixXd*>> tensors();
    std::vector<std::pair<std::string, const Eigen::MatrixXd*>> tensors() const;

    // Same-shape container with every tensor zeroed (gradient accumulator).
    TransformerClassifier zeros_like() const;
};

// Seeded init: weights from a normal with std 0.02, biases and layer-norm
// offsets zero, layer-norm scales one.
TransformerClassifier init_model(const ModelConfig& config, int vocab_size);

struct ForwardResult {
    Eigen::MatrixXd logits;  // batch x 2
    // [example][layer][head]; each matrix covers the real (unpadded) length.
    std::vector<std::vector<std::vector<Eigen::MatrixXd>>> attentions;
};

ForwardResult forward(const TransformerClassifier& model,
                      const std::vector<EncodedExample>& batch,
                      bool capture_attention = false);

struct LossGrad {
    double loss = 0.0;
    TransformerClassifier grads;
};

// Mean softmax cross-entropy over the batch with exact gradients for the
// whole graph. `dropout_rng` enables dropout (training only).
LossGrad loss_and_grad(const TransformerClassifier& model,
                       const std::vector<EncodedExample>& batch,
                       Rng* dropout_rng = nullptr);

struct AdamWHyper {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.01;
};

struct AdamWState {
    std::vector<Eigen::MatrixXd> m, v;  // aligned with tensors() order
};

// One decoupled-decay update: m,v moments with bias correction, then
// p -= lr_t * (m_hat / (sqrt(v_hat) + eps) + weight_decay * p).
void adamw_step(TransformerClassifier& params, const TransformerClassifier& grads,
                AdamWState& state, long step, double lr_t, const AdamWHyper& hyper);

// Linear decay to zero, no warmup.
double lr_at(long step, long total_steps, double base_lr);

struct TrainConfig {
    // From-scratch default; the fine-tuning rate reported for the pretrained
    // setting (3e-5) stays selectable through the CLI.
    double learning_rate = 3e-4;
    int batch_size = 8;
    int epochs = 1;
    AdamWHyper adamw;
    std::uint64_t seed = 0;
};

struct TrainHistory {
    std::vector<double> step_loss;
    std::vector<double> val_accuracy;
    std::vector<double> val_f1;
};

TrainHistory train(TransformerClassifier& model,
                   const std::vector<EncodedExample>& train_set,
                   const std::vector<EncodedExample>& val_set,
                   const TrainConfig& config);

// Softmax probabilities in class order (Benign, Ransomware); pure, dropout off.
Eigen::MatrixXd predict_proba(const TransformerClassifier& model,
                              const std::vector<EncodedExample>& batch);

struct EmbeddingStats {
    double mean_pairwise_cosine = 0.0;
    std::vector<double> per_dimension_variance;
    double top_singular_share = 0.0;  // sigma_1^2 / sum sigma_i^2, centered
};

// Statistics over the non-special token embeddings.
EmbeddingStats embedding_stats(const TransformerClassifier& model);

// Single-file checkpoint: one JSON header line (config, vocab hash, class
// order, tensor manifest) followed by row-major little-endian f64 blocks.
// Round-trips bitwise.
void save_checkpoint(const TransformerClassifier& model, const std::string& path,
                     const std::string& vocab_hash);
TransformerClassifier load_checkpoint(const std::string& path,
                                      std::string* vocab_hash = nullptr);

}  // namespace rxai
