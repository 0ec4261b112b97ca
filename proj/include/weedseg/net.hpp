#ifndef WEEDSEG_NET_HPP
#define WEEDSEG_NET_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "weedseg/balance.hpp"
#include "weedseg/image.hpp"
#include "weedseg/tensor.hpp"

namespace weedseg {

// Argmax location within each 2x2 pooling window, 0..3 in row-major
// window order (ties take the first).
struct PoolIndices {
    int n = 0, c = 0, h = 0, w = 0;  // pooled (output) shape
    std::vector<uint8_t> idx;
};

// ---- layer primitives -------------------------------------------------

// Cross-correlation with zero padding preserving spatial dims (odd kernel).
// weights shape: (out_c, in_c, k, k); bias length out_c.
Tensor conv2d_forward(const Tensor& x, const Tensor& weights, const std::vector<float>& bias);
void conv2d_backward(const Tensor& x, const Tensor& weights, const Tensor& grad_out,
                     Tensor& grad_x, Tensor& grad_w, std::vector<float>& grad_b);

Tensor relu(const Tensor& x);
Tensor relu_backward(const Tensor& x, const Tensor& grad_out);

std::pair<Tensor, PoolIndices> maxpool2x2(const Tensor& x);
Tensor unpool2x2(const Tensor& y, const PoolIndices& idx);

// Numerically stable per-pixel softmax over the channel axis.
Tensor softmax_per_pixel(const Tensor& logits);

// loss = -(1/N) sum_p w[y_p] log(probs[y_p]), N = total pixel count;
// grad wrt logits assumes probs = softmax(logits). targets holds one
// label per pixel, sample-major row-major.
std::pair<double, Tensor> weighted_cross_entropy(const Tensor& probs,
                                                 const std::vector<uint8_t>& targets,
                                                 const ClassWeights& w);

// ---- network ----------------------------------------------------------

struct NetworkConfig {
    int in_channels = 3;  // 1 = NIR, 2 = NIR+Red, 3 = NIR+Red+NDVI
    int num_classes = kNumClasses;
    std::vector<int> encoder_channels = {16, 32};  // one conv+pool per entry
    int kernel = 3;
    uint64_t seed = 1;
    ClassWeights class_weights;

    int pool_multiple() const { return 1 << encoder_channels.size(); }
    void validate() const;
};

struct TrainConfig {
    double learning_rate = 0.001;
    int max_iterations = 2000;
    int batch_size = 6;
    double weight_decay = 0.005;
    double momentum = 0.0;
    int record_every = 10;  // history sampling period, iterations
};

struct ConvParams {
    Tensor weights;
    std::vector<float> bias;
};

// p <- p - lr * (g + wd * p), optional momentum buffer. Weight decay is
// not applied to biases.
void sgd_step(ConvParams& p, const Tensor& grad_w, const std::vector<float>& grad_b,
              Tensor& vel_w, std::vector<float>& vel_b, const TrainConfig& cfg);

// Encoder-decoder pixel classifier: per encoder entry a conv3x3+ReLU+pool,
// mirrored by unpool+conv3x3+ReLU, then a conv to class logits; decoder
// unpooling reuses the encoder's pooling indices.
class Network {
public:
    explicit Network(NetworkConfig cfg);  // He-uniform init from cfg.seed

    const NetworkConfig& config() const { return cfg_; }
    std::vector<ConvParams>& params() { return params_; }
    const std::vector<ConvParams>& params() const { return params_; }

    // Probabilities, shape (n, num_classes, h, w). Spatial dims must be
    // divisible by pool_multiple().
    Tensor forward(const Tensor& x) const;

    // Forward with cached activations, loss/grad, backward, SGD update.
    // Returns (loss, per-pixel probabilities).
    std::pair<double, Tensor> train_step(const Tensor& x, const std::vector<uint8_t>& targets,
                                         const TrainConfig& tc);

private:
    struct Cache;
    Tensor forward_impl(const Tensor& x, Cache* cache) const;

    NetworkConfig cfg_;
    std::vector<ConvParams> params_;  // encoder convs, decoder convs, classifier
    std::vector<ConvParams> velocity_;
};

struct TrainSample {
    Tensor x;  // (1, in_channels, h, w)
    std::vector<uint8_t> labels;
};

struct HistoryPoint {
    int iteration = 0;
    double loss = 0.0;
    double avg_class_accuracy = 0.0;
};

struct TrainResult {
    std::vector<HistoryPoint> history;
    double final_loss = 0.0;
};

// Minibatch SGD over shuffled epochs, fully deterministic given the seed.
// Aborts with a diagnostic on non-finite loss.
TrainResult train(Network& net, const std::vector<TrainSample>& dataset, const TrainConfig& tc,
                  uint64_t seed);

// Selects [NIR], [NIR, Red] or [NIR, Red, NDVI] per in_channels and
// standardizes each channel to a centered scale: reflectance bands map
// from [0,1] to [-2,2], NDVI from [-1,1] to [-2,2].
Tensor frame_to_tensor(const MultispectralFrame& frame, int in_channels);

ProbabilityMap infer(const MultispectralFrame& frame, const Network& net);

// Versioned binary checkpoint: config + shapes as JSON, raw little-endian
// float32 payloads. Loading validates shapes against the config.
void save_checkpoint(const Network& net, const std::string& path);
Network load_checkpoint(const std::string& path);

}  // namespace weedseg

#endif
