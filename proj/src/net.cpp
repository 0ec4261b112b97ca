#include "weedseg/net.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace weedseg {

Tensor conv2d_forward(const Tensor& x, const Tensor& weights, const std::vector<float>& bias) {
    const int k = weights.h;
    if (weights.w != k || k % 2 == 0)
        throw std::invalid_argument("conv2d_forward: kernel must be square and odd");
    if (weights.c != x.c) throw std::invalid_argument("conv2d_forward: channel mismatch");
    if (int(bias.size()) != weights.n) throw std::invalid_argument("conv2d_forward: bias size mismatch");
    const int r = k / 2;
    const int oc = weights.n, ic = x.c, h = x.h, w = x.w;

    Tensor out(x.n, oc, h, w);
    for (int in = 0; in < x.n; ++in) {
        for (int o = 0; o < oc; ++o) {
            float* op = &out.data[out.index(in, o, 0, 0)];
            for (size_t i = 0; i < size_t(h) * w; ++i) op[i] = bias[size_t(o)];
            for (int i = 0; i < ic; ++i) {
                const float* xp = &x.data[x.index(in, i, 0, 0)];
                for (int ky = 0; ky < k; ++ky) {
                    for (int kx = 0; kx < k; ++kx) {
                        const float wv = weights.at(o, i, ky, kx);
                        if (wv == 0.0f) continue;
                        const int dy = ky - r, dx = kx - r;
                        const int y0 = std::max(0, -dy), y1 = std::min(h, h - dy);
                        const int x0 = std::max(0, -dx), x1 = std::min(w, w - dx);
                        for (int y = y0; y < y1; ++y) {
                            float* orow = op + size_t(y) * w;
                            const float* xrow = xp + size_t(y + dy) * w + dx;
                            for (int xx = x0; xx < x1; ++xx) orow[xx] += wv * xrow[xx];
                        }
                    }
                }
            }
        }
    }
    return out;
}

void conv2d_backward(const Tensor& x, const Tensor& weights, const Tensor& grad_out,
                     Tensor& grad_x, Tensor& grad_w, std::vector<float>& grad_b) {
    const int k = weights.h, r = k / 2;
    const int oc = weights.n, ic = x.c, h = x.h, w = x.w;
    if (grad_out.n != x.n || grad_out.c != oc || grad_out.h != h || grad_out.w != w)
        throw std::invalid_argument("conv2d_backward: grad_out shape mismatch");

    grad_x = Tensor(x.n, ic, h, w);
    grad_w = Tensor(oc, ic, k, k);
    grad_b.assign(size_t(oc), 0.0f);

    for (int in = 0; in < x.n; ++in) {
        for (int o = 0; o < oc; ++o) {
            const float* gp = &grad_out.data[grad_out.index(in, o, 0, 0)];
            double bsum = 0.0;
            for (size_t i = 0; i < size_t(h) * w; ++i) bsum += gp[i];
            grad_b[size_t(o)] += float(bsum);
            for (int i = 0; i < ic; ++i) {
                const float* xp = &x.data[x.index(in, i, 0, 0)];
                float* gxp = &grad_x.data[grad_x.index(in, i, 0, 0)];
                for (int ky = 0; ky < k; ++ky) {
                    for (int kx = 0; kx < k; ++kx) {
                        const int dy = ky - r, dx = kx - r;
                        const int y0 = std::max(0, -dy), y1 = std::min(h, h - dy);
                        const int x0 = std::max(0, -dx), x1 = std::min(w, w - dx);
                        const float wv = weights.at(o, i, ky, kx);
                        double wsum = 0.0;
                        for (int y = y0; y < y1; ++y) {
                            const float* grow = gp + size_t(y) * w;
                            const float* xrow = xp + size_t(y + dy) * w + dx;
                            float* gxrow = gxp + size_t(y + dy) * w + dx;
                            for (int xx = x0; xx < x1; ++xx) {
                                wsum += double(grow[xx]) * xrow[xx];
                                gxrow[xx] += wv * grow[xx];
                            }
                        }
                        grad_w.at(o, i, ky, kx) += float(wsum);
                    }
                }
            }
        }
    }
}

Tensor relu(const Tensor& x) {
    Tensor out = x;
    for (float& v : out.data) v = v > 0.0f ? v : 0.0f;
    return out;
}

Tensor relu_backward(const Tensor& x, const Tensor& grad_out) {
    if (!x.same_shape(grad_out)) throw std::invalid_argument("relu_backward: shape mismatch");
    Tensor out = grad_out;
    for (size_t i = 0; i < out.data.size(); ++i)
        if (x.data[i] <= 0.0f) out.data[i] = 0.0f;
    return out;
}

std::pair<Tensor, PoolIndices> maxpool2x2(const Tensor& x) {
    if (x.h % 2 != 0 || x.w % 2 != 0)
        throw std::invalid_argument("maxpool2x2: spatial dims must be even");
    const int oh = x.h / 2, ow = x.w / 2;
    Tensor out(x.n, x.c, oh, ow);
    PoolIndices idx{x.n, x.c, oh, ow, std::vector<uint8_t>(out.size())};
    for (int in = 0; in < x.n; ++in) {
        for (int c = 0; c < x.c; ++c) {
            for (int y = 0; y < oh; ++y) {
                for (int xx = 0; xx < ow; ++xx) {
                    float best = x.at(in, c, 2 * y, 2 * xx);
                    uint8_t bi = 0;
                    // row-major window scan; first occurrence wins ties
                    for (uint8_t wi = 1; wi < 4; ++wi) {
                        const float v = x.at(in, c, 2 * y + wi / 2, 2 * xx + wi % 2);
                        if (v > best) {
                            best = v;
                            bi = wi;
                        }
                    }
                    out.at(in, c, y, xx) = best;
                    idx.idx[out.index(in, c, y, xx)] = bi;
                }
            }
        }
    }
    return {std::move(out), std::move(idx)};
}

Tensor unpool2x2(const Tensor& y, const PoolIndices& idx) {
    if (y.n != idx.n || y.c != idx.c || y.h != idx.h || y.w != idx.w)
        throw std::invalid_argument("unpool2x2: indices shape mismatch");
    Tensor out(y.n, y.c, y.h * 2, y.w * 2);
    for (int in = 0; in < y.n; ++in) {
        for (int c = 0; c < y.c; ++c) {
            for (int yy = 0; yy < y.h; ++yy) {
                for (int xx = 0; xx < y.w; ++xx) {
                    const uint8_t wi = idx.idx[y.index(in, c, yy, xx)];
                    if (wi > 3) throw std::invalid_argument("unpool2x2: index outside window");
                    out.at(in, c, 2 * yy + wi / 2, 2 * xx + wi % 2) = y.at(in, c, yy, xx);
                }
            }
        }
    }
    return out;
}

Tensor softmax_per_pixel(const Tensor& logits) {
    Tensor out(logits.n, logits.c, logits.h, logits.w);
    const size_t plane = logits.plane();
    for (int in = 0; in < logits.n; ++in) {
        for (size_t p = 0; p < plane; ++p) {
            const size_t base = size_t(in) * logits.c * plane + p;
            float mx = logits.data[base];
            for (int c = 1; c < logits.c; ++c)
                mx = std::max(mx, logits.data[base + size_t(c) * plane]);
            double sum = 0.0;
            for (int c = 0; c < logits.c; ++c) {
                const double e = std::exp(double(logits.data[base + size_t(c) * plane]) - mx);
                out.data[base + size_t(c) * plane] = float(e);
                sum += e;
            }
            const float inv = float(1.0 / sum);
            for (int c = 0; c < logits.c; ++c) out.data[base + size_t(c) * plane] *= inv;
        }
    }
    return out;
}

std::pair<double, Tensor> weighted_cross_entropy(const Tensor& probs,
                                                 const std::vector<uint8_t>& targets,
                                                 const ClassWeights& w) {
    const size_t plane = probs.plane();
    const size_t npix = size_t(probs.n) * plane;
    if (targets.size() != npix)
        throw std::invalid_argument("weighted_cross_entropy: target count mismatch");
    Tensor grad(probs.n, probs.c, probs.h, probs.w);
    double loss = 0.0;
    const float invn = float(1.0 / double(npix));
    for (int in = 0; in < probs.n; ++in) {
        for (size_t p = 0; p < plane; ++p) {
            const uint8_t y = targets[size_t(in) * plane + p];
            if (y >= probs.c)
                throw std::invalid_argument("weighted_cross_entropy: label outside class range");
            const size_t base = size_t(in) * probs.c * plane + p;
            const float wy = float(w.w[y]);
            loss -= double(wy) * std::log(std::max(double(probs.data[base + size_t(y) * plane]), 1e-12));
            for (int c = 0; c < probs.c; ++c) {
                float g = probs.data[base + size_t(c) * plane];
                if (c == y) g -= 1.0f;
                grad.data[base + size_t(c) * plane] = invn * wy * g;
            }
        }
    }
    return {loss / double(npix), std::move(grad)};
}

void sgd_step(ConvParams& p, const Tensor& grad_w, const std::vector<float>& grad_b,
              Tensor& vel_w, std::vector<float>& vel_b, const TrainConfig& cfg) {
    const float lr = float(cfg.learning_rate);
    const float wd = float(cfg.weight_decay);
    const float mu = float(cfg.momentum);
    if (mu == 0.0f) {
        for (size_t i = 0; i < p.weights.data.size(); ++i)
            p.weights.data[i] -= lr * (grad_w.data[i] + wd * p.weights.data[i]);
        for (size_t i = 0; i < p.bias.size(); ++i) p.bias[i] -= lr * grad_b[i];
    } else {
        if (vel_w.data.empty()) vel_w = Tensor(grad_w.n, grad_w.c, grad_w.h, grad_w.w);
        if (vel_b.empty()) vel_b.assign(grad_b.size(), 0.0f);
        for (size_t i = 0; i < p.weights.data.size(); ++i) {
            vel_w.data[i] = mu * vel_w.data[i] + grad_w.data[i] + wd * p.weights.data[i];
            p.weights.data[i] -= lr * vel_w.data[i];
        }
        for (size_t i = 0; i < p.bias.size(); ++i) {
            vel_b[i] = mu * vel_b[i] + grad_b[i];
            p.bias[i] -= lr * vel_b[i];
        }
    }
}

void NetworkConfig::validate() const {
    if (in_channels < 1) throw std::invalid_argument("NetworkConfig: in_channels must be >= 1");
    if (num_classes < 2) throw std::invalid_argument("NetworkConfig: num_classes must be >= 2");
    if (encoder_channels.empty())
        throw std::invalid_argument("NetworkConfig: at least one encoder block required");
    if (kernel % 2 == 0 || kernel < 1)
        throw std::invalid_argument("NetworkConfig: kernel must be odd");
}

Network::Network(NetworkConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    std::mt19937_64 rng(cfg_.seed);
    auto make_conv = [&](int in_c, int out_c) {
        ConvParams p;
        p.weights = Tensor(out_c, in_c, cfg_.kernel, cfg_.kernel);
        p.bias.assign(size_t(out_c), 0.0f);
        const double limit = std::sqrt(6.0 / (double(in_c) * cfg_.kernel * cfg_.kernel));
        std::uniform_real_distribution<double> dist(-limit, limit);
        for (float& v : p.weights.data) v = float(dist(rng));
        return p;
    };
    const auto& enc = cfg_.encoder_channels;
    int prev = cfg_.in_channels;
    for (int ch : enc) {
        params_.push_back(make_conv(prev, ch));
        prev = ch;
    }
    // decoder mirrors the encoder
    for (size_t i = enc.size(); i-- > 0;) {
        const int out_c = i > 0 ? enc[i - 1] : enc[0];
        params_.push_back(make_conv(prev, out_c));
        prev = out_c;
    }
    params_.push_back(make_conv(prev, cfg_.num_classes));
    velocity_.resize(params_.size());
}

struct Network::Cache {
    std::vector<Tensor> conv_in;    // input to each conv (pre-activation inputs)
    std::vector<Tensor> conv_out;   // conv output, pre-ReLU
    std::vector<Tensor> pool_in;    // ReLU output entering each pool
    std::vector<PoolIndices> pool_idx;
    Tensor probs;
};

Tensor Network::forward_impl(const Tensor& x, Cache* cache) const {
    if (x.c != cfg_.in_channels)
        throw std::invalid_argument("Network: input has " + std::to_string(x.c) +
                                    " channels, config expects " + std::to_string(cfg_.in_channels));
    const int mult = cfg_.pool_multiple();
    if (x.h % mult != 0 || x.w % mult != 0)
        throw std::invalid_argument("Network: spatial dims must be divisible by " +
                                    std::to_string(mult));

    const size_t nenc = cfg_.encoder_channels.size();
    std::vector<PoolIndices> local_idx;
    std::vector<PoolIndices>& indices = cache ? cache->pool_idx : local_idx;

    Tensor cur = x;
    size_t layer = 0;
    for (size_t i = 0; i < nenc; ++i, ++layer) {
        if (cache) cache->conv_in.push_back(cur);
        Tensor conv = conv2d_forward(cur, params_[layer].weights, params_[layer].bias);
        if (cache) cache->conv_out.push_back(conv);
        Tensor act = relu(conv);
        if (cache) cache->pool_in.push_back(act);
        auto [pooled, idx] = maxpool2x2(act);
        indices.push_back(std::move(idx));
        cur = std::move(pooled);
    }
    for (size_t i = 0; i < nenc; ++i, ++layer) {
        Tensor up = unpool2x2(cur, indices[nenc - 1 - i]);
        if (cache) cache->conv_in.push_back(up);
        Tensor conv = conv2d_forward(up, params_[layer].weights, params_[layer].bias);
        if (cache) cache->conv_out.push_back(conv);
        cur = relu(conv);
    }
    if (cache) cache->conv_in.push_back(cur);
    Tensor logits = conv2d_forward(cur, params_[layer].weights, params_[layer].bias);
    if (cache) cache->conv_out.push_back(logits);
    Tensor probs = softmax_per_pixel(logits);
    if (cache) cache->probs = probs;
    return probs;
}

Tensor Network::forward(const Tensor& x) const { return forward_impl(x, nullptr); }

std::pair<double, Tensor> Network::train_step(const Tensor& x, const std::vector<uint8_t>& targets,
                                              const TrainConfig& tc) {
    Cache cache;
    Tensor probs = forward_impl(x, &cache);
    auto [loss, grad_logits] = weighted_cross_entropy(probs, targets, cfg_.class_weights);
    if (!std::isfinite(loss))
        throw std::runtime_error("Network: non-finite loss, aborting (check learning rate/data)");

    const size_t nenc = cfg_.encoder_channels.size();
    const size_t nlayers = params_.size();
    std::vector<Tensor> grad_ws(nlayers);
    std::vector<std::vector<float>> grad_bs(nlayers);

    // classifier
    size_t layer = nlayers - 1;
    Tensor grad_cur;
    conv2d_backward(cache.conv_in[layer], params_[layer].weights, grad_logits, grad_cur,
                    grad_ws[layer], grad_bs[layer]);
    // decoder, reversed
    for (size_t i = nenc; i-- > 0;) {
        layer = nenc + i;
        grad_cur = relu_backward(cache.conv_out[layer], grad_cur);
        Tensor grad_up;
        conv2d_backward(cache.conv_in[layer], params_[layer].weights, grad_cur, grad_up,
                        grad_ws[layer], grad_bs[layer]);
        // unpool backward = gather through the same indices used forward
        const PoolIndices& pidx = cache.pool_idx[nenc - 1 - i];
        Tensor grad_pooled(pidx.n, pidx.c, pidx.h, pidx.w);
        for (int in = 0; in < pidx.n; ++in)
            for (int c = 0; c < pidx.c; ++c)
                for (int y = 0; y < pidx.h; ++y)
                    for (int xx = 0; xx < pidx.w; ++xx) {
                        const uint8_t wi = pidx.idx[grad_pooled.index(in, c, y, xx)];
                        grad_pooled.at(in, c, y, xx) =
                            grad_up.at(in, c, 2 * y + wi / 2, 2 * xx + wi % 2);
                    }
        grad_cur = std::move(grad_pooled);
    }
    // encoder, reversed
    for (size_t i = nenc; i-- > 0;) {
        layer = i;
        // pool backward: scatter grads to argmax positions
        const PoolIndices& pidx = cache.pool_idx[i];
        const Tensor& act = cache.pool_in[i];
        Tensor grad_act(act.n, act.c, act.h, act.w);
        for (int in = 0; in < pidx.n; ++in)
            for (int c = 0; c < pidx.c; ++c)
                for (int y = 0; y < pidx.h; ++y)
                    for (int xx = 0; xx < pidx.w; ++xx) {
                        const uint8_t wi = pidx.idx[grad_cur.index(in, c, y, xx)];
                        grad_act.at(in, c, 2 * y + wi / 2, 2 * xx + wi % 2) +=
                            grad_cur.at(in, c, y, xx);
                    }
        grad_cur = relu_backward(cache.conv_out[i], grad_act);
        Tensor grad_in;
        conv2d_backward(cache.conv_in[i], params_[i].weights, grad_cur, grad_in, grad_ws[i],
                        grad_bs[i]);
        grad_cur = std::move(grad_in);
    }

    for (size_t l = 0; l < nlayers; ++l)
        sgd_step(params_[l], grad_ws[l], grad_bs[l], velocity_[l].weights, velocity_[l].bias, tc);
    return {loss, std::move(probs)};
}

TrainResult train(Network& net, const std::vector<TrainSample>& dataset, const TrainConfig& tc,
                  uint64_t seed) {
    if (dataset.empty()) throw std::invalid_argument("train: empty dataset");
    if (tc.learning_rate < 0.0) throw std::invalid_argument("train: negative learning rate");
    if (tc.batch_size < 1) throw std::invalid_argument("train: batch size must be >= 1");
    const Tensor& first = dataset.front().x;
    for (const auto& s : dataset) {
        if (s.x.c != first.c || s.x.h != first.h || s.x.w != first.w)
            throw std::invalid_argument("train: samples must share shape");
        if (s.labels.size() != s.x.plane())
            throw std::invalid_argument("train: label count does not match frame dims");
    }

    std::mt19937_64 rng(seed);
    std::vector<size_t> order(dataset.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    size_t cursor = 0;

    TrainResult result;
    const int bs = tc.batch_size;
    Tensor batch(bs, first.c, first.h, first.w);
    std::vector<uint8_t> targets(size_t(bs) * first.plane());
    const size_t sample_sz = first.size();

    for (int iter = 1; iter <= tc.max_iterations; ++iter) {
        for (int b = 0; b < bs; ++b) {
            if (cursor == order.size()) {
                std::shuffle(order.begin(), order.end(), rng);
                cursor = 0;
            }
            const TrainSample& s = dataset[order[cursor++]];
            std::copy(s.x.data.begin(), s.x.data.end(), batch.data.begin() + size_t(b) * sample_sz);
            std::copy(s.labels.begin(), s.labels.end(),
                      targets.begin() + size_t(b) * first.plane());
        }
        auto [loss, probs] = net.train_step(batch, targets, tc);
        result.final_loss = loss;

        if (iter % tc.record_every == 0 || iter == tc.max_iterations) {
            // average per-class accuracy on the current batch
            std::array<uint64_t, kNumClasses> correct{}, total{};
            const size_t plane = probs.plane();
            for (int in = 0; in < probs.n; ++in) {
                for (size_t p = 0; p < plane; ++p) {
                    const size_t base = size_t(in) * probs.c * plane + p;
                    int best = 0;
                    float bv = probs.data[base];
                    for (int c = 1; c < probs.c; ++c)
                        if (probs.data[base + size_t(c) * plane] > bv) {
                            bv = probs.data[base + size_t(c) * plane];
                            best = c;
                        }
                    const uint8_t y = targets[size_t(in) * plane + p];
                    total[y]++;
                    if (best == y) correct[y]++;
                }
            }
            double acc = 0.0;
            int present = 0;
            for (int c = 0; c < kNumClasses; ++c)
                if (total[size_t(c)] > 0) {
                    acc += double(correct[size_t(c)]) / double(total[size_t(c)]);
                    present++;
                }
            result.history.push_back({iter, loss, present ? acc / present : 0.0});
        }
    }
    return result;
}

Tensor frame_to_tensor(const MultispectralFrame& frame, int in_channels) {
    static const Band order[3] = {Band::nir(), Band::red(), Band::ndvi()};
    if (in_channels < 1 || in_channels > 3)
        throw std::invalid_argument("frame_to_tensor: in_channels must be 1, 2, or 3");
    Tensor t(1, in_channels, int(frame.height()), int(frame.width()));
    for (int c = 0; c < in_channels; ++c) {
        const BandImage& band = frame.get(order[c]);
        float* dst = t.data.data() + size_t(c) * t.plane();
        if (band.band().kind == Band::NDVI) {
            // already centered on [-1,1]; stretch to the common scale
            for (size_t i = 0; i < band.size(); ++i) dst[i] = band.data()[i] * 2.0f;
        } else {
            // reflectance [0,1] -> centered [-2,2]
            for (size_t i = 0; i < band.size(); ++i) dst[i] = (band.data()[i] - 0.5f) * 4.0f;
        }
    }
    return t;
}

ProbabilityMap infer(const MultispectralFrame& frame, const Network& net) {
    Tensor x = frame_to_tensor(frame, net.config().in_channels);
    Tensor probs = net.forward(x);
    ProbabilityMap pm(frame.width(), frame.height(), probs.c);
    const size_t plane = probs.plane();
    for (size_t p = 0; p < plane; ++p)
        for (int c = 0; c < probs.c; ++c)
            pm.data()[p * size_t(probs.c) + size_t(c)] = probs.data[size_t(c) * plane + p];
    return pm;
}

namespace {
constexpr uint32_t kCheckpointVersion = 1;
constexpr char kCheckpointMagic[4] = {'W', 'S', 'C', 'K'};
}  // namespace

void save_checkpoint(const Network& net, const std::string& path) {
    const NetworkConfig& cfg = net.config();
    nlohmann::json j;
    j["in_channels"] = cfg.in_channels;
    j["num_classes"] = cfg.num_classes;
    j["encoder_channels"] = cfg.encoder_channels;
    j["kernel"] = cfg.kernel;
    j["seed"] = cfg.seed;
    j["class_weights"] = {{"w", cfg.class_weights.w},
                          {"foa", cfg.class_weights.foa},
                          {"median_foa", cfg.class_weights.median_foa}};
    for (const auto& p : net.params())
        j["layers"].push_back({{"shape", {p.weights.n, p.weights.c, p.weights.h, p.weights.w}},
                               {"bias", p.bias.size()}});
    const std::string header = j.dump();

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot open file for writing");
    out.write(kCheckpointMagic, 4);
    const uint32_t version = kCheckpointVersion;
    const uint32_t hlen = uint32_t(header.size());
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&hlen), 4);
    out.write(header.data(), std::streamsize(header.size()));
    for (const auto& p : net.params()) {
        out.write(reinterpret_cast<const char*>(p.weights.data.data()),
                  std::streamsize(p.weights.data.size() * 4));
        out.write(reinterpret_cast<const char*>(p.bias.data()), std::streamsize(p.bias.size() * 4));
    }
    if (!out) throw std::runtime_error(path + ": write failed");
}

Network load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path + ": cannot open file");
    char magic[4];
    uint32_t version = 0, hlen = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&hlen), 4);
    if (!in || std::memcmp(magic, kCheckpointMagic, 4) != 0)
        throw std::runtime_error(path + ": not a checkpoint file");
    if (version != kCheckpointVersion)
        throw std::runtime_error(path + ": unsupported checkpoint version " + std::to_string(version));
    std::string header(hlen, '\0');
    in.read(header.data(), hlen);
    nlohmann::json j = nlohmann::json::parse(header);

    NetworkConfig cfg;
    cfg.in_channels = j.at("in_channels");
    cfg.num_classes = j.at("num_classes");
    cfg.encoder_channels = j.at("encoder_channels").get<std::vector<int>>();
    cfg.kernel = j.at("kernel");
    cfg.seed = j.at("seed");
    for (int c = 0; c < kNumClasses; ++c) {
        cfg.class_weights.w[size_t(c)] = j.at("class_weights").at("w")[size_t(c)];
        cfg.class_weights.foa[size_t(c)] = j.at("class_weights").at("foa")[size_t(c)];
    }
    cfg.class_weights.median_foa = j.at("class_weights").at("median_foa");

    Network net(cfg);
    const auto& layers = j.at("layers");
    if (layers.size() != net.params().size())
        throw std::runtime_error(path + ": layer count does not match config");
    for (size_t l = 0; l < net.params().size(); ++l) {
        auto& p = net.params()[l];
        const auto shape = layers[l].at("shape").get<std::vector<int>>();
        if (shape != std::vector<int>{p.weights.n, p.weights.c, p.weights.h, p.weights.w} ||
            size_t(layers[l].at("bias")) != p.bias.size())
            throw std::runtime_error(path + ": layer shape does not match config");
        in.read(reinterpret_cast<char*>(p.weights.data.data()),
                std::streamsize(p.weights.data.size() * 4));
        in.read(reinterpret_cast<char*>(p.bias.data()), std::streamsize(p.bias.size() * 4));
    }
    if (!in) throw std::runtime_error(path + ": truncated checkpoint payload");
    return net;
}

}  // namespace weedseg
