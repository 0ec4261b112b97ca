#ifndef WEEDSEG_TENSOR_HPP
#define WEEDSEG_TENSOR_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace weedseg {

// Dense NCHW float tensor.
struct Tensor {
    int n = 0, c = 0, h = 0, w = 0;
    std::vector<float> data;

    Tensor() = default;
    Tensor(int n_, int c_, int h_, int w_, float fill = 0.0f)
        : n(n_), c(c_), h(h_), w(w_), data(size_t(n_) * c_ * h_ * w_, fill) {
        if (n_ < 1 || c_ < 1 || h_ < 1 || w_ < 1)
            throw std::invalid_argument("Tensor: all dimensions must be >= 1");
    }

    size_t size() const { return data.size(); }
    size_t plane() const { return size_t(h) * w; }
    size_t index(int in, int ic, int iy, int ix) const {
        return ((size_t(in) * c + ic) * h + iy) * w + ix;
    }
    float at(int in, int ic, int iy, int ix) const { return data[index(in, ic, iy, ix)]; }
    float& at(int in, int ic, int iy, int ix) { return data[index(in, ic, iy, ix)]; }

    bool same_shape(const Tensor& o) const {
        return n == o.n && c == o.c && h == o.h && w == o.w;
    }
};

}  // namespace weedseg

#endif
