#include "weedseg/image_io.hpp"

#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <stdexcept>

namespace weedseg {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error(path + ": " + what);
}

// Reads a PNM header token, skipping whitespace and '#' comments.
std::string pnm_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
        } else if (!std::isspace(c)) {
            tok.push_back(char(c));
            while ((c = in.get()) != EOF && !std::isspace(c) && c != '#') tok.push_back(char(c));
            if (c == '#') in.unget();
            return tok;
        }
    }
    return tok;
}

long parse_dim(const std::string& tok, const std::string& path, const char* what) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        fail(path, std::string("malformed header: bad ") + what);
    long v = std::stol(tok);
    return v;
}

struct FileCloser {
    void operator()(FILE* f) const { if (f) std::fclose(f); }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

}  // namespace

GrayImage read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open file");
    std::string magic = pnm_token(in);
    if (magic != "P5") fail(path, "malformed header: not a binary PGM (P5)");
    long w = parse_dim(pnm_token(in), path, "width");
    long h = parse_dim(pnm_token(in), path, "height");
    long maxval = parse_dim(pnm_token(in), path, "maxval");
    if (w < 1 || h < 1) fail(path, "malformed header: zero dimension");
    if (maxval != 255 && maxval != 65535) fail(path, "unsupported bit depth (maxval must be 255 or 65535)");

    GrayImage img;
    img.width = uint32_t(w);
    img.height = uint32_t(h);
    img.bit_depth = maxval == 255 ? 8 : 16;
    img.samples.resize(size_t(w) * h);
    const size_t bytes_per = maxval == 255 ? 1 : 2;
    std::vector<uint8_t> raw(img.samples.size() * bytes_per);
    in.read(reinterpret_cast<char*>(raw.data()), std::streamsize(raw.size()));
    if (size_t(in.gcount()) != raw.size()) fail(path, "truncated payload");
    if (bytes_per == 1) {
        for (size_t i = 0; i < img.samples.size(); ++i) img.samples[i] = raw[i];
    } else {
        // PGM 16-bit is big-endian
        for (size_t i = 0; i < img.samples.size(); ++i)
            img.samples[i] = uint16_t(raw[2 * i] << 8 | raw[2 * i + 1]);
    }
    return img;
}

void write_pgm(const GrayImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(path, "cannot open file for writing");
    const int maxval = img.bit_depth == 8 ? 255 : 65535;
    out << "P5\n" << img.width << " " << img.height << "\n" << maxval << "\n";
    if (img.bit_depth == 8) {
        std::vector<uint8_t> raw(img.samples.size());
        for (size_t i = 0; i < raw.size(); ++i) raw[i] = uint8_t(img.samples[i]);
        out.write(reinterpret_cast<const char*>(raw.data()), std::streamsize(raw.size()));
    } else {
        std::vector<uint8_t> raw(img.samples.size() * 2);
        for (size_t i = 0; i < img.samples.size(); ++i) {
            raw[2 * i] = uint8_t(img.samples[i] >> 8);
            raw[2 * i + 1] = uint8_t(img.samples[i] & 0xff);
        }
        out.write(reinterpret_cast<const char*>(raw.data()), std::streamsize(raw.size()));
    }
    if (!out) fail(path, "write failed");
}

namespace {

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FilePtr file;
    ~PngReader() { if (png) png_destroy_read_struct(&png, &info, nullptr); }
};

struct PngWriter {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FilePtr file;
    ~PngWriter() { if (png) png_destroy_write_struct(&png, &info); }
};

void open_png_read(PngReader& r, const std::string& path) {
    r.file.reset(std::fopen(path.c_str(), "rb"));
    if (!r.file) fail(path, "cannot open file");
    r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    r.info = png_create_info_struct(r.png);
    if (!r.png || !r.info) fail(path, "libpng init failed");
    if (setjmp(png_jmpbuf(r.png))) fail(path, "malformed PNG");
    png_init_io(r.png, r.file.get());
}

void open_png_write(PngWriter& w, const std::string& path) {
    w.file.reset(std::fopen(path.c_str(), "wb"));
    if (!w.file) fail(path, "cannot open file for writing");
    w.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    w.info = png_create_info_struct(w.png);
    if (!w.png || !w.info) fail(path, "libpng init failed");
    if (setjmp(png_jmpbuf(w.png))) fail(path, "PNG write failed");
    png_init_io(w.png, w.file.get());
}

}  // namespace

GrayImage read_gray_png(const std::string& path) {
    PngReader r;
    open_png_read(r, path);
    if (setjmp(png_jmpbuf(r.png))) fail(path, "malformed PNG");
    png_read_info(r.png, r.info);
    const uint32_t w = png_get_image_width(r.png, r.info);
    const uint32_t h = png_get_image_height(r.png, r.info);
    const int depth = png_get_bit_depth(r.png, r.info);
    const int color = png_get_color_type(r.png, r.info);
    if (color != PNG_COLOR_TYPE_GRAY) fail(path, "unsupported color type (grayscale expected)");
    if (depth != 8 && depth != 16) fail(path, "unsupported bit depth");
    if (w < 1 || h < 1) fail(path, "malformed header: zero dimension");

    GrayImage img;
    img.width = w;
    img.height = h;
    img.bit_depth = depth;
    img.samples.resize(size_t(w) * h);
    const size_t rowbytes = size_t(w) * (depth / 8);
    std::vector<uint8_t> row(rowbytes);
    for (uint32_t y = 0; y < h; ++y) {
        png_read_row(r.png, row.data(), nullptr);
        if (depth == 8) {
            for (uint32_t x = 0; x < w; ++x) img.samples[size_t(y) * w + x] = row[x];
        } else {
            for (uint32_t x = 0; x < w; ++x)
                img.samples[size_t(y) * w + x] = uint16_t(row[2 * x] << 8 | row[2 * x + 1]);
        }
    }
    png_read_end(r.png, nullptr);
    return img;
}

void write_gray_png(const GrayImage& img, const std::string& path) {
    if (img.bit_depth != 8) fail(path, "PNG writer supports 8-bit grayscale only");
    PngWriter w;
    open_png_write(w, path);
    if (setjmp(png_jmpbuf(w.png))) fail(path, "PNG write failed");
    png_set_IHDR(w.png, w.info, img.width, img.height, 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(w.png, w.info);
    std::vector<uint8_t> row(img.width);
    for (uint32_t y = 0; y < img.height; ++y) {
        for (uint32_t x = 0; x < img.width; ++x) row[x] = uint8_t(img.samples[size_t(y) * img.width + x]);
        png_write_row(w.png, row.data());
    }
    png_write_end(w.png, nullptr);
}

void write_rgb_png(const RgbImage& img, const std::string& path) {
    PngWriter w;
    open_png_write(w, path);
    if (setjmp(png_jmpbuf(w.png))) fail(path, "PNG write failed");
    png_set_IHDR(w.png, w.info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(w.png, w.info);
    for (uint32_t y = 0; y < img.height; ++y)
        png_write_row(w.png, const_cast<uint8_t*>(img.px(0, y)));
    png_write_end(w.png, nullptr);
}

namespace {

bool has_png_magic(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open file");
    uint8_t sig[4] = {0};
    in.read(reinterpret_cast<char*>(sig), 4);
    return sig[0] == 0x89 && sig[1] == 'P' && sig[2] == 'N' && sig[3] == 'G';
}

}  // namespace

BandImage read_band_image(const std::string& path, const Band& band) {
    GrayImage g = has_png_magic(path) ? read_gray_png(path) : read_pgm(path);
    const float maxval = g.bit_depth == 8 ? 255.0f : 65535.0f;
    std::vector<float> data(g.samples.size());
    if (band.kind == Band::NDVI) {
        for (size_t i = 0; i < data.size(); ++i) data[i] = float(g.samples[i]) / maxval * 2.0f - 1.0f;
    } else {
        for (size_t i = 0; i < data.size(); ++i) data[i] = float(g.samples[i]) / maxval;
    }
    return BandImage(g.width, g.height, band, std::move(data));
}

void write_band_image(const BandImage& img, const std::string& path, int bit_depth) {
    if (bit_depth != 8 && bit_depth != 16)
        throw std::invalid_argument("write_band_image: bit depth must be 8 or 16");
    const float maxval = bit_depth == 8 ? 255.0f : 65535.0f;
    const bool remap = img.band().kind == Band::NDVI;
    GrayImage g;
    g.width = img.width();
    g.height = img.height();
    g.bit_depth = bit_depth;
    g.samples.resize(img.size());
    const auto& data = img.data();
    for (size_t i = 0; i < data.size(); ++i) {
        float v = remap ? (data[i] + 1.0f) * 0.5f : data[i];
        if (v < 0.0f || v > 1.0f)
            throw std::invalid_argument("write_band_image: sample out of storage range");
        g.samples[i] = uint16_t(std::lround(double(v) * maxval));
    }
    const bool png = path.size() >= 4 && path.compare(path.size() - 4, 4, ".png") == 0;
    if (png) write_gray_png(g, path);
    else write_pgm(g, path);
}

LabelMask read_mask_png(const std::string& path) {
    GrayImage g = read_gray_png(path);
    if (g.bit_depth != 8) fail(path, "mask PNG must be 8-bit");
    std::vector<uint8_t> labels(g.samples.size());
    for (size_t i = 0; i < labels.size(); ++i) {
        if (g.samples[i] > 2) fail(path, "mask pixel value outside {0,1,2}");
        labels[i] = uint8_t(g.samples[i]);
    }
    return LabelMask(g.width, g.height, std::move(labels));
}

void write_mask_png(const LabelMask& mask, const std::string& path) {
    GrayImage g;
    g.width = mask.width();
    g.height = mask.height();
    g.bit_depth = 8;
    g.samples.assign(mask.labels().begin(), mask.labels().end());
    write_gray_png(g, path);
}

}  // namespace weedseg
