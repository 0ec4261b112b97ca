// weedseg: command-line pipeline for multispectral crop/weed segmentation.
//
// Subcommands cover the full workflow: synth -> align -> ndvi -> autolabel
// -> stats -> train -> infer -> eval (-> render), plus a forward-pass
// benchmark. All commands are deterministic given their --seed and exit
// nonzero with a single-line error on failure.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "weedseg/autolabel.hpp"
#include "weedseg/balance.hpp"
#include "weedseg/image_io.hpp"
#include "weedseg/manifest.hpp"
#include "weedseg/metrics.hpp"
#include "weedseg/net.hpp"
#include "weedseg/registration.hpp"
#include "weedseg/synth.hpp"

namespace fs = std::filesystem;
using namespace weedseg;

namespace {

// Runs fn(0..n-1) across hardware threads; callers preallocate output
// slots so results keep a deterministic order.
template <typename F>
void parallel_indices(size_t n, F&& fn) {
    const size_t workers = std::max<size_t>(1, std::min<size_t>(std::thread::hardware_concurrency(), n));
    if (workers == 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// Contrast-polarity-invariant representation for cross-band matching:
// NIR and Red are anti-correlated on vegetation, so raw correlation
// fails between them while edge strength still lines up.
BandImage gradient_magnitude(const BandImage& img) {
    const uint32_t w = img.width(), h = img.height();
    BandImage out(w, h, Band::other(img.band().name + "_grad"));
    for (uint32_t y = 0; y < h; ++y) {
        for (uint32_t x = 0; x < w; ++x) {
            const float gx = img.at(std::min(x + 1, w - 1), y) - img.at(x > 0 ? x - 1 : 0, y);
            const float gy = img.at(x, std::min(y + 1, h - 1)) - img.at(x, y > 0 ? y - 1 : 0);
            out.at(x, y) = std::sqrt(gx * gx + gy * gy);
        }
    }
    return out;
}

void ensure_ndvi(MultispectralFrame& frame, int in_channels) {
    if (in_channels >= 3 && !frame.find(Band::ndvi()))
        frame.add(compute_ndvi(frame.get(Band::nir()), frame.get(Band::red())));
}

// Resamples mov into the reference frame by undoing transform t, full
// size, zero fill outside the source (warp_and_crop without the crop).
BandImage warp_full(const BandImage& mov, const Transform2D& t) {
    const uint32_t w = mov.width(), h = mov.height();
    const double cx = (w - 1) / 2.0, cy = (h - 1) / 2.0;
    const double c = std::cos(t.theta), s = std::sin(t.theta);
    BandImage out(w, h, mov.band());
    for (uint32_t y = 0; y < h; ++y) {
        for (uint32_t x = 0; x < w; ++x) {
            const double dx = x - cx, dy = y - cy;
            const double sx = cx + c * dx - s * dy + t.tx;
            const double sy = cy + s * dx + c * dy + t.ty;
            out.at(x, y) = sample_bilinear(mov, sx, sy);
        }
    }
    return out;
}

struct ProbFile {
    uint32_t width = 0, height = 0, classes = 0;
};

void write_probs(const ProbabilityMap& pm, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    const char magic[4] = {'W', 'S', 'P', 'B'};
    f.write(magic, 4);
    const uint32_t dims[3] = {pm.width(), pm.height(), uint32_t(pm.num_classes())};
    f.write(reinterpret_cast<const char*>(dims), sizeof dims);
    f.write(reinterpret_cast<const char*>(pm.data().data()),
            std::streamsize(pm.data().size() * sizeof(float)));
    if (!f) throw std::runtime_error("short write to " + path);
}

ProbabilityMap read_probs(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path);
    char magic[4];
    uint32_t dims[3];
    f.read(magic, 4);
    f.read(reinterpret_cast<char*>(dims), sizeof dims);
    if (!f || std::memcmp(magic, "WSPB", 4) != 0)
        throw std::runtime_error("not a probability file: " + path);
    ProbabilityMap pm(dims[0], dims[1], int(dims[2]));
    f.read(reinterpret_cast<char*>(pm.data().data()),
           std::streamsize(pm.data().size() * sizeof(float)));
    if (!f) throw std::runtime_error("truncated probability file: " + path);
    return pm;
}

double component_median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<const ManifestEntry*> select_entries(const DatasetManifest& m,
                                                 const std::string& split) {
    if (split == "all") {
        std::vector<const ManifestEntry*> out;
        for (const auto& e : m.entries) out.push_back(&e);
        return out;
    }
    auto out = m.split_entries(split);
    if (out.empty()) throw std::runtime_error("no entries with split '" + split + "'");
    return out;
}

// ---- commands ---------------------------------------------------------

int cmd_synth(const std::string& out_dir, FieldConfig cfg, DatasetCounts counts) {
    cfg.validate();
    const std::string manifest = generate_dataset(cfg, counts, out_dir);
    std::cout << manifest << "\n";
    return 0;
}

int cmd_align(const std::string& manifest_path, const std::string& cal_path, bool rigid,
              bool apply, const RegistrationOptions& opts) {
    auto m = load_manifest(manifest_path);
    m.validate();
    std::vector<Transform2D> per_frame(m.entries.size());
    std::vector<double> confidences(m.entries.size());
    parallel_indices(m.entries.size(), [&](size_t i) {
        auto frame = load_frame(m, m.entries[i]);
        const BandImage ref = gradient_magnitude(frame.get(Band::nir()));
        const BandImage mov = gradient_magnitude(frame.get(Band::red()));
        const auto est = rigid ? estimate_rigid(ref, mov, opts) : estimate_translation(ref, mov, opts);
        per_frame[i] = est.transform;
        confidences[i] = est.confidence;
    });

    std::vector<double> txs, tys, thetas;
    for (const auto& t : per_frame) {
        txs.push_back(t.tx);
        tys.push_back(t.ty);
        thetas.push_back(t.theta);
    }
    RigCalibration cal;
    cal.options = opts;
    cal.band_transforms["Red"] = {component_median(txs), component_median(tys),
                                  component_median(thetas)};
    save_calibration(cal, cal_path);
    const auto& t = cal.band_transforms["Red"];
    std::cout << "Red: tx " << t.tx << " ty " << t.ty << " theta " << t.theta << " rad over "
              << m.entries.size() << " frames (min confidence "
              << *std::min_element(confidences.begin(), confidences.end()) << ")\n";

    if (apply) {
        parallel_indices(m.entries.size(), [&](size_t i) {
            auto frame = load_frame(m, m.entries[i]);
            BandImage aligned = warp_full(frame.get(Band::red()), t);
            for (auto& v : aligned.data()) v = std::clamp(v, 0.0f, 1.0f);
            const std::string rel = m.entries[i].frame_id + "_red_aligned.pgm";
            write_band_image(aligned, m.resolve(rel));
            m.entries[i].bands["Red"] = rel;
        });
        save_manifest(m, manifest_path);
        std::cout << "aligned Red bands written, manifest updated\n";
    }
    return 0;
}

int cmd_ndvi(const std::string& manifest_path, bool overwrite) {
    auto m = load_manifest(manifest_path);
    m.validate();
    std::vector<std::string> written(m.entries.size());
    parallel_indices(m.entries.size(), [&](size_t i) {
        auto& e = m.entries[i];
        if (e.bands.count("NDVI") && !overwrite) return;
        auto frame = load_frame(m, e);
        BandImage ndvi = compute_ndvi(frame.get(Band::nir()), frame.get(Band::red()));
        const std::string rel = e.frame_id + "_ndvi.pgm";
        write_band_image(ndvi, m.resolve(rel));
        written[i] = rel;
    });
    int count = 0;
    for (size_t i = 0; i < m.entries.size(); ++i) {
        if (written[i].empty()) continue;
        m.entries[i].bands["NDVI"] = written[i];
        ++count;
    }
    save_manifest(m, manifest_path);
    std::cout << count << " NDVI bands written\n";
    return 0;
}

int cmd_autolabel(const std::string& manifest_path, AutolabelConfig cfg, bool overwrite) {
    auto m = load_manifest(manifest_path);
    m.validate();
    std::vector<std::string> written(m.entries.size());
    std::vector<size_t> veg_pixels(m.entries.size(), 0);
    parallel_indices(m.entries.size(), [&](size_t i) {
        auto& e = m.entries[i];
        if (e.mask && !overwrite) return;
        // single-species premise: the plot type fixes the vegetation class
        AutolabelConfig local = cfg;
        if (e.plot_type == "crop") local.vegetation_class = kCrop;
        else if (e.plot_type == "weed") local.vegetation_class = kWeed;
        else return;  // mixed plots cannot be auto-labeled
        auto frame = load_frame(m, e);
        BandImage ndvi = frame.find(Band::ndvi())
                             ? frame.get(Band::ndvi())
                             : compute_ndvi(frame.get(Band::nir()), frame.get(Band::red()));
        LabelMask mask = generate_mask(ndvi, local);
        for (uint8_t v : mask.labels()) veg_pixels[i] += v != kBackground;
        const std::string rel = e.frame_id + "_auto.png";
        write_mask_png(mask, m.resolve(rel));
        written[i] = rel;
    });
    int count = 0;
    for (size_t i = 0; i < m.entries.size(); ++i) {
        if (written[i].empty()) continue;
        m.entries[i].mask = written[i];
        std::cout << m.entries[i].frame_id << ": " << veg_pixels[i] << " vegetation px\n";
        ++count;
    }
    save_manifest(m, manifest_path);
    std::cout << count << " masks written\n";
    return 0;
}

int cmd_stats(const std::string& manifest_path, const std::string& out_path) {
    auto m = load_manifest(manifest_path);
    m.validate();
    std::vector<LabelMask> masks;
    for (const auto* e : m.split_entries("train")) {
        if (!e->mask) throw std::runtime_error("train entry " + e->frame_id + " has no mask");
        masks.push_back(read_mask_png(m.resolve(*e->mask)));
    }
    if (masks.empty()) throw std::runtime_error("no train masks in manifest");
    auto stats = accumulate_stats(masks);
    auto weights = compute_class_weights(stats);
    save_weights(stats, weights, out_path);
    static const char* names[] = {"background", "crop", "weed"};
    for (int c = 0; c < kNumClasses; ++c)
        std::cout << names[c] << ": foa " << weights.foa[size_t(c)] << " weight "
                  << weights.w[size_t(c)] << "\n";
    return 0;
}

struct LoadedSplit {
    std::vector<MultispectralFrame> frames;
    std::vector<LabelMask> masks;  // empty entries when a mask is absent
    std::vector<std::string> ids;
};

LoadedSplit load_split(const DatasetManifest& m, const std::string& split, int in_channels,
                       bool need_masks) {
    auto entries = select_entries(m, split);
    LoadedSplit out;
    out.frames.resize(entries.size());
    out.masks.resize(entries.size());
    out.ids.resize(entries.size());
    parallel_indices(entries.size(), [&](size_t i) {
        out.frames[i] = load_frame(m, *entries[i]);
        ensure_ndvi(out.frames[i], in_channels);
        out.ids[i] = entries[i]->frame_id;
        if (entries[i]->mask) out.masks[i] = read_mask_png(m.resolve(*entries[i]->mask));
        else if (need_masks)
            throw std::runtime_error("entry " + entries[i]->frame_id + " has no mask");
    });
    return out;
}

int cmd_train(const std::string& manifest_path, const std::string& ckpt_path,
              const std::string& weights_path, const std::string& history_path, int channels,
              TrainConfig tc, uint64_t seed) {
    auto m = load_manifest(manifest_path);
    m.validate();
    auto split = load_split(m, "train", channels, true);

    NetworkConfig cfg;
    cfg.in_channels = channels;
    cfg.seed = seed;
    if (!weights_path.empty()) cfg.class_weights = load_weights(weights_path);
    Network net(cfg);

    std::vector<TrainSample> samples;
    for (size_t i = 0; i < split.frames.size(); ++i) {
        TrainSample s;
        s.x = frame_to_tensor(split.frames[i], channels);
        s.labels = split.masks[i].labels();
        if (s.labels.size() != size_t(s.x.h) * s.x.w)
            throw std::runtime_error("mask size mismatch on " + split.ids[i]);
        samples.push_back(std::move(s));
    }
    auto result = train(net, samples, tc, seed);
    save_checkpoint(net, ckpt_path);
    if (!history_path.empty()) {
        std::ofstream f(history_path);
        f << "iteration,loss,avg_class_accuracy\n";
        for (const auto& h : result.history)
            f << h.iteration << "," << h.loss << "," << h.avg_class_accuracy << "\n";
    }
    std::cout << "trained " << tc.max_iterations << " iterations on " << samples.size()
              << " frames, final loss " << result.final_loss << "\n";
    return 0;
}

int cmd_infer(const std::string& manifest_path, const std::string& ckpt_path,
              const std::string& out_dir, const std::string& split_name) {
    auto m = load_manifest(manifest_path);
    m.validate();
    Network net = load_checkpoint(ckpt_path);
    auto split = load_split(m, split_name, net.config().in_channels, false);
    fs::create_directories(out_dir);
    parallel_indices(split.frames.size(), [&](size_t i) {
        ProbabilityMap pm = infer(split.frames[i], net);
        pm.validate(1e-5f);
        const fs::path base = fs::path(out_dir) / split.ids[i];
        write_mask_png(argmax_labels(pm), base.string() + "_pred.png");
        write_probs(pm, base.string() + "_probs.bin");
        write_rgb_png(render_probability(pm), base.string() + "_render.png");
    });
    std::cout << split.frames.size() << " frames inferred to " << out_dir << "\n";
    return 0;
}

int cmd_eval(const std::string& manifest_path, const std::string& pred_dir,
             const std::string& split_name, const std::string& report_path,
             const std::string& roc_dir) {
    auto m = load_manifest(manifest_path);
    m.validate();
    auto entries = select_entries(m, split_name);
    std::vector<LabelMask> preds(entries.size()), truths(entries.size());
    std::vector<ProbabilityMap> probs(entries.size());
    bool have_probs = true;
    for (size_t i = 0; i < entries.size(); ++i) {
        if (!entries[i]->mask)
            throw std::runtime_error("entry " + entries[i]->frame_id + " has no truth mask");
        truths[i] = read_mask_png(m.resolve(*entries[i]->mask));
        const fs::path base = fs::path(pred_dir) / entries[i]->frame_id;
        preds[i] = read_mask_png(base.string() + "_pred.png");
        const std::string pb = base.string() + "_probs.bin";
        if (fs::exists(pb)) probs[i] = read_probs(pb);
        else have_probs = false;
    }
    auto report = evaluate_dataset(preds, truths, have_probs ? &probs : nullptr);
    std::cout << report_to_table(report);
    if (!report_path.empty()) {
        std::ofstream f(report_path);
        f << report_to_json(report);
        if (!f) throw std::runtime_error("cannot write " + report_path);
    }
    if (!roc_dir.empty()) {
        fs::create_directories(roc_dir);
        static const char* names[] = {"background", "crop", "weed"};
        for (int c = 0; c < kNumClasses; ++c) {
            if (!report.auc[size_t(c)]) continue;
            std::ofstream f((fs::path(roc_dir) / (std::string("roc_") + names[c] + ".csv")).string());
            f << roc_to_csv(report.roc[size_t(c)]);
        }
    }
    return 0;
}

int cmd_render(const std::string& mask_path, const std::string& probs_path,
               const std::string& out_path) {
    if (mask_path.empty() == probs_path.empty())
        throw std::runtime_error("render needs exactly one of --mask / --probs");
    if (!mask_path.empty())
        write_rgb_png(render_mask(read_mask_png(mask_path)), out_path);
    else
        write_rgb_png(render_probability(read_probs(probs_path)), out_path);
    std::cout << out_path << "\n";
    return 0;
}

int cmd_bench(uint32_t width, uint32_t height, int reps, uint64_t seed) {
    if (reps < 1) throw std::runtime_error("bench needs --reps >= 1");
    std::cout << "channels  mean_ms  median_ms  p95_ms\n";
    for (int ch : {1, 2, 3}) {
        NetworkConfig cfg;
        cfg.in_channels = ch;
        cfg.seed = seed;
        Network net(cfg);
        std::mt19937_64 rng(seed + uint64_t(ch));
        std::uniform_real_distribution<float> d(0.0f, 1.0f);
        Tensor x(1, ch, int(height), int(width));
        for (auto& v : x.data) v = d(rng);
        net.forward(x);  // warmup
        std::vector<double> ms(size_t(reps), 0.0);
        for (int r = 0; r < reps; ++r) {
            const auto t0 = std::chrono::steady_clock::now();
            net.forward(x);
            const auto t1 = std::chrono::steady_clock::now();
            ms[size_t(r)] = std::chrono::duration<double, std::milli>(t1 - t0).count();
        }
        std::sort(ms.begin(), ms.end());
        double mean = 0;
        for (double v : ms) mean += v;
        mean /= double(reps);
        const double median = reps % 2 ? ms[size_t(reps / 2)]
                                       : 0.5 * (ms[size_t(reps / 2 - 1)] + ms[size_t(reps / 2)]);
        const double p95 = ms[std::min(size_t(reps) - 1, size_t(std::ceil(0.95 * reps)) - 1)];
        std::cout << ch << "  " << mean << "  " << median << "  " << p95 << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multispectral crop/weed segmentation pipeline"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML config file; flags override it");

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
    std::string synth_out;
    FieldConfig field;
    DatasetCounts counts;
    double misalign_deg = 0.0;
    synth->add_option("--out", synth_out, "output directory")->required();
    synth->add_option("--width", field.width);
    synth->add_option("--height", field.height);
    synth->add_option("--row-spacing", field.crop_row_spacing);
    synth->add_option("--weed-density", field.weed_density, "plants per kilopixel");
    synth->add_option("--herbicide", field.herbicide_level, "0..1, weed suppression");
    synth->add_option("--noise", field.noise_sigma, "sensor noise sigma");
    synth->add_option("--misalign-tx", field.band_misalignment.tx, "Red band shift x, px");
    synth->add_option("--misalign-ty", field.band_misalignment.ty, "Red band shift y, px");
    synth->add_option("--misalign-deg", misalign_deg, "Red band rotation, degrees");
    synth->add_option("--crop-frames", counts.crop);
    synth->add_option("--weed-frames", counts.weed);
    synth->add_option("--mixed-frames", counts.mixed);
    synth->add_option("--seed", field.seed);

    // align
    auto* align = app.add_subcommand("align", "estimate band alignment, save calibration");
    std::string align_manifest, align_cal;
    bool align_rigid = false, align_apply = false;
    RegistrationOptions reg_opts;
    align->add_option("--manifest", align_manifest)->required();
    align->add_option("--out", align_cal, "calibration JSON path")->required();
    align->add_flag("--rigid", align_rigid, "also search rotation");
    align->add_flag("--apply", align_apply, "rewrite Red bands into the reference frame");
    align->add_option("--search-radius", reg_opts.search_radius);
    align->add_option("--confidence", reg_opts.confidence_threshold);

    // ndvi
    auto* ndvi = app.add_subcommand("ndvi", "add NDVI bands to the manifest");
    std::string ndvi_manifest;
    bool ndvi_overwrite = false;
    ndvi->add_option("--manifest", ndvi_manifest)->required();
    ndvi->add_flag("--overwrite", ndvi_overwrite);

    // autolabel
    auto* autol = app.add_subcommand("autolabel", "NDVI + Otsu + blob-filter mask generation");
    std::string autol_manifest;
    AutolabelConfig autol_cfg;
    bool autol_overwrite = false;
    autol->add_option("--manifest", autol_manifest)->required();
    autol->add_option("--sigma", autol_cfg.blur_sigma, "Gaussian blur sigma");
    autol->add_option("--amount", autol_cfg.sharpen_amount, "unsharp amount");
    autol->add_option("--min-blob", autol_cfg.min_blob_pixels, "min connected pixels");
    autol->add_option("--bins", autol_cfg.otsu_bins);
    autol->add_flag("--overwrite", autol_overwrite, "replace existing masks");

    // stats
    auto* stats = app.add_subcommand("stats", "class statistics and balancing weights");
    std::string stats_manifest, stats_out = "weights.json";
    stats->add_option("--manifest", stats_manifest)->required();
    stats->add_option("--out", stats_out, "weights JSON path");

    // train
    auto* train_cmd = app.add_subcommand("train", "train the segmentation network");
    std::string train_manifest, train_ckpt = "model.ckpt", train_weights, train_history;
    int train_channels = 3;
    TrainConfig tc;
    uint64_t train_seed = 1;
    train_cmd->add_option("--manifest", train_manifest)->required();
    train_cmd->add_option("--out", train_ckpt, "checkpoint path");
    train_cmd->add_option("--weights", train_weights, "class weights JSON from stats");
    train_cmd->add_option("--history", train_history, "loss history CSV path");
    train_cmd->add_option("--channels", train_channels)->check(CLI::Range(1, 3));
    train_cmd->add_option("--iterations", tc.max_iterations);
    train_cmd->add_option("--lr", tc.learning_rate);
    train_cmd->add_option("--weight-decay", tc.weight_decay);
    train_cmd->add_option("--batch", tc.batch_size);
    train_cmd->add_option("--momentum", tc.momentum);
    train_cmd->add_option("--seed", train_seed);

    // infer
    auto* infer_cmd = app.add_subcommand("infer", "predict masks and probabilities");
    std::string infer_manifest, infer_ckpt, infer_out = "predictions", infer_split = "test";
    infer_cmd->add_option("--manifest", infer_manifest)->required();
    infer_cmd->add_option("--checkpoint", infer_ckpt)->required();
    infer_cmd->add_option("--out-dir", infer_out);
    infer_cmd->add_option("--split", infer_split)->check(CLI::IsMember({"train", "test", "all"}));

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "score predictions against truth masks");
    std::string eval_manifest, eval_pred, eval_split = "test", eval_report, eval_roc;
    eval_cmd->add_option("--manifest", eval_manifest)->required();
    eval_cmd->add_option("--pred-dir", eval_pred)->required();
    eval_cmd->add_option("--split", eval_split)->check(CLI::IsMember({"train", "test", "all"}));
    eval_cmd->add_option("--report", eval_report, "JSON report path");
    eval_cmd->add_option("--roc-dir", eval_roc, "per-class ROC CSV directory");

    // render
    auto* render = app.add_subcommand("render", "render a mask or probability file to RGB");
    std::string render_mask_path, render_probs_path, render_out;
    render->add_option("--mask", render_mask_path, "class mask PNG");
    render->add_option("--probs", render_probs_path, "probability .bin from infer");
    render->add_option("--out", render_out, "output RGB PNG")->required();

    // bench
    auto* bench = app.add_subcommand("bench", "forward-pass timing per channel count");
    uint32_t bench_w = 128, bench_h = 128;
    int bench_reps = 20;
    uint64_t bench_seed = 1;
    bench->add_option("--width", bench_w);
    bench->add_option("--height", bench_h);
    bench->add_option("--reps", bench_reps);
    bench->add_option("--seed", bench_seed);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*synth) {
            field.band_misalignment.theta = misalign_deg * std::acos(-1.0) / 180.0;
            return cmd_synth(synth_out, field, counts);
        }
        if (*align) return cmd_align(align_manifest, align_cal, align_rigid, align_apply, reg_opts);
        if (*ndvi) return cmd_ndvi(ndvi_manifest, ndvi_overwrite);
        if (*autol) {
            autol_cfg.validate();
            return cmd_autolabel(autol_manifest, autol_cfg, autol_overwrite);
        }
        if (*stats) return cmd_stats(stats_manifest, stats_out);
        if (*train_cmd)
            return cmd_train(train_manifest, train_ckpt, train_weights, train_history,
                             train_channels, tc, train_seed);
        if (*infer_cmd) return cmd_infer(infer_manifest, infer_ckpt, infer_out, infer_split);
        if (*eval_cmd) return cmd_eval(eval_manifest, eval_pred, eval_split, eval_report, eval_roc);
        if (*render) return cmd_render(render_mask_path, render_probs_path, render_out);
        if (*bench) return cmd_bench(bench_w, bench_h, bench_reps, bench_seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
