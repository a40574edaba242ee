// Copyright Contributors to the spikedeblur project
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <vector>

#include "spikedeblur/color.hpp"
#include "spikedeblur/event_model.hpp"
#include "spikedeblur/image_io.hpp"
#include "spikedeblur/metrics.hpp"
#include "spikedeblur/reconstruction.hpp"
#include "spikedeblur/spike_io.hpp"
#include "spikedeblur/spike_model.hpp"
#include "spikedeblur/toy_deblur.hpp"

namespace spikedeblur::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string format_real(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::pair<std::size_t, std::size_t> parse_size(const std::string &text) {
    const auto x = text.find('x');
    if (x == std::string::npos) throw UsageError("size must look like WxH, got '" + text + "'");
    try {
        const auto w = std::stoul(text.substr(0, x));
        const auto h = std::stoul(text.substr(x + 1));
        if (w == 0 || h == 0) throw UsageError("size must be positive");
        return {w, h};
    } catch (const std::logic_error &) {
        throw UsageError("size must look like WxH, got '" + text + "'");
    }
}

std::vector<std::int64_t> parse_widths(const std::string &text) {
    std::vector<std::int64_t> widths;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            const auto v = std::stoll(item, &pos);
            if (pos != item.size()) throw std::invalid_argument(item);
            widths.push_back(v);
        } catch (const std::logic_error &) {
            throw UsageError("--widths expects comma-separated integers, got '" + text + "'");
        }
    }
    return widths;
}

LuminanceSequence load_gray_frames(const std::vector<std::string> &paths) {
    LuminanceSequence frames;
    frames.reserve(paths.size());
    for (const auto &p : paths) frames.push_back(read_pgm_file(p));
    return frames;
}

// Output sink that is either a file or the given stream.
class TextSink {
public:
    TextSink(const std::string &path, std::ostream &fallback) : stream_(&fallback) {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw IoError("cannot open " + path + " for writing");
            stream_ = file_.get();
        }
    }
    std::ostream &get() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream *stream_;
};

struct SimulateArgs {
    std::vector<std::string> frames;
    std::string output;
    double omega = kDefaultOmega;
    double rate = kDefaultSampleRateHz;
    std::optional<std::uint64_t> seed;
    std::optional<double> constant;
    std::string size = "16x16";
    std::size_t frame_count = 12;
};

int cmd_simulate(const SimulateArgs &a, std::ostream &out) {
    LuminanceSequence frames;
    if (a.constant) {
        if (!a.frames.empty()) throw UsageError("give either frame files or --constant, not both");
        const auto [w, h] = parse_size(a.size);
        frames.assign(a.frame_count, GrayImage(w, h, *a.constant));
    } else {
        if (a.frames.empty()) throw UsageError("simulate needs frame files or --constant");
        frames = load_gray_frames(a.frames);
    }
    std::optional<AccumulatorState> init;
    if (a.seed) {
        init = AccumulatorState::random(frames.front().width(), frames.front().height(), a.omega,
                                        *a.seed);
    }
    const auto sim = simulate_stream(frames, a.omega, init, a.rate);
    write_stream_file(sim.stream, a.output);
    std::size_t spikes = 0;
    for (const auto &p : sim.stream.planes()) spikes += p.count();
    out << "frames,width,height,spikes\n"
        << sim.stream.size() << ',' << sim.stream.width() << ',' << sim.stream.height() << ','
        << spikes << '\n';
    return kExitOk;
}

struct ReconstructArgs {
    std::string input;
    std::string output;
    std::string method = "both";
    std::optional<std::int64_t> t;
    int window = kDefaultTfpWindow;
    std::optional<double> c;
    double scale = 1.0;
    int bit_depth = 8;
};

int cmd_reconstruct(const ReconstructArgs &a, std::ostream &out) {
    const SpikeStream stream = read_stream_file(a.input);
    if (stream.empty()) throw UsageError("stream has no planes");
    if (!(a.scale > 0.0)) throw UsageError("--scale must be > 0");
    const std::int64_t t = a.t.value_or(static_cast<std::int64_t>(stream.size()) - 1);

    auto emit = [&](const TextureImage &tex, const std::string &path) {
        GrayImage scaled = tex.values;
        for (double &v : scaled.values()) v /= a.scale;
        write_pgm_file(scaled, path, a.bit_depth);
        double mean = 0.0;
        for (double v : tex.values.values()) mean += v;
        mean /= static_cast<double>(tex.values.pixel_count());
        out << (tex.source == TextureSource::kTfi ? "tfi" : "tfp") << ',' << t << ','
            << format_real(mean) << ',' << path << '\n';
    };

    out << "method,t,mean,path\n";
    if (a.method == "tfi") {
        emit(tfi(stream, t), a.output);
    } else if (a.method == "tfp") {
        emit(tfp(stream, t, a.window, a.c), a.output);
    } else {
        const auto targets = tfs_targets(stream, t, a.window, a.c);
        const auto dot = a.output.rfind('.');
        const std::string stem = dot == std::string::npos ? a.output : a.output.substr(0, dot);
        const std::string ext = dot == std::string::npos ? ".pgm" : a.output.substr(dot);
        emit(targets.tfi, stem + "_tfi" + ext);
        emit(targets.tfp, stem + "_tfp" + ext);
    }
    return kExitOk;
}

struct EventsArgs {
    std::vector<std::string> frames;
    std::string output;
    double theta = 0.0;
    int stride = 1;
    bool log_intensity = false;
};

int cmd_events(const EventsArgs &a, std::ostream &out, std::ostream &err) {
    const auto frames = load_gray_frames(a.frames);
    EventOptions options;
    options.log_intensity = a.log_intensity;
    LuminanceSequence observed;
    std::vector<std::int64_t> original_index;
    for (std::size_t i = 0; i < frames.size(); i += static_cast<std::size_t>(std::max(a.stride, 1))) {
        observed.push_back(frames[i]);
        original_index.push_back(static_cast<std::int64_t>(i));
    }
    const auto missed = missed_event_count(frames, a.theta, a.stride, options);
    const auto events = simulate_events(observed, a.theta, options);

    TextSink sink(a.output, out);
    auto &csv = sink.get();
    csv << "x,y,t,polarity\n";
    for (const auto &e : events) {
        csv << e.x << ',' << e.y << ',' << original_index[static_cast<std::size_t>(e.t)] << ','
            << e.polarity << '\n';
    }
    err << "events: " << events.size() << ", missed relative to stride 1: " << missed << '\n';
    return kExitOk;
}

int cmd_blur(const std::vector<std::string> &inputs, const std::string &output, int bit_depth,
             std::ostream &out) {
    std::vector<RgbFrame> burst;
    for (const auto &p : inputs) burst.push_back(read_ppm_file(p));
    const RgbFrame blurry = synthesize_blur(burst);
    write_ppm_file(blurry, output, bit_depth);
    out << "frames,width,height\n"
        << burst.size() << ',' << blurry.width() << ',' << blurry.height() << '\n';
    return kExitOk;
}

struct DeblurArgs {
    std::string sharp;
    std::size_t scene_size = 64;
    std::string tfs = "on";
    double w = kDefaultTfsWeight;
    int window = kDefaultTfpWindow;
    double omega = kDefaultOmega;
    int iters = SolveOptions{}.iterations;
    double step = SolveOptions{}.step;
    std::uint64_t seed = 0;
    int margin = kDefaultShakeMargin;
    std::size_t shifts = kDefaultBurstLength;
    int samples_per_shift = kDefaultSamplesPerShift;
    std::string estimate;
    std::string blurry;
    std::string loss_csv;
};

int cmd_deblur(const DeblurArgs &a, std::ostream &out) {
    const RgbFrame sharp = a.sharp.empty()
                               ? make_synthetic_scene(a.scene_size, a.scene_size, a.seed)
                               : read_ppm_file(a.sharp);
    const auto traj = make_shake_trajectory(a.shifts, a.margin, a.seed + 100);
    ForgeOptions forge;
    forge.samples_per_shift = a.samples_per_shift;
    forge.cfg.weight_w = a.w;
    forge.cfg.tfp_window = a.window;
    auto [problem, reference] = forge_problem(sharp, traj, a.omega, a.seed, forge);

    SolveOptions solve_opts;
    solve_opts.use_tfs = a.tfs == "on";
    solve_opts.iterations = a.iters;
    solve_opts.step = a.step;
    const auto result = solve(problem, solve_opts);
    const auto report = evaluate(result.estimate, reference);

    if (!a.estimate.empty()) write_ppm_file(result.estimate, a.estimate, 16);
    if (!a.blurry.empty()) write_ppm_file(problem.blurry, a.blurry, 16);
    if (!a.loss_csv.empty()) {
        TextSink sink(a.loss_csv, out);
        sink.get() << "iteration,objective\n";
        char buf[64];
        for (std::size_t i = 0; i < result.loss_trace.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", result.loss_trace[i]);
            sink.get() << i << ',' << buf << '\n';
        }
    }
    out << "tfs,psnr,ssim,converter_r,converter_g,converter_b,final_objective\n"
        << a.tfs << ',' << format_real(report.psnr_db) << ',' << format_real(report.ssim) << ','
        << format_real(result.converter.r) << ',' << format_real(result.converter.g) << ','
        << format_real(result.converter.b) << ',' << result.loss_trace.back() << '\n';
    return kExitOk;
}

int cmd_cost(const std::string &widths, std::int64_t n, const std::string &mode,
             std::ostream &out) {
    const CostModel model{parse_widths(widths)};
    const auto m = mode == "event" ? SupervisionMode::kEvent : SupervisionMode::kSpike;
    out << supervision_cost(model, n, m) << '\n';
    return kExitOk;
}

int cmd_metrics(const std::string &a_path, const std::string &b_path, const std::string &format,
                double max_value, std::ostream &out) {
    const AnyImage a = read_pnm_file(a_path);
    const AnyImage b = read_pnm_file(b_path);
    if (a.index() != b.index()) throw UsageError("metrics: cannot compare gray with RGB");
    const MetricReport report = std::visit(
        [&](const auto &img) {
            using T = std::decay_t<decltype(img)>;
            return compare(img, std::get<T>(b), max_value);
        },
        a);
    if (format == "json") {
        nlohmann::json j;
        if (std::isinf(report.psnr_db)) {
            j["psnr"] = "inf";
        } else {
            j["psnr"] = report.psnr_db;
        }
        j["ssim"] = report.ssim;
        out << j.dump() << '\n';
    } else {
        out << "psnr,ssim\n" << format_real(report.psnr_db) << ',' << format_real(report.ssim)
            << '\n';
    }
    return kExitOk;
}

} // namespace

int run(std::span<const std::string> argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Spike camera simulation, texture reconstruction and spike-supervised deblurring"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto *simulate = app.add_subcommand("simulate", "Integrate-and-fire spike simulation to .spks");
    simulate->add_option("inputs", sim.frames, "Gray PGM frames in time order");
    simulate->add_option("-o,--output", sim.output, "Output .spks file")->required();
    simulate->add_option("--omega", sim.omega, "Firing threshold")->capture_default_str();
    simulate->add_option("--rate", sim.rate, "Sample rate in Hz")->capture_default_str();
    simulate->add_option("--seed", sim.seed, "Seed for uniform random accumulator init");
    simulate->add_option("--constant", sim.constant, "Use constant synthetic frames of this value");
    simulate->add_option("--size", sim.size, "Synthetic frame size WxH")->capture_default_str();
    simulate->add_option("--frames", sim.frame_count, "Synthetic frame count")->capture_default_str();

    ReconstructArgs rec;
    auto *reconstruct = app.add_subcommand("reconstruct", "TFI / TFP textures from a .spks stream");
    reconstruct->add_option("input", rec.input, "Input .spks file")->required();
    reconstruct->add_option("-o,--output", rec.output, "Output PGM")->required();
    reconstruct->add_option("--method", rec.method)
        ->check(CLI::IsMember({"tfi", "tfp", "both"}))
        ->capture_default_str();
    reconstruct->add_option("--t", rec.t, "Timestamp index (default: last)");
    reconstruct->add_option("--window", rec.window, "TFP window")->capture_default_str();
    reconstruct->add_option("--c", rec.c, "TFP scale (default: omega)");
    reconstruct->add_option("--scale", rec.scale, "Divide textures by this before writing")
        ->capture_default_str();
    reconstruct->add_option("--bit-depth", rec.bit_depth)
        ->check(CLI::IsMember({8, 16}))
        ->capture_default_str();

    EventsArgs ev;
    auto *events = app.add_subcommand("events", "Contrast-threshold event simulation to CSV");
    events->add_option("frames", ev.frames, "Gray PGM frames in time order")->required();
    events->add_option("--theta", ev.theta, "Contrast threshold")->required();
    events->add_option("--stride", ev.stride, "Observe every stride-th frame")->capture_default_str();
    events->add_flag("--log", ev.log_intensity, "Threshold log intensity");
    events->add_option("-o,--output", ev.output, "CSV output (default stdout)");

    std::vector<std::string> blur_inputs;
    std::string blur_output;
    int blur_depth = 8;
    auto *blur = app.add_subcommand("blur", "Average a burst of PPM frames");
    blur->add_option("frames", blur_inputs, "Sharp PPM frames")->required();
    blur->add_option("-o,--output", blur_output, "Blurry PPM")->required();
    blur->add_option("--bit-depth", blur_depth)->check(CLI::IsMember({8, 16}))->capture_default_str();

    DeblurArgs db;
    auto *deblur = app.add_subcommand("deblur", "Spike-supervised deblurring demo");
    deblur->add_option("--sharp", db.sharp, "Sharp PPM (default: seeded synthetic scene)");
    deblur->add_option("--size", db.scene_size, "Synthetic scene size")->capture_default_str();
    deblur->add_option("--tfs", db.tfs)->check(CLI::IsMember({"on", "off"}))->capture_default_str();
    deblur->add_option("--w", db.w, "TfS weight")->capture_default_str();
    deblur->add_option("--window", db.window, "TFP window")->capture_default_str();
    deblur->add_option("--omega", db.omega)->capture_default_str();
    deblur->add_option("--iters", db.iters)->capture_default_str();
    deblur->add_option("--step", db.step)->capture_default_str();
    deblur->add_option("--seed", db.seed)->capture_default_str();
    deblur->add_option("--margin", db.margin, "Shake margin in pixels")->capture_default_str();
    deblur->add_option("--shifts", db.shifts, "Sub-exposures per blurry frame")->capture_default_str();
    deblur->add_option("--samples-per-shift", db.samples_per_shift)->capture_default_str();
    deblur->add_option("--estimate", db.estimate, "Write the estimate as 16-bit PPM");
    deblur->add_option("--blurry", db.blurry, "Write the blurry observation as 16-bit PPM");
    deblur->add_option("--loss-csv", db.loss_csv, "Write the objective trace as CSV");

    std::string widths;
    std::int64_t cost_n = 1;
    std::string cost_mode = "spike";
    auto *cost = app.add_subcommand("cost", "Supervision cost of a dense MLP");
    cost->add_option("--widths", widths, "Layer widths n0,n1,...,nL")->required();
    cost->add_option("--n", cost_n, "Sampled timestamps")->capture_default_str();
    cost->add_option("--mode", cost_mode)->check(CLI::IsMember({"event", "spike"}))->capture_default_str();

    std::string metric_a;
    std::string metric_b;
    std::string metric_format = "csv";
    double metric_max = 1.0;
    auto *metrics = app.add_subcommand("metrics", "PSNR and SSIM between two PGM/PPM images");
    metrics->add_option("a", metric_a)->required();
    metrics->add_option("b", metric_b)->required();
    metrics->add_option("--format", metric_format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    metrics->add_option("--max", metric_max, "Peak value on the [0,1] scale")->capture_default_str();

    std::vector<const char *> raw;
    raw.reserve(argv.size());
    for (const auto &s : argv) raw.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(raw.size()), raw.data());
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim, out);
        if (reconstruct->parsed()) return cmd_reconstruct(rec, out);
        if (events->parsed()) return cmd_events(ev, out, err);
        if (blur->parsed()) return cmd_blur(blur_inputs, blur_output, blur_depth, out);
        if (deblur->parsed()) return cmd_deblur(db, out);
        if (cost->parsed()) return cmd_cost(widths, cost_n, cost_mode, out);
        if (metrics->parsed()) return cmd_metrics(metric_a, metric_b, metric_format, metric_max, out);
    } catch (const IoError &e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const FormatError &e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const DivergenceError &e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::out_of_range &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UsageError &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return kExitUsage;
}

} // namespace spikedeblur::cli
