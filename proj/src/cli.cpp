#include "mbsc/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "mbsc/codec.hpp"
#include "mbsc/error.hpp"
#include "mbsc/metrics.hpp"
#include "mbsc/signalio.hpp"

namespace mbsc::cli {

namespace fs = std::filesystem;

namespace {

struct InputOptions {
    std::string path;
    std::string sidecar;
    unsigned bits = 0;
};

struct CodingOptions {
    unsigned delta = 0;
    std::string mode = "fixed";
    unsigned root = 0;
    std::string layout;
    std::string tree;
    unsigned order = 7;
    double lambda = 0.99;
    unsigned temperature = 32;
    unsigned halving = 16;
    unsigned tau = 0;
    unsigned block = 50;
    unsigned window = 5;
    double gamma = 0.03;
    unsigned max_learn = 3000;
};

bool is_raw(const InputOptions& in) {
    return !in.sidecar.empty() || fs::path(in.path).extension() == ".raw";
}

fs::path default_sidecar(const fs::path& raw) {
    fs::path p = raw;
    return p.replace_extension(".json");
}

SignalMatrix load_input(const InputOptions& in) {
    if (is_raw(in)) {
        const fs::path sidecar = in.sidecar.empty() ? default_sidecar(in.path) : fs::path(in.sidecar);
        SignalMatrix s = load_raw(in.path, sidecar);
        if (in.bits != 0) {
            s.set_alphabet(AlphabetSpec{in.bits});
            s.alphabet().validate();
            s.validate();
        }
        return s;
    }
    return load_csv(in.path, in.bits ? std::optional<unsigned>(in.bits) : std::nullopt);
}

void store_output(const SignalMatrix& s, const fs::path& path, const std::string& sidecar) {
    if (path.extension() == ".raw") {
        store_raw(s, path, sidecar.empty() ? default_sidecar(path) : fs::path(sidecar));
    } else {
        store_csv(s, path);
    }
}

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
    const std::string s = read_file(path);
    return {s.begin(), s.end()};
}

// "0-1,1-2,1-3": parent-child pairs.
CodingTree parse_tree(const std::string& text, std::size_t channels, ChannelId root) {
    std::vector<ChannelId> parents(channels, root);
    std::vector<bool> assigned(channels, false);
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto dash = item.find('-');
        if (dash == std::string::npos) throw Error(ErrorCode::InvalidArgument, "tree edge '" + item + "' is not parent-child");
        unsigned long parent = 0, child = 0;
        try {
            parent = std::stoul(item.substr(0, dash));
            child = std::stoul(item.substr(dash + 1));
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidArgument, "tree edge '" + item + "' is not numeric");
        }
        if (child >= channels || parent >= channels || assigned[child] || child == root) {
            throw Error(ErrorCode::InvalidArgument, "tree edge '" + item + "' is invalid for " +
                                                        std::to_string(channels) + " channels rooted at " +
                                                        std::to_string(root));
        }
        parents[child] = static_cast<ChannelId>(parent);
        assigned[child] = true;
    }
    for (std::size_t c = 0; c < channels; ++c) {
        if (c != root && !assigned[c]) {
            throw Error(ErrorCode::InvalidArgument, "tree leaves channel " + std::to_string(c) + " without a parent");
        }
    }
    return CodingTree::from_parents(root, parents);
}

CodecConfig make_config(const CodingOptions& o) {
    CodecConfig c;
    c.max_order = o.order;
    c.lambda = o.lambda;
    c.temperature = static_cast<std::uint16_t>(o.temperature);
    c.halving_interval = static_cast<std::uint16_t>(o.halving);
    c.tau = o.tau;
    c.delta = o.delta;
    if (o.mode == "adaptive") {
        c.mode = TreeMode::Adaptive;
    } else if (o.mode == "fixed") {
        c.mode = TreeMode::Fixed;
    } else {
        throw Error(ErrorCode::InvalidArgument, "mode must be 'fixed' or 'adaptive'");
    }
    c.stopping = {o.block, o.window, o.gamma, o.max_learn};
    c.root = o.root;
    return c;
}

std::optional<CodingTree> make_tree(const CodingOptions& o, const CodecConfig& config, std::size_t channels) {
    if (config.mode == TreeMode::Adaptive) return std::nullopt;
    if (o.root >= channels) throw Error(ErrorCode::InvalidArgument, "root channel outside channel range");
    if (!o.tree.empty()) return parse_tree(o.tree, channels, o.root);
    if (!o.layout.empty()) {
        const SensorLayout layout = load_layout(o.layout);
        if (layout.size() != channels) {
            throw Error(ErrorCode::ConfigMismatch, "layout has " + std::to_string(layout.size()) +
                                                       " channels, signal has " + std::to_string(channels));
        }
        return build_geometry_tree(layout, o.root);
    }
    if (channels == 1) return CodingTree(0, {});
    throw Error(ErrorCode::InvalidArgument, "fixed mode needs --layout or --tree");
}

void add_input(CLI::App* cmd, InputOptions& in) {
    cmd->add_option("input", in.path, "Input signal (.csv, or .raw with a JSON sidecar)")->required();
    cmd->add_option("--sidecar", in.sidecar, "Sidecar for raw input (default: input with .json extension)");
    cmd->add_option("--bits", in.bits, "Bits per sample (default: inferred for CSV, sidecar for raw)");
}

void add_coding(CLI::App* cmd, CodingOptions& o) {
    cmd->add_option("--mode", o.mode, "Coding tree: fixed (from --layout/--tree) or adaptive")
        ->check(CLI::IsMember({"fixed", "adaptive"}));
    cmd->add_option("--root", o.root, "Root channel of the coding tree");
    cmd->add_option("--layout", o.layout, "Sensor layout CSV (name,kind,x,y,z)");
    cmd->add_option("--tree", o.tree, "Explicit tree as parent-child pairs, e.g. 0-1,1-2");
    cmd->add_option("--order", o.order, "Maximum prediction order");
    cmd->add_option("--lambda", o.lambda, "Forgetting factor");
    cmd->add_option("--temperature", o.temperature, "Baseline mixture temperature");
    cmd->add_option("--halving", o.halving, "Interval between halvings of Golomb statistics");
    cmd->add_option("--tau", o.tau, "Code word length bound (default 4 x bits)");
    cmd->add_option("--block", o.block, "Tree update block size (adaptive)");
    cmd->add_option("--window", o.window, "Stopping window (adaptive)");
    cmd->add_option("--gamma", o.gamma, "Stopping threshold (adaptive)");
    cmd->add_option("--max-learn", o.max_learn, "Learning cap in vector samples (adaptive)");
}

}  // namespace

std::vector<unsigned> parse_delta_list(const std::string& text) {
    std::vector<unsigned> out;
    auto number = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            const unsigned long v = std::stoul(s, &used);
            if (used != s.size() || v > 255) throw std::out_of_range("delta");
            return static_cast<unsigned>(v);
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidArgument, "bad delta '" + s + "' (expected 0..255)");
        }
    };
    const auto range = text.find("..");
    if (range != std::string::npos) {
        const unsigned lo = number(text.substr(0, range));
        const unsigned hi = number(text.substr(range + 2));
        if (lo > hi) throw Error(ErrorCode::InvalidArgument, "empty delta range '" + text + "'");
        for (unsigned d = lo; d <= hi; ++d) out.push_back(d);
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(number(item));
    if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty delta list");
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sequential lossless/near-lossless coder for multi-channel integer signals", "mbsc"};
    app.require_subcommand(1);

    InputOptions enc_in;
    CodingOptions enc_opts;
    std::string enc_out;
    bool debug_tree = false;
    auto* encode = app.add_subcommand("encode", "Compress a signal");
    add_input(encode, enc_in);
    add_coding(encode, enc_opts);
    encode->add_option("--delta", enc_opts.delta, "Maximum absolute reconstruction error")->check(CLI::Range(0, 255));
    encode->add_option("--out", enc_out, "Output stream")->required();
    encode->add_flag("--emit-debug-tree", debug_tree, "Append the final coding tree as a trailer");

    std::string dec_in, dec_out, dec_sidecar;
    auto* decode = app.add_subcommand("decode", "Decompress a stream");
    decode->add_option("stream", dec_in, "Compressed stream")->required();
    decode->add_option("--out", dec_out, "Output signal (.csv or .raw)")->required();
    decode->add_option("--sidecar", dec_sidecar, "Sidecar path for raw output");

    InputOptions sw_in;
    CodingOptions sw_opts;
    std::string deltas = "0..10";
    double scale = 1.0;
    bool per_channel = false;
    auto* sweep = app.add_subcommand("sweep", "Rate-distortion sweep over delta values (CSV on stdout)");
    add_input(sweep, sw_in);
    add_coding(sweep, sw_opts);
    sweep->add_option("--deltas", deltas, "Delta values: 0..10 or 0,5,10");
    sweep->add_option("--scale", scale, "Microvolts per sample count");
    sweep->add_flag("--per-channel", per_channel, "One row per channel and delta");

    std::string info_in;
    auto* info = app.add_subcommand("info", "Print stream header fields");
    info->add_option("stream", info_in, "Compressed stream")->required();

    SynthOptions synth_opts;
    std::string synth_out, synth_layout, coupling = "chain";
    unsigned synth_bits = 16;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic MVAR signal");
    synth->add_option("--channels", synth_opts.channels, "Channel count")->check(CLI::Range(1, 65535));
    synth->add_option("--samples", synth_opts.samples, "Vector samples");
    synth->add_option("--bits", synth_bits, "Bits per sample")->check(CLI::Range(8, 16));
    synth->add_option("--seed", synth_opts.seed, "Random seed");
    synth->add_option("--coupling", coupling, "chain or star")->check(CLI::IsMember({"chain", "star"}));
    synth->add_option("--noise-scale", synth_opts.noise_scale, "Own-noise level of coupled channels");
    synth->add_option("--out", synth_out, "Output signal (.csv or .raw)")->required();
    synth->add_option("--layout-out", synth_layout, "Also write a line layout matching the chain");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (*encode) {
            const SignalMatrix signal = load_input(enc_in);
            const CodecConfig config = make_config(enc_opts);
            const auto tree = make_tree(enc_opts, config, signal.channels());
            const EncodeResult result = encode_stream(signal, config, tree, debug_tree);
            write_file(enc_out, std::string_view(reinterpret_cast<const char*>(result.bytes.data()), result.bytes.size()));
            err << "encoded " << signal.channels() << "x" << signal.samples() << " samples into "
                << result.bytes.size() << " bytes ("
                << (signal.samples() ? compression_ratio(result.bytes.size() * 8, signal.samples() * signal.channels()) : 0.0)
                << " bps)\n";
        } else if (*decode) {
            const auto bytes = read_bytes(dec_in);
            store_output(decode_stream(bytes), dec_out, dec_sidecar);
        } else if (*sweep) {
            const SignalMatrix signal = load_input(sw_in);
            const CodecConfig config = make_config(sw_opts);
            const auto tree = make_tree(sw_opts, config, signal.channels());
            const auto list = parse_delta_list(deltas);
            const auto reports = rd_sweep(signal, config, tree, list, scale, per_channel);
            out << format_report_csv(reports, scale, per_channel);
        } else if (*info) {
            std::ifstream in(info_in, std::ios::binary);
            if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + info_in);
            std::vector<std::uint8_t> head(kHeaderPrefixBytes);
            in.read(reinterpret_cast<char*>(head.data()), static_cast<std::streamsize>(head.size()));
            if (in.gcount() != static_cast<std::streamsize>(head.size())) {
                throw Error(ErrorCode::EndOfStream, "stream shorter than its header");
            }
            head.resize(header_size(head));
            in.read(reinterpret_cast<char*>(head.data() + kHeaderPrefixBytes),
                    static_cast<std::streamsize>(head.size() - kHeaderPrefixBytes));
            const StreamHeader h = read_header(std::span<const std::uint8_t>(
                head.data(), kHeaderPrefixBytes + static_cast<std::size_t>(in.gcount())));
            out << "channels: " << h.channels << "\n"
                << "bits: " << h.alphabet.bits << "\n"
                << "delta: " << h.config.delta << "\n"
                << "mode: " << (h.config.mode == TreeMode::Adaptive ? "adaptive" : "fixed") << "\n"
                << "samples: " << h.samples << "\n"
                << "root: " << h.config.root << "\n"
                << "max_order: " << h.config.max_order << "\n"
                << "lambda: " << h.config.lambda << "\n"
                << "tau: " << h.config.tau << "\n"
                << "header_bytes: " << h.size_bytes << "\n";
            if (h.config.mode == TreeMode::Fixed) {
                out << "tree:";
                for (const auto& e : h.tree.edges()) out << ' ' << e.parent << '-' << e.child;
                out << "\n";
            }
        } else if (*synth) {
            synth_opts.alphabet = AlphabetSpec{synth_bits};
            synth_opts.coupling = coupling == "star" ? Coupling::Star : Coupling::Chain;
            store_output(synth_mvar(synth_opts), synth_out, "");
            if (!synth_layout.empty()) write_file(synth_layout, format_layout(line_layout(synth_opts.channels)));
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        switch (e.category()) {
            case ErrorCategory::Usage: return kUsage;
            case ErrorCategory::Data: return kDataError;
            case ErrorCategory::Stream: return kMalformedStream;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kDataError;
    }
    return kOk;
}

}  // namespace mbsc::cli
