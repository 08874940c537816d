#include "mbsc/signalio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "mbsc/error.hpp"

namespace mbsc {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

template <class F>
void for_each_line(std::string_view text, F&& f) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        const std::size_t pos = text.find('\n');
        const std::string_view line = trim(text.substr(0, pos));
        ++line_no;
        if (!line.empty()) f(line, line_no);
        if (pos == std::string_view::npos) break;
        text.remove_prefix(pos + 1);
    }
}

double parse_double(std::string_view field, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const std::string s(field);
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidLayout, "bad number '" + std::string(field) + "' on line " + std::to_string(line_no));
    }
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::IoFailure, "write failed for " + path.string());
}

SignalMatrix parse_csv(std::string_view text, std::optional<unsigned> bits) {
    std::vector<std::vector<std::int64_t>> rows;
    std::size_t width = 0;
    for_each_line(text, [&](std::string_view line, std::size_t line_no) {
        const auto fields = split(line, ',');
        if (rows.empty()) {
            width = fields.size();
        } else if (fields.size() != width) {
            throw Error(ErrorCode::RaggedRows, "line " + std::to_string(line_no) + " has " +
                                                   std::to_string(fields.size()) + " fields, expected " +
                                                   std::to_string(width));
        }
        std::vector<std::int64_t> row;
        row.reserve(width);
        for (auto f : fields) {
            std::int64_t v = 0;
            if (!f.empty() && f.front() == '+') f.remove_prefix(1);
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (f.empty() || ec != std::errc{} || ptr != f.data() + f.size()) {
                throw Error(ErrorCode::NonInteger,
                            "field '" + std::string(f) + "' on line " + std::to_string(line_no) + " is not an integer");
            }
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    });

    std::int64_t lo = 0, hi = 0;
    for (const auto& row : rows) {
        for (auto v : row) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    AlphabetSpec alphabet;
    if (bits) {
        alphabet.bits = *bits;
        alphabet.validate();
    } else {
        alphabet.bits = 0;
        for (unsigned b : {8u, 12u, 16u}) {
            if (AlphabetSpec{b}.contains(lo) && AlphabetSpec{b}.contains(hi)) {
                alphabet.bits = b;
                break;
            }
        }
        if (alphabet.bits == 0) throw Error(ErrorCode::OutOfDeclaredRange, "values exceed the 16-bit signed range");
    }

    SignalMatrix out(width, rows.size(), alphabet);
    for (std::size_t n = 0; n < rows.size(); ++n) {
        for (std::size_t c = 0; c < width; ++c) {
            if (!alphabet.contains(rows[n][c])) {
                throw Error(ErrorCode::OutOfDeclaredRange, "value " + std::to_string(rows[n][c]) + " outside " +
                                                               std::to_string(alphabet.bits) + "-bit signed range");
            }
            out.at(c, n) = static_cast<std::int32_t>(rows[n][c]);
        }
    }
    return out;
}

SignalMatrix load_csv(const std::filesystem::path& path, std::optional<unsigned> bits) {
    return parse_csv(read_file(path), bits);
}

std::string format_csv(const SignalMatrix& signal) {
    std::string out;
    out.reserve(signal.samples() * signal.channels() * 7);
    char buf[16];
    for (std::size_t n = 0; n < signal.samples(); ++n) {
        for (std::size_t c = 0; c < signal.channels(); ++c) {
            if (c) out.push_back(',');
            const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, signal.at(c, n));
            out.append(buf, ptr);
        }
        out.push_back('\n');
    }
    return out;
}

void store_csv(const SignalMatrix& signal, const std::filesystem::path& path) { write_file(path, format_csv(signal)); }

RawSidecar parse_sidecar(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::MissingSidecarField, std::string("sidecar is not valid JSON: ") + e.what());
    }
    auto need = [&](const char* key) -> const nlohmann::json& {
        if (!j.is_object() || !j.contains(key) || !j[key].is_number()) {
            throw Error(ErrorCode::MissingSidecarField, std::string("sidecar lacks numeric field '") + key + "'");
        }
        return j[key];
    };
    RawSidecar s;
    const auto channels = need("channels").get<std::int64_t>();
    const auto bits = need("bits").get<std::int64_t>();
    if (channels <= 0) throw Error(ErrorCode::MissingSidecarField, "sidecar channel count must be positive");
    s.channels = static_cast<std::size_t>(channels);
    s.bits = static_cast<unsigned>(std::clamp<std::int64_t>(bits, 0, 64));
    if (j.contains("rate") && j["rate"].is_number()) s.rate = j["rate"].get<double>();
    return s;
}

std::string format_sidecar(const RawSidecar& sidecar) {
    nlohmann::json j;
    j["channels"] = sidecar.channels;
    j["bits"] = sidecar.bits;
    if (sidecar.rate > 0) j["rate"] = sidecar.rate;
    return j.dump(2) + "\n";
}

SignalMatrix parse_raw(std::string_view bytes, const RawSidecar& sidecar) {
    const AlphabetSpec alphabet{sidecar.bits};
    alphabet.validate();
    const std::size_t frame = 2 * sidecar.channels;
    if (bytes.size() % frame != 0) {
        throw Error(ErrorCode::SizeNotMultiple, std::to_string(bytes.size()) + " bytes is not a multiple of " +
                                                    std::to_string(frame) + " (2 bytes x " +
                                                    std::to_string(sidecar.channels) + " channels)");
    }
    const std::size_t n_samples = bytes.size() / frame;
    SignalMatrix out(sidecar.channels, n_samples, alphabet);
    out.set_sampling_rate(sidecar.rate);
    std::size_t pos = 0;
    for (std::size_t n = 0; n < n_samples; ++n) {
        for (std::size_t c = 0; c < sidecar.channels; ++c) {
            const auto lo = static_cast<std::uint8_t>(bytes[pos]);
            const auto hi = static_cast<std::uint8_t>(bytes[pos + 1]);
            pos += 2;
            const auto v = static_cast<std::int16_t>(static_cast<std::uint16_t>(lo | (hi << 8)));
            out.at(c, n) = v;
        }
    }
    out.validate();
    return out;
}

SignalMatrix load_raw(const std::filesystem::path& path, const std::filesystem::path& sidecar) {
    return parse_raw(read_file(path), parse_sidecar(read_file(sidecar)));
}

void store_raw(const SignalMatrix& signal, const std::filesystem::path& path, const std::filesystem::path& sidecar) {
    std::string bytes;
    bytes.reserve(signal.samples() * signal.channels() * 2);
    for (std::size_t n = 0; n < signal.samples(); ++n) {
        for (std::size_t c = 0; c < signal.channels(); ++c) {
            const auto v = static_cast<std::uint16_t>(static_cast<std::int16_t>(signal.at(c, n)));
            bytes.push_back(static_cast<char>(v & 0xFF));
            bytes.push_back(static_cast<char>(v >> 8));
        }
    }
    write_file(path, bytes);
    write_file(sidecar, format_sidecar({signal.channels(), signal.alphabet().bits, signal.sampling_rate()}));
}

SensorLayout parse_layout(std::string_view text) {
    SensorLayout layout;
    bool first = true;
    bool kind_set = false;
    for_each_line(text, [&](std::string_view line, std::size_t line_no) {
        if (line.front() == '#') return;
        const auto fields = split(line, ',');
        if (first && !fields.empty() && fields[0] == "name") {
            first = false;
            return;
        }
        first = false;
        if (fields.size() != 5) {
            throw Error(ErrorCode::InvalidLayout, "line " + std::to_string(line_no) + ": expected name,kind,x,y,z");
        }
        LayoutKind kind;
        if (fields[1] == "position") {
            kind = LayoutKind::Position;
        } else if (fields[1] == "direction") {
            kind = LayoutKind::Direction;
        } else {
            throw Error(ErrorCode::InvalidLayout, "unknown sensor kind '" + std::string(fields[1]) + "'");
        }
        if (kind_set && kind != layout.kind) throw Error(ErrorCode::InvalidLayout, "layout mixes positions and directions");
        layout.kind = kind;
        kind_set = true;
        layout.names.emplace_back(fields[0]);
        layout.coords.push_back(
            {parse_double(fields[2], line_no), parse_double(fields[3], line_no), parse_double(fields[4], line_no)});
    });
    layout.validate();
    return layout;
}

SensorLayout load_layout(const std::filesystem::path& path) { return parse_layout(read_file(path)); }

std::string format_layout(const SensorLayout& layout) {
    std::ostringstream out;
    out.precision(17);
    out << "name,kind,x,y,z\n";
    for (std::size_t i = 0; i < layout.size(); ++i) {
        const std::string name = i < layout.names.size() ? layout.names[i] : "ch" + std::to_string(i);
        out << name << ',' << (layout.kind == LayoutKind::Position ? "position" : "direction") << ','
            << layout.coords[i][0] << ',' << layout.coords[i][1] << ',' << layout.coords[i][2] << '\n';
    }
    return out.str();
}

SensorLayout line_layout(std::size_t channels) {
    SensorLayout layout;
    for (std::size_t i = 0; i < channels; ++i) {
        layout.names.push_back("ch" + std::to_string(i));
        layout.coords.push_back({static_cast<double>(i), 0.0, 0.0});
    }
    return layout;
}

SignalMatrix synth_mvar(const SynthOptions& o) {
    o.alphabet.validate();
    const std::size_t m = o.channels;
    if (m == 0) throw Error(ErrorCode::InvalidArgument, "synth_mvar needs at least one channel");
    constexpr std::size_t kBurnIn = 200;
    const std::size_t total = o.samples + kBurnIn;

    std::mt19937_64 rng(o.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::vector<double>> x(m, std::vector<double>(total, 0.0));

    // Poles at 0.9 and 0.65 +- 0.27i.
    constexpr double a1 = 2.2, a2 = -1.67, a3 = 0.45;
    auto& x0 = x[0];
    for (std::size_t n = 0; n < total; ++n) {
        const double p1 = n >= 1 ? x0[n - 1] : 0.0;
        const double p2 = n >= 2 ? x0[n - 2] : 0.0;
        const double p3 = n >= 3 ? x0[n - 3] : 0.0;
        x0[n] = a1 * p1 + a2 * p2 + a3 * p3 + gauss(rng);
    }
    double mean = 0.0, power = 0.0;
    for (std::size_t n = kBurnIn; n < total; ++n) mean += x0[n];
    mean /= static_cast<double>(std::max<std::size_t>(o.samples, 1));
    for (std::size_t n = kBurnIn; n < total; ++n) power += (x0[n] - mean) * (x0[n] - mean);
    const double std0 = o.samples > 1 ? std::sqrt(power / static_cast<double>(o.samples)) : 1.0;

    constexpr double kNoisePole = 0.8;
    const double innovation = o.noise_scale * std0 * std::sqrt(1.0 - kNoisePole * kNoisePole);
    for (std::size_t i = 1; i < m; ++i) {
        const auto& src = x[o.coupling == Coupling::Chain ? i - 1 : 0];
        double noise = 0.0;
        for (std::size_t n = 0; n < total; ++n) {
            noise = kNoisePole * noise + innovation * gauss(rng);
            double coupled = 0.0;
            for (std::size_t k = 0; k < 3; ++k) {
                if (n >= k) coupled += o.lag_mix[k] * src[n - k];
            }
            x[i][n] = o.alpha * coupled + noise;
        }
    }

    double loudest = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (std::size_t n = kBurnIn; n < total; ++n) s += x[i][n] * x[i][n];
        loudest = std::max(loudest, std::sqrt(s / static_cast<double>(std::max<std::size_t>(o.samples, 1))));
    }
    const double scale = loudest > 0 ? o.amplitude * static_cast<double>(o.alphabet.size()) / loudest : 1.0;

    SignalMatrix out(m, o.samples, o.alphabet);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t n = 0; n < o.samples; ++n) {
            out.at(i, n) = o.alphabet.clamp(std::llround(x[i][n + kBurnIn] * scale));
        }
    }
    return out;
}

}  // namespace mbsc
