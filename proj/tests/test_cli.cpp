#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "mbsc/cli.hpp"
#include "mbsc/error.hpp"
#include "mbsc/signalio.hpp"

using namespace mbsc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

struct ScratchDir {
    fs::path path;
    explicit ScratchDir(const std::string& name) : path(fs::temp_directory_path() / ("mbsc_cli_" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~ScratchDir() { fs::remove_all(path); }
    std::string operator/(const std::string& file) const { return (path / file).string(); }
};

std::size_t line_count(const std::string& text) {
    std::size_t n = 0;
    for (char c : text) n += c == '\n';
    return n;
}

}  // namespace

TEST_CASE("delta lists accept ranges and enumerations") {
    CHECK(cli::parse_delta_list("0..3") == std::vector<unsigned>{0, 1, 2, 3});
    CHECK(cli::parse_delta_list("5,0,10") == std::vector<unsigned>{5, 0, 10});
    CHECK(cli::parse_delta_list("7") == std::vector<unsigned>{7});
    CHECK_THROWS_AS(cli::parse_delta_list("3..1"), Error);
    CHECK_THROWS_AS(cli::parse_delta_list("a"), Error);
    CHECK_THROWS_AS(cli::parse_delta_list("256"), Error);
}

TEST_CASE("adaptive csv round trip through files") {
    ScratchDir dir("csv");
    REQUIRE(run_cli({"synth", "--channels", "5", "--samples", "800", "--seed", "4", "--out", dir / "in.csv"}).code == 0);
    const auto enc = run_cli({"encode", "--mode", "adaptive", "--delta", "0", dir / "in.csv", "--out", dir / "s.mbsc"});
    REQUIRE(enc.code == 0);
    REQUIRE(run_cli({"decode", dir / "s.mbsc", "--out", dir / "r.csv"}).code == 0);
    CHECK(read_file(dir / "r.csv") == read_file(dir / "in.csv"));
}

TEST_CASE("raw input with a sidecar round trips and sweeps") {
    ScratchDir dir("raw");
    REQUIRE(run_cli({"synth", "--channels", "4", "--samples", "600", "--bits", "12", "--out", dir / "in.raw",
                     "--layout-out", dir / "layout.csv"})
                .code == 0);
    REQUIRE(fs::exists(dir / "in.json"));
    const auto enc =
        run_cli({"encode", dir / "in.raw", "--sidecar", dir / "in.json", "--layout", dir / "layout.csv", "--out", dir / "s.mbsc"});
    REQUIRE(enc.code == 0);
    REQUIRE(run_cli({"decode", dir / "s.mbsc", "--out", dir / "out.raw"}).code == 0);
    CHECK(read_file(dir / "out.raw") == read_file(dir / "in.raw"));
    CHECK(parse_sidecar(read_file(dir / "out.json")).bits == 12);

    const auto sweep = run_cli({"sweep", "--deltas", "0..10", dir / "in.raw", "--sidecar", dir / "in.json", "--mode", "adaptive"});
    REQUIRE(sweep.code == 0);
    CHECK(line_count(sweep.out) == 12);
    CHECK(sweep.out.rfind("delta,cr_bps,mae,mae_uv,snr_db,mstarae,n_s,enc_us,dec_us\n", 0) == 0);

    const auto per = run_cli({"sweep", "--deltas", "0,3", dir / "in.raw", "--per-channel", "--tree", "0-1,1-2,2-3"});
    REQUIRE(per.code == 0);
    CHECK(line_count(per.out) == 1 + 2 * 4);
}

TEST_CASE("info echoes the header without touching the payload") {
    ScratchDir dir("info");
    REQUIRE(run_cli({"synth", "--channels", "3", "--samples", "300", "--out", dir / "in.csv"}).code == 0);
    REQUIRE(run_cli({"encode", dir / "in.csv", "--delta", "2", "--tree", "0-1,0-2", "--out", dir / "s.mbsc"}).code == 0);
    const auto info = run_cli({"info", dir / "s.mbsc"});
    REQUIRE(info.code == 0);
    CHECK(info.out.find("channels: 3\n") != std::string::npos);
    CHECK(info.out.find("bits: 16\n") != std::string::npos);
    CHECK(info.out.find("delta: 2\n") != std::string::npos);
    CHECK(info.out.find("mode: fixed\n") != std::string::npos);
    CHECK(info.out.find("samples: 300\n") != std::string::npos);
    CHECK(info.out.find("tree: 0-1 0-2\n") != std::string::npos);

    const std::string whole = read_file(dir / "s.mbsc");
    const auto header_only = info.out.substr(info.out.find("header_bytes: ") + 14);
    write_file(dir / "head.mbsc", whole.substr(0, std::stoul(header_only)));
    const auto again = run_cli({"info", dir / "head.mbsc"});
    CHECK(again.code == 0);
    CHECK(again.out == info.out);
}

TEST_CASE("errors map to exit codes") {
    ScratchDir dir("errors");
    REQUIRE(run_cli({"synth", "--channels", "3", "--samples", "100", "--out", dir / "in.csv"}).code == 0);

    CHECK(run_cli({}).code == cli::kUsage);
    CHECK(run_cli({"encode", dir / "in.csv"}).code == cli::kUsage);
    CHECK(run_cli({"encode", dir / "in.csv", "--out", dir / "s.mbsc"}).code == cli::kUsage);
    CHECK(run_cli({"encode", dir / "in.csv", "--mode", "bogus", "--out", dir / "s.mbsc"}).code == cli::kUsage);
    CHECK(run_cli({"encode", dir / "in.csv", "--tree", "0-1", "--out", dir / "s.mbsc"}).code == cli::kUsage);
    CHECK(run_cli({"sweep", dir / "in.csv", "--mode", "adaptive", "--deltas", "9..1"}).code == cli::kUsage);

    write_file(dir / "ragged.csv", "1,2\n3\n");
    const auto ragged = run_cli({"encode", dir / "ragged.csv", "--mode", "adaptive", "--out", dir / "x.mbsc"});
    CHECK(ragged.code == cli::kDataError);
    CHECK_FALSE(ragged.err.empty());

    write_file(dir / "layout.csv", "a,position,0,0,0\nb,position,1,0,0\n");
    CHECK(run_cli({"encode", dir / "in.csv", "--layout", dir / "layout.csv", "--out", dir / "x.mbsc"}).code ==
          cli::kDataError);
    CHECK(run_cli({"encode", dir / "missing.csv", "--mode", "adaptive", "--out", dir / "x.mbsc"}).code ==
          cli::kDataError);

    write_file(dir / "junk.mbsc", "definitely not a stream");
    CHECK(run_cli({"decode", dir / "junk.mbsc", "--out", dir / "r.csv"}).code == cli::kMalformedStream);
    CHECK(run_cli({"info", dir / "junk.mbsc"}).code == cli::kMalformedStream);

    REQUIRE(run_cli({"encode", dir / "in.csv", "--mode", "adaptive", "--out", dir / "s.mbsc"}).code == 0);
    const std::string whole = read_file(dir / "s.mbsc");
    write_file(dir / "cut.mbsc", whole.substr(0, whole.size() / 2));
    CHECK(run_cli({"decode", dir / "cut.mbsc", "--out", dir / "r.csv"}).code == cli::kMalformedStream);

    const auto help = run_cli({"--help"});
    CHECK(help.code == cli::kOk);
    CHECK(help.out.find("encode") != std::string::npos);
}
