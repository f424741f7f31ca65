#include <doctest.h>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lmoment/errors.hpp"
#include "lmoment/io.hpp"

using namespace lmoment;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("lmoment-test-" + std::to_string(std::rand()) + "-" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::string write_file(const fs::path& p, const std::string& body) {
    std::ofstream out(p);
    out << body;
    return p.string();
}

}  // namespace

TEST_CASE("format_double round-trips IEEE doubles") {
    for (const double v : {0.1, 1.0 / 3.0, 3.141592653589793, 1e300, -2.5e-308, 0.0,
                           -0.00023515787204585324178, 5.0, 1e17, 123456789.123456789}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_double(5.0) == "5");
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("RunConfig validation") {
    RunConfig cfg;
    cfg.parallelism = 1;
    CHECK_NOTHROW(cfg.validate());

    RunConfig bad = cfg;
    bad.mode = "hope";
    CHECK_THROWS_AS(bad.validate(), DomainError);

    bad = cfg;
    bad.k = 0.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);

    bad = cfg;
    bad.mode = "unconditional";
    bad.k = 0.5;
    bad.v = 3;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad.v = 2;
    CHECK_NOTHROW(bad.validate());

    bad = cfg;
    bad.output_format = "xml";
    CHECK_THROWS_AS(bad.validate(), DomainError);

    bad = cfg;
    bad.quadrature_tol = -1.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("load_config layering: flags beat env beat file beat defaults") {
    const RunConfig defaults = load_config({}, {}, {});
    CHECK(defaults.k == 1.0);
    CHECK(defaults.mode == "GRH");
    CHECK(defaults.parallelism >= 1);
    CHECK_FALSE(defaults.delta_override.has_value());

    const RunConfig from_file = load_config({{"k", "2"}, {"cache_dir", "a"}}, {}, {});
    CHECK(from_file.k == 2.0);
    CHECK(from_file.cache_dir == "a");

    const RunConfig env_wins = load_config({{"cache_dir", "a"}}, {{"cache_dir", "b"}}, {});
    CHECK(env_wins.cache_dir == "b");

    const RunConfig flag_wins = load_config({{"k", "2"}, {"cache_dir", "a"}},
                                            {{"cache_dir", "b"}},
                                            {{"k", "0.5"}, {"cache_dir", "c"}});
    CHECK(flag_wins.k == 0.5);
    CHECK(flag_wins.cache_dir == "c");

    CHECK_THROWS_AS(load_config({{"quark", "3"}}, {}, {}), DomainError);
    CHECK_THROWS_AS(load_config({{"k", "fast"}}, {}, {}), DomainError);
}

TEST_CASE("parse_config_file skips comments and rejects malformed lines") {
    TempDir tmp;
    const std::string good = write_file(tmp.path / "good.conf",
                                        "# comment\n"
                                        "k = 1.5\n"
                                        "\n"
                                        "  t_max=5000  \n"
                                        "mode =GRH\n");
    const auto kv = parse_config_file(good);
    CHECK(kv.at("k") == "1.5");
    CHECK(kv.at("t_max") == "5000");
    CHECK(kv.at("mode") == "GRH");
    CHECK(kv.size() == 3);

    const std::string bad = write_file(tmp.path / "bad.conf", "k = 1\nnonsense line\n");
    CHECK_THROWS_AS(parse_config_file(bad), DomainError);
    CHECK_THROWS_AS(parse_config_file((tmp.path / "missing.conf").string()), DomainError);
}

TEST_CASE("cache round-trips exact bits across instances") {
    TempDir tmp;
    const Complex s(0.5, 1.25);
    const Complex val(-0.12345678901234567, 3.9876543210987654e-5);
    {
        LValueCache cache(tmp.path.string(), 0xabcdef12u);
        CHECK(cache.enabled());
        CHECK_FALSE(cache.lookup(5, 1, s).has_value());
        cache.store(5, 1, s, val);
        const auto hit = cache.lookup(5, 1, s);
        REQUIRE(hit.has_value());
        CHECK(hit->real() == val.real());
        CHECK(hit->imag() == val.imag());
        cache.flush();
    }
    CHECK(fs::exists(tmp.path / "L5.cache"));
    {
        LValueCache reopened(tmp.path.string(), 0xabcdef12u);
        const auto hit = reopened.lookup(5, 1, s);
        REQUIRE(hit.has_value());
        CHECK(hit->real() == val.real());
        CHECK(hit->imag() == val.imag());
        CHECK_FALSE(reopened.lookup(5, 2, s).has_value());
        CHECK_FALSE(reopened.lookup(5, 1, Complex(0.5, 1.26)).has_value());
        CHECK_FALSE(reopened.lookup(7, 1, s).has_value());
    }
}

TEST_CASE("cache rejects foreign fingerprints and corrupted files") {
    TempDir tmp;
    const Complex s(0.5, 0.0);
    {
        LValueCache cache(tmp.path.string(), 1);
        cache.store(7, 2, s, Complex(1.5, -2.5));
        cache.flush();
    }
    {
        LValueCache other(tmp.path.string(), 2);
        CHECK_FALSE(other.lookup(7, 2, s).has_value());
    }
    {
        LValueCache original(tmp.path.string(), 1);
        CHECK(original.lookup(7, 2, s).has_value());
    }
    // garble the payload: parse failure must read as a miss, not a throw
    {
        std::ofstream out(tmp.path / "L7.cache", std::ios::trunc);
        out << "lmoment-cache 1\nfingerprint 1\nmodulus 7\nentries 1\nnot a record\n";
    }
    {
        LValueCache garbled(tmp.path.string(), 1);
        CHECK_FALSE(garbled.lookup(7, 2, s).has_value());
        // and the rebuilt store still works
        garbled.store(7, 2, s, Complex(4.0, 0.25));
        garbled.flush();
    }
    {
        LValueCache rebuilt(tmp.path.string(), 1);
        const auto hit = rebuilt.lookup(7, 2, s);
        REQUIRE(hit.has_value());
        CHECK(hit->real() == 4.0);
    }
}

TEST_CASE("disabled cache is inert") {
    LValueCache cache("", 7);
    CHECK_FALSE(cache.enabled());
    cache.store(5, 1, Complex(0.5, 0.0), Complex(1.0, 0.0));
    CHECK_FALSE(cache.lookup(5, 1, Complex(0.5, 0.0)).has_value());
    CHECK_NOTHROW(cache.flush());
}

TEST_CASE("parallel_for covers every index exactly once") {
    for (const int workers : {1, 4}) {
        std::vector<std::atomic<int>> hits(257);
        for (auto& h : hits) h = 0;
        parallel_for(hits.size(), workers, [&](std::size_t i) { ++hits[i]; });
        for (const auto& h : hits) CHECK(h == 1);
    }
    CHECK_NOTHROW(parallel_for(0, 4, [](std::size_t) { throw std::runtime_error("unreached"); }));
}

TEST_CASE("parallel_for propagates the first exception") {
    for (const int workers : {1, 4}) {
        CHECK_THROWS_AS(parallel_for(64, workers,
                                     [](std::size_t i) {
                                         if (i == 50) throw std::runtime_error("boom");
                                     }),
                        std::runtime_error);
    }
}
