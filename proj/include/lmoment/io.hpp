#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "lmoment/lfun.hpp"

namespace lmoment {

/// Decimal form with 17 significant digits (round-trips IEEE doubles).
std::string format_double(double v);

/// Resolved run configuration for the command-line front end.
struct RunConfig {
    double k = 1.0;
    int v = 1;
    std::string mode = "GRH";  // GRH | unconditional
    std::optional<double> delta_override;
    double quadrature_tol = 1e-8;
    double identity_tol = 1e-6;
    double t_max = 200000.0;
    std::string cache_dir;              // empty disables the cache
    std::string output_format = "csv";  // csv | json
    int parallelism = 0;                // resolved to >= 1 by load_config

    void validate() const;
};

/// Layered resolution: defaults, then config-file keys, then environment
/// overrides, then command-line flags.  Later layers win key by key.
RunConfig load_config(const std::map<std::string, std::string>& file_kv,
                      const std::map<std::string, std::string>& env_kv,
                      const std::map<std::string, std::string>& flag_kv);

/// key=value lines; blank lines and lines starting with '#' are skipped.
std::map<std::string, std::string> parse_config_file(const std::string& path);

/// Reads LMOMENT_CACHE_DIR and LMOMENT_PARALLELISM.
std::map<std::string, std::string> env_overrides();

/// On-disk store of L(s, χ) values, one file per modulus.  Each file carries
/// a header with the evaluation-context fingerprint; a mismatched or
/// unparsable file is discarded and rebuilt.  Lookups return the stored bits
/// exactly (values are serialized as hex floats).
class LValueCache {
public:
    LValueCache(std::string dir, std::uint64_t fingerprint);

    bool enabled() const { return !dir_.empty(); }

    std::optional<Complex> lookup(std::int64_t q, std::size_t char_index, Complex s);
    void store(std::int64_t q, std::size_t char_index, Complex s, Complex value);

    /// Writes every modulus with new entries, atomically (temp file + rename).
    void flush();

private:
    using Key = std::tuple<std::size_t, double, double>;
    struct Entry {
        Complex value;
        std::int64_t created_at = 0;
    };
    struct ModulusStore {
        std::map<Key, Entry> entries;
        bool loaded = false;
        bool dirty = false;
    };

    ModulusStore& modulus_store(std::int64_t q);
    std::string file_for(std::int64_t q) const;

    std::string dir_;
    std::uint64_t fingerprint_ = 0;
    std::map<std::int64_t, ModulusStore> stores_;
    std::mutex mutex_;
};

/// Runs fn(0..n-1) on up to `workers` threads (inline when workers <= 1 or
/// n <= 1).  All iterations finish before return; the first exception thrown
/// by any iteration is rethrown.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace lmoment
