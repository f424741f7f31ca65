#include "lmoment/io.hpp"

#include <atomic>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "lmoment/errors.hpp"

namespace lmoment {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw DomainError("invalid numeric value for '" + key + "': " + text);
    }
    return v;
}

int parse_int(const std::string& key, const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    long v = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0') {
        throw DomainError("invalid integer value for '" + key + "': " + text);
    }
    return static_cast<int>(v);
}

void apply_layer(RunConfig& cfg, const std::map<std::string, std::string>& kv) {
    for (const auto& [key, raw] : kv) {
        const std::string value = trim(raw);
        if (key == "k") {
            cfg.k = parse_double(key, value);
        } else if (key == "v") {
            cfg.v = parse_int(key, value);
        } else if (key == "mode") {
            cfg.mode = value;
        } else if (key == "delta") {
            cfg.delta_override = parse_double(key, value);
        } else if (key == "quadrature_tol") {
            cfg.quadrature_tol = parse_double(key, value);
        } else if (key == "identity_tol") {
            cfg.identity_tol = parse_double(key, value);
        } else if (key == "t_max") {
            cfg.t_max = parse_double(key, value);
        } else if (key == "cache_dir") {
            cfg.cache_dir = value;
        } else if (key == "format") {
            cfg.output_format = value;
        } else if (key == "parallelism") {
            cfg.parallelism = parse_int(key, value);
        } else {
            throw DomainError("unknown configuration key: " + key);
        }
    }
}

bool parse_hex_double(const std::string& token, double* out) {
    const char* begin = token.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') return false;
    *out = v;
    return true;
}

std::string hex_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%la", v);
    return buf;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void RunConfig::validate() const {
    if (mode != "GRH" && mode != "unconditional") {
        throw DomainError("mode must be GRH or unconditional, got: " + mode);
    }
    if (!(k > 0.0)) throw DomainError("k must be positive");
    if (v < 1) throw DomainError("v must be a positive integer");
    if (mode == "unconditional" && std::abs(k * static_cast<double>(v) - 1.0) > 1e-12) {
        throw DomainError("unconditional mode requires k*v = 1 with integer v");
    }
    if (delta_override && !(*delta_override > 0.0)) {
        throw DomainError("delta override must be positive");
    }
    if (!(quadrature_tol > 0.0) || !(identity_tol > 0.0)) {
        throw DomainError("tolerances must be positive");
    }
    if (!(t_max > 0.0)) throw DomainError("t_max must be positive");
    if (output_format != "csv" && output_format != "json") {
        throw DomainError("format must be csv or json, got: " + output_format);
    }
    if (parallelism < 1) throw DomainError("parallelism must be at least 1");
}

RunConfig load_config(const std::map<std::string, std::string>& file_kv,
                      const std::map<std::string, std::string>& env_kv,
                      const std::map<std::string, std::string>& flag_kv) {
    RunConfig cfg;
    apply_layer(cfg, file_kv);
    apply_layer(cfg, env_kv);
    apply_layer(cfg, flag_kv);
    if (cfg.parallelism == 0) {
        unsigned hw = std::thread::hardware_concurrency();
        cfg.parallelism = hw > 0 ? static_cast<int>(hw) : 1;
    }
    cfg.validate();
    return cfg;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw DomainError("config file " + path + ": line " + std::to_string(lineno) +
                              " is not key=value");
        }
        kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return kv;
}

std::map<std::string, std::string> env_overrides() {
    std::map<std::string, std::string> kv;
    if (const char* d = std::getenv("LMOMENT_CACHE_DIR")) kv["cache_dir"] = d;
    if (const char* p = std::getenv("LMOMENT_PARALLELISM")) kv["parallelism"] = p;
    return kv;
}

LValueCache::LValueCache(std::string dir, std::uint64_t fingerprint)
    : dir_(std::move(dir)), fingerprint_(fingerprint) {}

std::string LValueCache::file_for(std::int64_t q) const {
    return dir_ + "/L" + std::to_string(q) + ".cache";
}

LValueCache::ModulusStore& LValueCache::modulus_store(std::int64_t q) {
    ModulusStore& store = stores_[q];
    if (store.loaded) return store;
    store.loaded = true;
    store.entries.clear();

    std::ifstream in(file_for(q));
    if (!in) return store;

    auto reject = [&store]() -> ModulusStore& {
        store.entries.clear();
        return store;
    };

    std::string word;
    int version = 0;
    if (!(in >> word >> version) || word != "lmoment-cache" || version != 1) return reject();
    std::uint64_t fp = 0;
    if (!(in >> word >> std::hex >> fp >> std::dec) || word != "fingerprint") return reject();
    if (fp != fingerprint_) return reject();
    std::int64_t modulus = 0;
    if (!(in >> word >> modulus) || word != "modulus" || modulus != q) return reject();
    std::size_t count = 0;
    if (!(in >> word >> count) || word != "entries") return reject();

    for (std::size_t i = 0; i < count; ++i) {
        std::size_t index = 0;
        std::string sre, sim, vre, vim;
        std::int64_t stamp = 0;
        if (!(in >> index >> sre >> sim >> vre >> vim >> stamp)) return reject();
        double re_s = 0, im_s = 0, re_v = 0, im_v = 0;
        if (!parse_hex_double(sre, &re_s) || !parse_hex_double(sim, &im_s) ||
            !parse_hex_double(vre, &re_v) || !parse_hex_double(vim, &im_v)) {
            return reject();
        }
        store.entries[Key{index, re_s, im_s}] = Entry{Complex(re_v, im_v), stamp};
    }
    return store;
}

std::optional<Complex> LValueCache::lookup(std::int64_t q, std::size_t char_index, Complex s) {
    if (!enabled()) return std::nullopt;
    std::lock_guard<std::mutex> lock(mutex_);
    ModulusStore& store = modulus_store(q);
    auto it = store.entries.find(Key{char_index, s.real(), s.imag()});
    if (it == store.entries.end()) return std::nullopt;
    return it->second.value;
}

void LValueCache::store(std::int64_t q, std::size_t char_index, Complex s, Complex value) {
    if (!enabled()) return;
    std::lock_guard<std::mutex> lock(mutex_);
    ModulusStore& ms = modulus_store(q);
    Entry& e = ms.entries[Key{char_index, s.real(), s.imag()}];
    e.value = value;
    e.created_at = static_cast<std::int64_t>(std::time(nullptr));
    ms.dirty = true;
}

void LValueCache::flush() {
    if (!enabled()) return;
    std::lock_guard<std::mutex> lock(mutex_);
    std::filesystem::create_directories(dir_);
    for (auto& [q, store] : stores_) {
        if (!store.dirty) continue;
        const std::string path = file_for(q);
        const std::string tmp = path + ".tmp";
        {
            std::ofstream out(tmp, std::ios::trunc);
            if (!out) throw DomainError("cannot write cache file: " + tmp);
            out << "lmoment-cache 1\n";
            out << "fingerprint " << std::hex << fingerprint_ << std::dec << "\n";
            out << "modulus " << q << "\n";
            out << "entries " << store.entries.size() << "\n";
            for (const auto& [key, entry] : store.entries) {
                out << std::get<0>(key) << ' ' << hex_double(std::get<1>(key)) << ' '
                    << hex_double(std::get<2>(key)) << ' ' << hex_double(entry.value.real())
                    << ' ' << hex_double(entry.value.imag()) << ' ' << entry.created_at << "\n";
            }
            if (!out) throw DomainError("cannot write cache file: " + tmp);
        }
        std::filesystem::rename(tmp, path);
        store.dirty = false;
    }
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t thread_count = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    threads.reserve(thread_count);
    for (std::size_t t = 0; t < thread_count; ++t) {
        threads.emplace_back([&]() {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : threads) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace lmoment
