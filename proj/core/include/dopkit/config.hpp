#ifndef DOPKIT_CONFIG_HPP
#define DOPKIT_CONFIG_HPP

#include "dopkit/nodes_weights.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dopkit {

// Exact rational in lowest terms, den > 0.
struct Rational {
    long long num = 1;
    long long den = 2;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

// Accepts "p/q" or a bare integer "p".  Anything float-like is rejected so a
// config cannot silently truncate c.
Rational parse_rational(const std::string& text);

struct RunConfig {
    WeightSpec weight;
    NodeDensity density = NodeDensity::uniform(0.0, 1.0);
    std::vector<int> N_values{100};
    Rational c{1, 2};
    int grid_size = 2000;
    int precision_bits = 0;        // 0: start at 128 bits and escalate on failure
    std::uint64_t seed = 1;
    int samples = 1000;
    std::string output_path;       // empty: stdout
    std::string format = "csv";    // "csv" or "json"

    // k = c*N, config_error unless it is an integer in [1, N-1].
    int k_of(int N) const;
    void validate() const;
};

// Parses a JSON config document.  Malformed JSON raises config_error with a
// line:column diagnostic; unknown keys raise config_error naming the key.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

// Serialized form of the resolved config, embedded in every output file.
std::string config_summary(const RunConfig& cfg);

// DOPKIT_PRECISION_BITS override; 0 when unset.
int env_precision_bits();

} // namespace dopkit

#endif
