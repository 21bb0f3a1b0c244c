#include "dopkit/config.hpp"

#include "dopkit/errors.hpp"
#include "dopkit/real.hpp"

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace dopkit {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail_at_offset(const std::string& text, std::size_t byte,
                                 const std::string& what) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    throw config_error("config parse error at line " + std::to_string(line) +
                       ", column " + std::to_string(col) + ": " + what);
}

void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw config_error("unknown key \"" + it.key() + "\" in " + where);
}

double number_field(const json& obj, const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number())
        throw config_error("\"" + key + "\" must be a number");
    return obj[key].get<double>();
}

WeightSpec parse_weight(const json& w) {
    if (!w.is_object()) throw config_error("\"weight\" must be an object");
    check_keys(w, "weight", {"kind", "p", "alpha", "beta"});
    const std::string kind = w.value("kind", "krawtchouk");
    if (kind == "krawtchouk")
        return WeightSpec::krawtchouk(number_field(w, "p", 0.5));
    if (kind == "hahn")
        return WeightSpec::hahn(number_field(w, "alpha", 1.0),
                                number_field(w, "beta", 1.0));
    if (kind == "associated_hahn")
        return WeightSpec::associated_hahn(number_field(w, "alpha", 1.0),
                                           number_field(w, "beta", 1.0));
    throw config_error("unknown weight kind \"" + kind + "\"");
}

NodeDensity parse_density(const json& d) {
    if (!d.is_object()) throw config_error("\"density\" must be an object");
    check_keys(d, "density", {"kind", "a", "b", "coeffs"});
    const std::string kind = d.value("kind", "uniform");
    const double a = number_field(d, "a", 0.0);
    const double b = number_field(d, "b", 1.0);
    if (kind == "uniform") return NodeDensity::uniform(a, b);
    if (kind == "polynomial") {
        if (!d.contains("coeffs") || !d["coeffs"].is_array())
            throw config_error("polynomial density needs a \"coeffs\" array");
        std::vector<double> coeffs;
        for (const auto& c : d["coeffs"]) {
            if (!c.is_number()) throw config_error("\"coeffs\" entries must be numbers");
            coeffs.push_back(c.get<double>());
        }
        return NodeDensity::polynomial(a, b, std::move(coeffs));
    }
    throw config_error("unknown density kind \"" + kind + "\"");
}

} // namespace

Rational parse_rational(const std::string& text) {
    const auto bad = [&]() -> config_error {
        return config_error("\"" + text + "\" is not a rational; write it as \"p/q\"");
    };
    if (text.find_first_of(".eE") != std::string::npos) throw bad();
    const auto slash = text.find('/');
    long long num = 0, den = 1;
    try {
        std::size_t used = 0;
        num = std::stoll(text.substr(0, slash), &used);
        if (used != (slash == std::string::npos ? text.size() : slash)) throw bad();
        if (slash != std::string::npos) {
            den = std::stoll(text.substr(slash + 1), &used);
            if (used != text.size() - slash - 1) throw bad();
        }
    } catch (const std::logic_error&) {
        throw bad();
    }
    if (den == 0) throw config_error("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return Rational{num, den};
}

int RunConfig::k_of(int N) const {
    const long long prod = c.num * static_cast<long long>(N);
    if (prod % c.den != 0)
        throw config_error("c = " + c.str() + " does not make k = c*N an integer at N = " +
                           std::to_string(N));
    const long long k = prod / c.den;
    if (k < 1 || k > N - 1)
        throw config_error("k = " + std::to_string(k) + " outside [1, N-1] at N = " +
                           std::to_string(N));
    return static_cast<int>(k);
}

void RunConfig::validate() const {
    weight.validate();
    density.validate();
    if (N_values.empty()) throw config_error("\"N\" list is empty");
    for (int N : N_values) {
        if (N < 2) throw config_error("N must be at least 2");
        k_of(N);
    }
    if (!(c.num > 0 && c.num < c.den))
        throw config_error("c = " + c.str() + " must lie strictly between 0 and 1");
    if (grid_size < 4) throw config_error("grid_size must be at least 4");
    if (samples < 1) throw config_error("samples must be positive");
    if (precision_bits != 0) {
        try {
            normalize_precision_bits(precision_bits);
        } catch (const std::invalid_argument& e) {
            throw config_error(std::string("precision_bits: ") + e.what());
        }
    }
    if (format != "csv" && format != "json")
        throw config_error("format must be \"csv\" or \"json\"");
}

RunConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail_at_offset(json_text, e.byte > 0 ? e.byte - 1 : 0, e.what());
    }
    if (!doc.is_object()) throw config_error("config root must be a JSON object");
    check_keys(doc, "config",
               {"weight", "density", "N", "c", "grid_size", "precision_bits", "seed",
                "samples", "output", "format"});

    RunConfig cfg;
    if (doc.contains("weight")) cfg.weight = parse_weight(doc["weight"]);
    if (doc.contains("density")) cfg.density = parse_density(doc["density"]);
    if (doc.contains("N")) {
        cfg.N_values.clear();
        if (doc["N"].is_number_integer()) {
            cfg.N_values.push_back(doc["N"].get<int>());
        } else if (doc["N"].is_array()) {
            for (const auto& n : doc["N"]) {
                if (!n.is_number_integer())
                    throw config_error("\"N\" entries must be integers");
                cfg.N_values.push_back(n.get<int>());
            }
        } else {
            throw config_error("\"N\" must be an integer or an array of integers");
        }
    }
    if (doc.contains("c")) {
        if (!doc["c"].is_string())
            throw config_error("\"c\" must be a string like \"1/2\", never a float");
        cfg.c = parse_rational(doc["c"].get<std::string>());
    }
    if (doc.contains("grid_size")) cfg.grid_size = doc["grid_size"].get<int>();
    if (doc.contains("precision_bits")) cfg.precision_bits = doc["precision_bits"].get<int>();
    if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("samples")) cfg.samples = doc["samples"].get<int>();
    if (doc.contains("output")) cfg.output_path = doc["output"].get<std::string>();
    if (doc.contains("format")) cfg.format = doc["format"].get<std::string>();
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string config_summary(const RunConfig& cfg) {
    json j;
    j["weight"] = cfg.weight.name();
    switch (cfg.weight.kind) {
        case WeightSpec::Kind::Krawtchouk:
            j["p"] = cfg.weight.p;
            break;
        case WeightSpec::Kind::Hahn:
        case WeightSpec::Kind::AssociatedHahn:
            j["alpha"] = cfg.weight.alpha;
            j["beta"] = cfg.weight.beta;
            break;
        case WeightSpec::Kind::GenericField:
            break;
    }
    j["interval"] = {cfg.density.a(), cfg.density.b()};
    j["N"] = cfg.N_values;
    j["c"] = cfg.c.str();
    j["grid_size"] = cfg.grid_size;
    j["precision_bits"] = cfg.precision_bits;
    j["seed"] = cfg.seed;
    j["samples"] = cfg.samples;
    j["format"] = cfg.format;
    return j.dump();
}

int env_precision_bits() {
    const char* env = std::getenv("DOPKIT_PRECISION_BITS");
    if (!env || !*env) return 0;
    char* end = nullptr;
    const long bits = std::strtol(env, &end, 10);
    if (!end || *end != '\0' || bits < 0)
        throw config_error("DOPKIT_PRECISION_BITS must be a non-negative integer");
    if (bits != 0) {
        try {
            normalize_precision_bits(static_cast<int>(bits));
        } catch (const std::invalid_argument& e) {
            throw config_error(std::string("DOPKIT_PRECISION_BITS: ") + e.what());
        }
    }
    return static_cast<int>(bits);
}

} // namespace dopkit
