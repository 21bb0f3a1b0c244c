// Command-line front end: every subcommand resolves a RunConfig from an
// optional JSON config file plus flag overrides, runs one module, and writes
// CSV or JSON atomically.  Numeric output is deterministic for a fixed
// config and seed; no timestamps are emitted anywhere.

#include "dopkit/accept.hpp"
#include "dopkit/config.hpp"
#include "dopkit/ensembles.hpp"
#include "dopkit/errors.hpp"
#include "dopkit/harness.hpp"
#include "dopkit/kernels.hpp"
#include "dopkit/tiling.hpp"

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

using dopkit::config_error;
using json = nlohmann::json;

std::string dub(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Temp-file-plus-rename so readers never observe a partial file.
void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw config_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw config_error("failed writing " + tmp.string());
    }
    fs::rename(tmp, target);
}

// Flag holders; -1 / empty mean "not set on the command line".
struct Opts {
    std::string config_path;
    std::string weight_kind, density_kind;
    double p = -1, alpha = -1, beta = -1;
    double a = std::nan(""), b = std::nan("");
    std::vector<double> coeffs;
    std::vector<int> N_list;
    std::string c_text;
    int grid = -1, bits = -1, samples = -1, kmax = -1, k = -1;
    long long seed = -1;
    std::string out, format;
};

void add_common_flags(CLI::App* cmd, Opts& o) {
    cmd->add_option("--config", o.config_path, "JSON config file; flags override its values");
    cmd->add_option("--out", o.out, "output file (default stdout)");
    cmd->add_option("--format", o.format, "csv or json");
}

void add_weight_flags(CLI::App* cmd, Opts& o) {
    cmd->add_option("--weight", o.weight_kind, "krawtchouk, hahn, or associated_hahn");
    cmd->add_option("--p", o.p, "Krawtchouk success probability");
    cmd->add_option("--alpha", o.alpha, "Hahn alpha");
    cmd->add_option("--beta", o.beta, "Hahn beta");
}

void add_density_flags(CLI::App* cmd, Opts& o) {
    cmd->add_option("--density", o.density_kind, "uniform or polynomial");
    cmd->add_option("--a", o.a, "left endpoint");
    cmd->add_option("--b", o.b, "right endpoint");
    cmd->add_option("--coeffs", o.coeffs, "polynomial density coefficients");
}

dopkit::RunConfig resolve(const Opts& o) {
    dopkit::RunConfig cfg;
    if (!o.config_path.empty()) cfg = dopkit::load_config(o.config_path);

    const double a = std::isnan(o.a) ? cfg.density.a() : o.a;
    const double b = std::isnan(o.b) ? cfg.density.b() : o.b;
    if (!o.density_kind.empty() || !std::isnan(o.a) || !std::isnan(o.b) || !o.coeffs.empty()) {
        std::string kind = o.density_kind.empty() ? "uniform" : o.density_kind;
        if (kind == "uniform")
            cfg.density = dopkit::NodeDensity::uniform(a, b);
        else if (kind == "polynomial")
            cfg.density = dopkit::NodeDensity::polynomial(a, b, o.coeffs);
        else
            throw config_error("unknown density kind \"" + kind + "\"");
    }
    if (!o.weight_kind.empty() || o.p >= 0 || o.alpha >= 0 || o.beta >= 0) {
        std::string kind = o.weight_kind.empty() ? "krawtchouk" : o.weight_kind;
        if (kind == "krawtchouk")
            cfg.weight = dopkit::WeightSpec::krawtchouk(o.p >= 0 ? o.p : 0.5);
        else if (kind == "hahn")
            cfg.weight = dopkit::WeightSpec::hahn(o.alpha >= 0 ? o.alpha : 1.0,
                                                  o.beta >= 0 ? o.beta : 1.0);
        else if (kind == "associated_hahn")
            cfg.weight = dopkit::WeightSpec::associated_hahn(o.alpha >= 0 ? o.alpha : 1.0,
                                                             o.beta >= 0 ? o.beta : 1.0);
        else
            throw config_error("unknown weight kind \"" + kind + "\"");
    }
    if (!o.N_list.empty()) cfg.N_values = o.N_list;
    if (!o.c_text.empty()) cfg.c = dopkit::parse_rational(o.c_text);
    if (o.grid >= 0) cfg.grid_size = o.grid;
    if (o.samples >= 0) cfg.samples = o.samples;
    if (o.seed >= 0) cfg.seed = static_cast<std::uint64_t>(o.seed);
    if (!o.format.empty()) cfg.format = o.format;
    if (!o.out.empty()) cfg.output_path = o.out;
    if (o.bits >= 0)
        cfg.precision_bits = o.bits;
    else if (o.config_path.empty() || cfg.precision_bits == 0)
        cfg.precision_bits = dopkit::env_precision_bits();
    cfg.validate();
    return cfg;
}

// Runs a basis-dependent computation.  Auto precision escalates through the
// canonical rungs whenever the computation itself reports precision loss, so
// zero refinement and kernel cross-checks recover the same way the builder
// does.  A forced precision gets exactly one attempt at the requested rung.
template <class Fn>
auto with_basis(const dopkit::RunConfig& cfg, int N, int kmax, Fn&& fn) {
    auto ns = std::make_shared<const dopkit::NodeSet>(dopkit::build_nodes(cfg.density, N));
    auto lw = dopkit::log_weight(cfg.weight, ns);
    if (cfg.precision_bits != 0) return fn(dopkit::build_basis(lw, kmax, cfg.precision_bits));
    int bits = 128;
    for (;;) {
        try {
            return fn(dopkit::build_basis(lw, kmax, bits));
        } catch (const dopkit::precision_error&) {
            if (bits >= 1024) throw;
            bits *= 2;
        }
    }
}

std::string csv_head(const dopkit::RunConfig& cfg, const std::string& columns) {
    return "# " + dopkit::config_summary(cfg) + "\n" + columns + "\n";
}

json segments_json(const dopkit::IntervalClassification& cls) {
    json segs = json::array();
    for (const auto& s : cls.segments)
        segs.push_back({{"kind", dopkit::to_string(s.kind)},
                        {"left", s.left},
                        {"right", s.right}});
    return segs;
}

// --- subcommands ------------------------------------------------------------

int run_nodes(const Opts& o) {
    auto cfg = resolve(o);
    const int N = cfg.N_values.front();
    dopkit::NodeSet ns = dopkit::build_nodes(cfg.density, N);
    if (cfg.format == "json") {
        json j;
        j["config"] = json::parse(dopkit::config_summary(cfg));
        j["quantization_residual"] = ns.quantization_residual();
        j["nodes"] = ns.nodes;
        write_output(cfg.output_path, j.dump(2) + "\n");
    } else {
        std::ostringstream outs;
        outs << csv_head(cfg, "j,x");
        for (int j = 0; j < N; ++j) outs << j << "," << dub(ns.nodes[j]) << "\n";
        write_output(cfg.output_path, outs.str());
    }
    return 0;
}

int run_poly(const Opts& o) {
    auto cfg = resolve(o);
    const int N = cfg.N_values.front();
    const int kmax = o.kmax >= 0 ? o.kmax : N - 1;
    return with_basis(cfg, N, kmax, [&](const dopkit::OrthoBasis& basis) -> int {
    if (cfg.format == "json") {
        json j;
        j["config"] = json::parse(dopkit::config_summary(cfg));
        j["resolved_precision_bits"] = basis.precision_bits;
        j["orthonormality_residual"] = basis.orthonormality_residual();
        j["alpha"] = basis.alpha;
        j["beta"] = basis.beta;
        j["log_norm"] = basis.lognorm;
        write_output(cfg.output_path, j.dump(2) + "\n");
    } else {
        std::ostringstream outs;
        outs << csv_head(cfg, "k,alpha,beta,log_norm");
        for (int k = 0; k <= kmax; ++k)
            outs << k << "," << dub(basis.alpha[k]) << "," << dub(basis.beta[k]) << ","
                 << dub(basis.lognorm[k]) << "\n";
        write_output(cfg.output_path, outs.str());
    }
    return 0;
    });
}

int run_zeros(const Opts& o) {
    auto cfg = resolve(o);
    const int N = cfg.N_values.front();
    const int k = o.k >= 0 ? o.k : cfg.k_of(N);
    return with_basis(cfg, N, k, [&](const dopkit::OrthoBasis& basis) -> int {
    dopkit::ZeroSet zs = dopkit::zeros(basis, k);
    if (cfg.format == "json") {
        json j;
        j["config"] = json::parse(dopkit::config_summary(cfg));
        j["k"] = k;
        j["zeros"] = zs.zeros;
        j["nearest_node"] = zs.nearest;
        j["offset"] = zs.offset;
        write_output(cfg.output_path, j.dump(2) + "\n");
    } else {
        std::ostringstream outs;
        outs << csv_head(cfg, "i,zero,nearest_node,offset");
        for (int i = 0; i < k; ++i)
            outs << i << "," << dub(zs.zeros[i]) << "," << zs.nearest[i] << ","
                 << dub(zs.offset[i]) << "\n";
        write_output(cfg.output_path, outs.str());
    }
    return 0;
    });
}

int run_eqm(const Opts& o) {
    auto cfg = resolve(o);
    auto eqm = dopkit::solve(dopkit::field(dopkit::weight_potential(cfg.weight), cfg.density),
                             cfg.c.value(), cfg.grid_size);
    auto cls = dopkit::classify_intervals(eqm);
    if (cfg.format == "json") {
        json j;
        j["config"] = json::parse(dopkit::config_summary(cfg));
        j["ell"] = eqm.ell;
        j["kkt_residual"] = eqm.kkt_residual;
        j["iterations"] = eqm.iterations;
        j["converged"] = eqm.converged;
        j["segments"] = segments_json(cls);
        j["x"] = eqm.grid;
        j["psi"] = eqm.psi;
        j["grad"] = eqm.grad;
        write_output(cfg.output_path, j.dump(2) + "\n");
    } else {
        std::ostringstream outs;
        outs << csv_head(cfg, "i,x,psi,grad");
        for (std::size_t i = 0; i < eqm.grid.size(); ++i)
            outs << i << "," << dub(eqm.grid[i]) << "," << dub(eqm.psi[i]) << ","
                 << dub(eqm.grad[i]) << "\n";
        write_output(cfg.output_path, outs.str());
    }
    return 0;
}

int run_kernel(const Opts& o) {
    auto cfg = resolve(o);
    const int N = cfg.N_values.front();
    const int k = o.k >= 0 ? o.k : cfg.k_of(N);
    return with_basis(cfg, N, k, [&](const dopkit::OrthoBasis& basis) -> int {
    dopkit::KernelMatrix km = dopkit::cd_kernel(basis, k);
    if (cfg.format == "json") {
        json j;
        j["config"] = json::parse(dopkit::config_summary(cfg));
        j["k"] = k;
        j["trace_error"] = km.trace_error();
        j["projection_residual"] = km.projection_residual();
        json diag = json::array();
        for (int i = 0; i < N; ++i) diag.push_back(km.K(i, i));
        j["diag"] = diag;
        write_output(cfg.output_path, j.dump(2) + "\n");
    } else {
        std::ostringstream outs;
        outs << csv_head(cfg, "i,x,K_ii");
        for (int i = 0; i < N; ++i)
            outs << i << "," << dub(km.nodes[i]) << "," << dub(km.K(i, i)) << "\n";
        write_output(cfg.output_path, outs.str());
    }
    return 0;
    });
}

int run_sample(const Opts& o) {
    auto cfg = resolve(o);
    const int N = cfg.N_values.front();
    const int k = o.k >= 0 ? o.k : cfg.k_of(N);
    return with_basis(cfg, N, k, [&](const dopkit::OrthoBasis& basis) -> int {
    dopkit::KernelMatrix km = dopkit::cd_kernel(basis, k);
    auto batch = dopkit::sample_many(km, cfg.samples, cfg.seed);
    if (cfg.format == "json") {
        json j;
        j["config"] = json::parse(dopkit::config_summary(cfg));
        j["k"] = k;
        json cfgs = json::array();
        for (const auto& s : batch) cfgs.push_back(s.indices);
        j["configurations"] = cfgs;
        write_output(cfg.output_path, j.dump(2) + "\n");
    } else {
        std::ostringstream outs;
        outs << csv_head(cfg, "sample,slot,node,x");
        for (std::size_t s = 0; s < batch.size(); ++s)
            for (std::size_t t = 0; t < batch[s].indices.size(); ++t)
                outs << s << "," << t << "," << batch[s].indices[t] << ","
                     << dub(km.nodes[batch[s].indices[t]]) << "\n";
        write_output(cfg.output_path, outs.str());
    }
    return 0;
    });
}

int run_hexagon(long a, long b, long c, int m, const Opts& o) {
    dopkit::Hexagon hex{a, b, c};
    hex.validate();
    dopkit::ColumnEnsemble col = dopkit::column_ensemble(hex, m);
    const int bits = o.bits > 0 ? o.bits : 256;
    std::vector<double> hole = dopkit::one_point_profile(col, bits);
    std::vector<double> part = dopkit::particle_profile(col, bits);
    const std::string fmt_kind = o.format.empty() ? "csv" : o.format;
    std::ostringstream count;
    count << dopkit::macmahon(hex);
    if (fmt_kind == "json") {
        json j;
        j["hexagon"] = {{"a", a}, {"b", b}, {"c", c}};
        j["m"] = m;
        j["tilings"] = count.str();
        j["u"] = dopkit::column_u(hex, m);
        json cells = json::array();
        for (std::size_t h = 0; h < hole.size(); ++h)
            cells.push_back({{"h", h},
                             {"v", dopkit::position_v(hex, m, static_cast<double>(h))},
                             {"hole", hole[h]},
                             {"particle", part[h]}});
        j["cells"] = cells;
        write_output(o.out, j.dump(2) + "\n");
    } else if (fmt_kind == "csv") {
        std::ostringstream outs;
        outs << "# {\"a\":" << a << ",\"b\":" << b << ",\"c\":" << c << ",\"m\":" << m
             << ",\"tilings\":\"" << count.str() << "\"}\n";
        outs << "h,v,hole,particle\n";
        for (std::size_t h = 0; h < hole.size(); ++h)
            outs << h << "," << dub(dopkit::position_v(hex, m, static_cast<double>(h))) << ","
                 << dub(hole[h]) << "," << dub(part[h]) << "\n";
        write_output(o.out, outs.str());
    } else {
        throw config_error("format must be \"csv\" or \"json\"");
    }
    return 0;
}

int run_verify(const Opts& o) {
    auto cfg = resolve(o);
    if (cfg.format == "csv")
        throw config_error("verify emits a structured report; use --format json");
    auto eqm = dopkit::solve(dopkit::field(dopkit::weight_potential(cfg.weight), cfg.density),
                             cfg.c.value(), cfg.grid_size);
    auto cls = dopkit::classify_intervals(eqm);
    json j;
    j["config"] = json::parse(dopkit::config_summary(cfg));
    j["ell"] = eqm.ell;
    j["kkt_residual"] = eqm.kkt_residual;
    j["segments"] = segments_json(cls);
    json runs = json::array();
    for (int N : cfg.N_values) {
        const int k = cfg.k_of(N);
        runs.push_back(with_basis(cfg, N, k, [&](const dopkit::OrthoBasis& basis) -> json {
        json run;
        run["N"] = N;
        run["k"] = k;
        run["precision_bits"] = basis.precision_bits;
        run["orthonormality_residual"] = basis.orthonormality_residual();
        run["zero_cdf_distance"] = dopkit::zero_cdf_distance(dopkit::zeros(basis, k), eqm);

        const dopkit::Segment* widest_band = nullptr;
        for (const auto& s : cls.segments)
            if (s.kind == dopkit::SegmentKind::Band &&
                (!widest_band || s.right - s.left > widest_band->right - widest_band->left))
                widest_band = &s;
        if (widest_band) {
            auto rep = dopkit::band_check(basis, k, eqm, *widest_band, cfg.samples);
            run["band"] = {{"left", rep.region.left},
                           {"right", rep.region.right},
                           {"max_abs", rep.max_abs},
                           {"mean_abs", rep.mean_abs},
                           {"sign_changes", rep.sign_changes},
                           {"expected_oscillations", rep.expected_oscillations}};
        }
        for (const auto& s : cls.segments) {
            if (s.kind != dopkit::SegmentKind::Saturated) continue;
            auto rep = dopkit::saturated_check(basis, k, eqm, s);
            run["saturated"] = {{"left", rep.region.left},
                                {"right", rep.region.right},
                                {"interior_nodes", rep.interior_nodes},
                                {"max_cos_at_node", rep.max_cos_at_node},
                                {"unmatched_nodes", rep.unmatched_nodes},
                                {"max_zero_distance", rep.max_zero_distance},
                                {"envelope_spread", rep.envelope_spread}};
            break;
        }
        for (bool right : {false, true}) {
            const auto& s = right ? cls.segments.back() : cls.segments.front();
            if (s.kind != dopkit::SegmentKind::Saturated) continue;
            auto rep = dopkit::hard_edge_check(basis, k, eqm, cls, right);
            run[right ? "hard_edge_right" : "hard_edge_left"] = {
                {"zeta_span", rep.zeta_span},
                {"fit_in", rep.fit_in},
                {"fit_out", rep.fit_out},
                {"edge_mismatch", rep.edge_mismatch},
                {"max_dev_in_unit", rep.max_dev_in_unit},
                {"max_dev_out_unit", rep.max_dev_out_unit},
                {"edge_zero_inward", rep.edge_zero_inward},
                {"edge_zero_offset", rep.edge_zero_offset},
                {"zeta_in", rep.zeta_in},
                {"dev_in", rep.dev_in},
                {"zeta_out", rep.zeta_out},
                {"dev_out", rep.dev_out}};
        }
        return run;
        }));
    }
    j["runs"] = runs;
    write_output(cfg.output_path, j.dump(2) + "\n");
    return 0;
}

int run_accept(const std::string& suite_name, const Opts& o) {
    dopkit::Suite suite;
    if (suite_name == "small")
        suite = dopkit::Suite::Small;
    else if (suite_name == "full")
        suite = dopkit::Suite::Full;
    else
        throw config_error("suite must be \"small\" or \"full\"");
    const std::uint64_t seed = o.seed >= 0 ? static_cast<std::uint64_t>(o.seed) : 1;
    dopkit::AcceptanceReport rep = dopkit::run_acceptance(suite, seed);
    const std::string fmt_kind = o.format.empty() ? "text" : o.format;
    if (fmt_kind == "json")
        write_output(o.out, rep.to_json() + "\n");
    else if (fmt_kind == "text")
        write_output(o.out, rep.to_text());
    else
        throw config_error("format must be \"text\" or \"json\"");
    return rep.all_passed() ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"high-precision toolkit for discrete orthogonal polynomial ensembles"};
    app.require_subcommand(1);

    Opts o;
    long hex_a = 1, hex_b = 1, hex_c = 1;
    int hex_m = 1;
    std::string suite_name = "small";
    int exit_code = 0;

    auto* nodes_cmd = app.add_subcommand("nodes", "quantized nodes of a density");
    add_density_flags(nodes_cmd, o);
    nodes_cmd->add_option("--N", o.N_list, "number of nodes");
    add_common_flags(nodes_cmd, o);
    nodes_cmd->callback([&] { exit_code = run_nodes(o); });

    auto* poly_cmd = app.add_subcommand("poly", "recurrence coefficients and norms");
    add_weight_flags(poly_cmd, o);
    add_density_flags(poly_cmd, o);
    poly_cmd->add_option("--N", o.N_list, "number of nodes");
    poly_cmd->add_option("--kmax", o.kmax, "highest degree (default N-1)");
    poly_cmd->add_option("--bits", o.bits, "working precision (0 = auto)");
    add_common_flags(poly_cmd, o);
    poly_cmd->callback([&] { exit_code = run_poly(o); });

    auto* zeros_cmd = app.add_subcommand("zeros", "polished zeros of one polynomial");
    add_weight_flags(zeros_cmd, o);
    add_density_flags(zeros_cmd, o);
    zeros_cmd->add_option("--N", o.N_list, "number of nodes");
    zeros_cmd->add_option("--k", o.k, "degree (default c*N from config)");
    zeros_cmd->add_option("--c", o.c_text, "rational c = k/N, e.g. 1/2");
    zeros_cmd->add_option("--bits", o.bits, "working precision (0 = auto)");
    add_common_flags(zeros_cmd, o);
    zeros_cmd->callback([&] { exit_code = run_zeros(o); });

    auto* eqm_cmd = app.add_subcommand("eqm", "constrained equilibrium measure");
    add_weight_flags(eqm_cmd, o);
    add_density_flags(eqm_cmd, o);
    eqm_cmd->add_option("--c", o.c_text, "rational c, e.g. 1/2");
    eqm_cmd->add_option("--grid", o.grid, "number of cells");
    add_common_flags(eqm_cmd, o);
    eqm_cmd->callback([&] { exit_code = run_eqm(o); });

    auto* kernel_cmd = app.add_subcommand("kernel", "reproducing kernel diagnostics");
    add_weight_flags(kernel_cmd, o);
    add_density_flags(kernel_cmd, o);
    kernel_cmd->add_option("--N", o.N_list, "number of nodes");
    kernel_cmd->add_option("--k", o.k, "rank (default c*N)");
    kernel_cmd->add_option("--c", o.c_text, "rational c");
    kernel_cmd->add_option("--bits", o.bits, "working precision (0 = auto)");
    add_common_flags(kernel_cmd, o);
    kernel_cmd->callback([&] { exit_code = run_kernel(o); });

    auto* sample_cmd = app.add_subcommand("sample", "draw ensemble configurations");
    add_weight_flags(sample_cmd, o);
    add_density_flags(sample_cmd, o);
    sample_cmd->add_option("--N", o.N_list, "number of nodes");
    sample_cmd->add_option("--k", o.k, "rank (default c*N)");
    sample_cmd->add_option("--c", o.c_text, "rational c");
    sample_cmd->add_option("--count", o.samples, "number of configurations");
    sample_cmd->add_option("--seed", o.seed, "RNG seed");
    sample_cmd->add_option("--bits", o.bits, "working precision (0 = auto)");
    add_common_flags(sample_cmd, o);
    sample_cmd->callback([&] { exit_code = run_sample(o); });

    auto* hex_cmd = app.add_subcommand("hexagon", "tiling counts and column profiles");
    hex_cmd->add_option("--a", hex_a, "side a")->required();
    hex_cmd->add_option("--b", hex_b, "side b")->required();
    hex_cmd->add_option("--c", hex_c, "side c")->required();
    hex_cmd->add_option("--m", hex_m, "column index, 1..a+b-1")->required();
    hex_cmd->add_option("--bits", o.bits, "working precision");
    add_common_flags(hex_cmd, o);
    hex_cmd->callback([&] { exit_code = run_hexagon(hex_a, hex_b, hex_c, hex_m, o); });

    auto* verify_cmd = app.add_subcommand("verify", "asymptotic-law reports over an N list");
    add_weight_flags(verify_cmd, o);
    add_density_flags(verify_cmd, o);
    verify_cmd->add_option("--N", o.N_list, "N values");
    verify_cmd->add_option("--c", o.c_text, "rational c");
    verify_cmd->add_option("--grid", o.grid, "equilibrium cells");
    verify_cmd->add_option("--samples", o.samples, "band sample count");
    verify_cmd->add_option("--bits", o.bits, "working precision (0 = auto)");
    add_common_flags(verify_cmd, o);
    verify_cmd->callback([&] { exit_code = run_verify(o); });

    auto* accept_cmd = app.add_subcommand("accept", "acceptance criteria runner");
    accept_cmd->add_option("--suite", suite_name, "small or full");
    accept_cmd->add_option("--seed", o.seed, "RNG seed");
    accept_cmd->add_option("--out", o.out, "output file (default stdout)");
    accept_cmd->add_option("--format", o.format, "text or json");
    accept_cmd->callback([&] { exit_code = run_accept(suite_name, o); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help() << std::flush;
        return 1;
    } catch (const dopkit::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const dopkit::precision_error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 2;
    } catch (const dopkit::numeric_error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 2;
    }
    return exit_code;
}
