// Copyright 2026 The spinbus Authors
// SPDX-License-Identifier: Apache-2.0

#include "spinbus/cli.hpp"

#include "spinbus/busgate.hpp"
#include "spinbus/dynamics.hpp"
#include "spinbus/error_mc.hpp"
#include "spinbus/errors.hpp"
#include "spinbus/spectral.hpp"
#include "spinbus/wstate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinbus {

using nlohmann::json;

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

namespace {

struct RunConfig {
    std::string format = "csv";
    std::string output_dir;
    bool quiet = false;

    std::optional<int> N;
    double J_b = 1.0;
    std::optional<double> J_q;
    double B = 0.0;
    std::vector<int> nodes;
    int levels = 16;

    std::vector<int> Ns;
    std::optional<int> fit_min;

    int n = 3;
    double J_star = 1.0;
    std::optional<double> delta;

    std::string protocol = "two";

    int trials = 200;
    std::uint64_t seed = 2024;
    std::string distribution = "rademacher";
    std::string architecture = "chain";

    double ratio = 100.0;

    int source = 1;
    std::optional<int> target;
    std::string bus_model = "microscopic";
    int input = 1;
    int bus_state = 0;
    int samples = 0;
};

/// A command result: a table for CSV/JSON rows plus a JSON summary.
struct Output {
    std::string command;
    json params = json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
    json summary = json::object();
};

json clean(const json& v) {
    if (v.is_number_float()) {
        const double x = v.get<double>();
        if (!std::isfinite(x)) return format_number(x);
        return std::strtod(format_number(x).c_str(), nullptr);
    }
    if (v.is_array() || v.is_object()) {
        json c = v;
        for (auto& e : c) e = clean(e);
        return c;
    }
    return v;
}

std::string cell(const json& v) {
    if (v.is_number_float()) return format_number(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

void write_csv(const Output& o, std::ostream& os) {
    std::vector<std::string> columns = o.columns;
    std::vector<std::vector<json>> rows = o.rows;
    if (columns.empty()) {
        rows.emplace_back();
        for (const auto& [k, v] : o.summary.items()) {
            if (v.is_structured()) continue;
            columns.push_back(k);
            rows.back().push_back(v);
        }
    }
    for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << cell(row[c]);
        os << '\n';
    }
}

void write_json(const Output& o, std::ostream& os) {
    json doc;
    doc["schema"] = kOutputSchema;
    doc["command"] = o.command;
    doc["params"] = o.params;
    json rows = json::array();
    for (const auto& r : o.rows) {
        json obj = json::object();
        for (std::size_t c = 0; c < o.columns.size(); ++c) obj[o.columns[c]] = r[c];
        rows.push_back(obj);
    }
    doc["rows"] = rows;
    doc["summary"] = o.summary;
    os << clean(doc).dump(2) << '\n';
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

std::vector<int> odd_range(int lo, int hi) {
    std::vector<int> v;
    for (int N = lo; N <= hi; N += 2) v.push_back(N);
    return v;
}

json fit_json(const PowerLawFit& f, int fit_min, std::size_t points) {
    return {{"prefactor", f.prefactor},
            {"exponent", f.exponent},
            {"exponent_stderr", f.exponent_stderr},
            {"residual", f.residual},
            {"fit_min_N", fit_min},
            {"fit_points", points}};
}

Output cmd_spectrum(const RunConfig& c) {
    Output o;
    const int N = c.N.value_or(7);
    const double J_q = c.J_q.value_or(0.3);
    require(c.levels >= 1, "levels must be >= 1");
    ChainSpec chain{N, c.J_b, {}, c.B};
    chain.validate();
    std::vector<QubitCoupling> couplings;
    for (int node : c.nodes) couplings.push_back({node, J_q, {}});
    for (const auto& q : couplings) q.validate(N);
    const int sites = N + static_cast<int>(couplings.size());
    require(sites <= 24, "spectrum: at most 24 spins");

    struct Level {
        double energy;
        int two_sz;
    };
    std::vector<Level> levels;
    for (int two_sz = -sites; two_sz <= sites; two_sz += 2) {
        const SpinBasis basis = build_basis(sites, two_sz / 2.0);
        auto H = heisenberg_hamiltonian(chain, basis);
        if (!couplings.empty()) H = couple_qubits(H, basis, N, couplings, 0.0);
        const int k = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(c.levels), basis.dim()));
        const auto eig = eig_lowest_auto(H, k);
        for (Eigen::Index i = 0; i < k; ++i) levels.push_back({eig.eigenvalues[i], two_sz});
    }
    std::stable_sort(levels.begin(), levels.end(), [](const Level& a, const Level& b) {
        return a.energy < b.energy || (a.energy == b.energy && a.two_sz < b.two_sz);
    });
    if (levels.size() > static_cast<std::size_t>(c.levels)) levels.resize(static_cast<std::size_t>(c.levels));

    o.params = {{"N", N}, {"J_b", c.J_b}, {"J_q", J_q}, {"B", c.B}, {"nodes", c.nodes}, {"levels", c.levels}};
    o.columns = {"index", "energy", "sz"};
    for (std::size_t i = 0; i < levels.size(); ++i) {
        o.rows.push_back({static_cast<int>(i), levels[i].energy, levels[i].two_sz / 2.0});
    }
    o.summary = {{"ground_energy", levels.front().energy}, {"levels", levels.size()}};
    return o;
}

Output cmd_gap_scan(const RunConfig& c) {
    Output o;
    const auto Ns = c.Ns.empty() ? odd_range(3, 15) : c.Ns;
    const int fit_min = c.fit_min.value_or(3);
    std::vector<std::pair<double, double>> pts;
    o.columns = {"N", "gap", "formula", "ratio"};
    for (int N : Ns) {
        require(N >= 3 && N % 2 == 1, "gap-scan: N must be odd and >= 3");
        const auto bus = bus_manifold(ChainSpec{N, c.J_b, {}, c.B});
        const double f = gap_formula(N, c.J_b);
        o.rows.push_back({N, bus.gap, f, bus.gap / f});
        if (N >= fit_min) pts.emplace_back(N, bus.gap);
    }
    require(pts.size() >= 2, "gap-scan: at least two sizes >= fit-min needed");
    o.params = {{"Ns", Ns}, {"J_b", c.J_b}, {"fit_min", fit_min}};
    o.summary["fit"] = fit_json(fit_power_law(pts), fit_min, pts.size());
    return o;
}

Output cmd_jeff_scan(const RunConfig& c) {
    Output o;
    const auto Ns = c.Ns.empty() ? odd_range(3, 21) : c.Ns;
    const int fit_min = c.fit_min.value_or(11);
    std::vector<std::pair<double, double>> pts;
    o.columns = {"N", "mean_jeff", "mean_jeff_sqrtN"};
    for (int N : Ns) {
        require(N >= 3 && N % 2 == 1, "jeff-scan: N must be odd and >= 3");
        const auto bus = bus_manifold(ChainSpec{N, c.J_b, {}, c.B});
        const double m = mean_odd_node_coupling(bus);
        o.rows.push_back({N, m, m * std::sqrt(static_cast<double>(N))});
        if (N >= fit_min) pts.emplace_back(N, m);
    }
    require(pts.size() >= 2, "jeff-scan: at least two sizes >= fit-min needed");
    o.params = {{"Ns", Ns}, {"J_b", c.J_b}, {"fit_min", fit_min}};
    o.summary["fit"] = fit_json(fit_power_law(pts), fit_min, pts.size());
    return o;
}

Output cmd_busgate(const RunConfig& c) {
    Output o;
    const StarModel model{c.n, c.J_star};
    model.validate();
    const auto r = bus_gate(model);
    o.params = {{"n", c.n}, {"J_star", c.J_star}};
    o.columns = {"two_j", "phase_re", "phase_im", "expected_re", "expected_im"};
    for (const auto& [two_j, ph] : r.phases) {
        const cplx expected = std::exp(cplx(0.0, -0.5 * (two_j / 2.0) * c.J_star * r.tau));
        o.rows.push_back({two_j, ph.real(), ph.imag(), expected.real(), expected.imag()});
    }
    o.summary = {{"tau", r.tau},
                 {"residual", r.residual},
                 {"bus_block_mismatch", r.bus_block_mismatch},
                 {"phase_spread", r.phase_spread},
                 {"angular_off_diagonal", r.angular_off_diagonal},
                 {"is_identity", r.is_identity},
                 {"spectrum_width", spectrum_width(model)},
                 {"spectrum_width_formula", spectrum_width_formula(model)}};
    if (c.delta) {
        require(c.trials >= 1, "trials must be >= 1");
        const auto te = timing_error(model, *c.delta);
        o.params["delta"] = *c.delta;
        o.params["trials"] = c.trials;
        o.params["seed"] = c.seed;
        o.summary["timing_epsilon"] = te.epsilon;
        o.summary["timing_bound"] = te.bound;
        o.summary["timing_ratio"] = te.ratio;
        o.summary["worst_infidelity"] = timing_fidelity_check(model, *c.delta, c.trials, c.seed);
        o.summary["infidelity_bound"] = timing_fidelity_bound(c.n, *c.delta);
    }
    return o;
}

Output cmd_wstate(const RunConfig& c) {
    Output o;
    require(c.protocol == "one" || c.protocol == "two", "protocol must be one or two");
    const Protocol p = c.protocol == "one" ? Protocol::one : Protocol::two;
    require(c.n >= 1 && c.n <= 10, "wstate: n must lie in [1, 10]");
    const auto r = p == Protocol::one ? protocol_one(c.n) : protocol_two(c.n);
    if (std::abs(r.p_success - r.predicted_p) > 1e-10 || std::abs(1.0 - r.fidelity) > 1e-10) {
        throw ClaimViolation("wstate: simulated success probability or fidelity off the closed form");
    }
    o.params = {{"protocol", c.protocol}, {"n", c.n}};
    o.summary = {{"protocol", c.protocol},
                 {"n", c.n},
                 {"p_sim", r.p_success},
                 {"p_formula", r.predicted_p},
                 {"fidelity", r.fidelity},
                 {"bus_gate", r.bus_gate}};
    return o;
}

Output cmd_error_scan(const RunConfig& c) {
    Output o;
    const double delta = c.delta.value_or(1e-3);
    const auto dist = parse_distribution(c.distribution);
    o.columns = {"N", "gates", "mean_eps", "stderr", "delta", "trials", "seed"};
    o.params = {{"architecture", c.architecture}, {"delta", delta}, {"trials", c.trials},
                {"seed", c.seed}, {"distribution", c.distribution}};
    auto emit = [&](const std::vector<ScalingPoint>& pts) {
        for (const auto& p : pts) {
            o.rows.push_back({p.N, p.gates, p.mean_eps, p.stderr_eps, delta, c.trials, c.seed});
        }
    };
    if (c.architecture == "chain") {
        ErrorScanConfig cfg{c.Ns.empty() ? std::vector<int>{4, 5, 6, 7, 8, 9, 10} : c.Ns, delta, c.trials, c.seed,
                            dist};
        cfg.validate();
        const auto r = chain_error_scan(cfg);
        o.params["Ns"] = cfg.N_list;
        emit(r.points);
        o.summary["fit"] = fit_json(r.fit, cfg.N_list.front(), r.points.size());
        o.summary["low_statistics"] = r.low_statistics;
    } else if (c.architecture == "bus") {
        const auto Ns = c.Ns.empty() ? std::vector<int>{9, 25, 49} : c.Ns;
        require(!Ns.empty() && c.trials >= 1 && delta >= 0.0, "error-scan: bad bus configuration");
        o.params["Ns"] = Ns;
        const auto pts = bus_serial_error(Ns, delta, c.trials, c.seed, dist);
        emit(pts);
        double lo = pts.front().mean_eps, hi = lo;
        for (const auto& p : pts) {
            lo = std::min(lo, p.mean_eps);
            hi = std::max(hi, p.mean_eps);
        }
        o.summary["max_over_min"] = lo > 0.0 ? hi / lo : 1.0;
    } else {
        throw std::invalid_argument("architecture must be chain or bus");
    }
    return o;
}

Output cmd_bounds(const RunConfig& c) {
    Output o;
    require(c.ratio > 0.0, "ratio must be positive");
    require(c.J_b > 0.0, "J_b must be positive");
    const long N_max = adiabatic_bus_bound(c.ratio);
    o.params = {{"ratio", c.ratio}, {"J_b_meV", c.J_b}};
    o.summary = {{"ratio", c.ratio}, {"N_max", N_max}, {"n_max", max_gate_size(c.ratio)}};
    if (N_max >= 1) o.summary["gap_mK_at_N_max"] = gap_physical(c.J_b, static_cast<int>(N_max));
    return o;
}

Output cmd_serial(const RunConfig& c) {
    Output o;
    const int N = c.N.value_or(5);
    const double J_q = c.J_q.value_or(0.05);
    const int target = c.target.value_or(N);
    require(c.input >= 0 && c.input <= 3, "input must be a two-qubit basis index 0..3");
    require(c.bus_state == 0 || c.bus_state == 1, "bus-state must be 0 or 1");
    require(c.samples >= 0, "samples must be >= 0");
    require(c.bus_model == "microscopic" || c.bus_model == "effective", "bus-model must be microscopic or effective");
    SerialConfig cfg{ChainSpec{N, c.J_b, {}, c.B}, c.source, target, J_q,
                     c.bus_model == "microscopic" ? BusModel::microscopic : BusModel::effective};
    cfg.chain.validate();
    const auto bus = bus_manifold(cfg.chain);
    Eigen::Vector4cd q = Eigen::Vector4cd::Zero();
    q[c.input] = 1.0;
    const auto r = serial_protocol(cfg, bus, q, c.bus_state);
    const auto times = protocol_time_compare(N, J_q);
    o.params = {{"N", N}, {"J_b", c.J_b}, {"J_q", J_q}, {"source", c.source}, {"target", target},
                {"bus_model", c.bus_model}, {"input", c.input}, {"bus_state", c.bus_state}};
    if (c.samples > 0) {
        o.columns = {"t", "fidelity", "leakage"};
        for (const auto& s : serial_time_series(cfg, bus, q, c.bus_state, c.samples)) {
            o.rows.push_back({s.t, s.fidelity, s.leakage});
        }
    }
    o.summary = {{"fidelity", r.fidelity},
                 {"leakage", r.leakage},
                 {"elapsed", r.elapsed},
                 {"gap", bus.gap},
                 {"t_chain", times.t_chain},
                 {"t_bus", times.t_bus},
                 {"crossover_N", times.crossover_N}};
    return o;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"Spin-bus simulations: chain spectra, bus gates, W states and error scans."};
    app.set_config("--config", "", "key=value file; command-line flags take precedence");
    app.allow_config_extras(false);
    app.require_subcommand(1);

    app.add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--output-dir", c.output_dir, "write <command>.<format> here instead of stdout");
    app.add_flag("--quiet", c.quiet, "suppress diagnostics");
    app.add_option("--N", c.N, "chain length");
    app.add_option("--J_b", c.J_b, "bus exchange coupling (meV for bounds)");
    app.add_option("--J_q", c.J_q, "qubit-bus coupling");
    app.add_option("--B", c.B, "Zeeman field");
    app.add_option("--nodes", c.nodes, "1-based nodes carrying a qubit");
    app.add_option("--levels", c.levels, "number of lowest levels to report");
    app.add_option("--Ns", c.Ns, "sizes to scan");
    app.add_option("--fit-min", c.fit_min, "smallest size entering the power-law fit");
    app.add_option("--n", c.n, "qubit count");
    app.add_option("--J_star", c.J_star, "effective star coupling");
    app.add_option("--delta", c.delta, "relative coupling or timing error");
    app.add_option("--protocol", c.protocol, "W-state protocol: one or two");
    app.add_option("--trials", c.trials, "Monte Carlo trials");
    app.add_option("--seed", c.seed, "random seed");
    app.add_option("--distribution", c.distribution, "rademacher or uniform");
    app.add_option("--architecture", c.architecture, "chain or bus");
    app.add_option("--ratio", c.ratio, "J_b / J_q");
    app.add_option("--source", c.source, "source node");
    app.add_option("--target", c.target, "target node (default N)");
    app.add_option("--bus-model", c.bus_model, "microscopic or effective");
    app.add_option("--input", c.input, "two-qubit input basis index q_source + 2 q_target");
    app.add_option("--bus-state", c.bus_state, "bus doublet state 0 or 1");
    app.add_option("--samples", c.samples, "time-series samples per stage (0 for none)");

    using Handler = Output (*)(const RunConfig&);
    const std::vector<std::tuple<std::string, std::string, Handler>> commands = {
        {"spectrum", "lowest levels of a chain with optional coupled qubits", cmd_spectrum},
        {"gap-scan", "exact bus gap against the asymptotic formula", cmd_gap_scan},
        {"jeff-scan", "mean odd-node effective coupling and its power law", cmd_jeff_scan},
        {"busgate", "multiqubit bus gate at the decoupling time", cmd_busgate},
        {"wstate", "heralded W-state preparation", cmd_wstate},
        {"error-scan", "coupling-error Monte Carlo for chain or bus SWAPs", cmd_error_scan},
        {"bounds", "bus-size and gate-size bounds from the coupling ratio", cmd_bounds},
        {"serial", "serial root-SWAP through the bus", cmd_serial},
    };
    std::vector<CLI::App*> subs;
    for (const auto& [name, help, fn] : commands) {
        auto* s = app.add_subcommand(name, help);
        s->fallthrough();
        subs.push_back(s);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    std::size_t which = 0;
    while (which < subs.size() && !subs[which]->parsed()) ++which;
    const auto& [name, help, fn] = commands[which];

    try {
        Output o = fn(c);
        o.command = name;
        std::ofstream file;
        std::ostream* os = &out;
        if (!c.output_dir.empty()) {
            std::filesystem::create_directories(c.output_dir);
            const auto path = std::filesystem::path(c.output_dir) / (name + "." + c.format);
            file.open(path);
            if (!file) throw std::invalid_argument("cannot open " + path.string());
            os = &file;
            if (!c.quiet) err << "wrote " << path.string() << '\n';
        }
        if (c.format == "json") {
            write_json(o, *os);
        } else {
            write_csv(o, *os);
        }
    } catch (const ClaimViolation& e) {
        err << "claim violated: " << e.what() << '\n';
        return kExitClaim;
    } catch (const ConvergenceError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::domain_error& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::out_of_range& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}

}  // namespace spinbus
