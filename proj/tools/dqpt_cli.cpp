// Command-line front end: quench sweeps, Fisher-zero scans, phase diagrams,
// the hard-coded 2x2 worked example, and the batch quench-catalog
// reproduction. Every run writes diff-able CSV plus a manifest.json that is
// written last and certifies completion.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dqpt/engine.hpp"
#include "dqpt/io.hpp"

namespace fs = std::filesystem;
using dqpt::Complex;

namespace {

constexpr const char* kVersion = "1.0.0";

enum ExitCode { kOk = 0, kNumeric = 1, kValidation = 2, kRefusal = 3 };

// ---- config / option resolution ---------------------------------------------

struct ConfigFile {
    std::map<std::string, std::string> values;
    std::set<std::string> consumed;

    template <typename T>
    void fill(const std::string& key, std::optional<T>& slot) {
        const auto it = values.find(key);
        if (it == values.end()) return;
        consumed.insert(key);
        if (slot.has_value()) return;  // flags override the file
        std::istringstream in(it->second);
        T parsed;
        in >> parsed;
        if (in.fail())
            throw dqpt::ValidationError("config key '" + key + "': cannot parse '" + it->second +
                                        "'");
        slot = parsed;
    }

    void finish() const {
        for (const auto& [key, value] : values)
            if (!consumed.count(key)) throw dqpt::ValidationError("config: unknown key '" + key + "'");
    }
};

ConfigFile load_config(const std::optional<std::string>& path) {
    ConfigFile cfg;
    if (path) cfg.values = dqpt::io::read_config(*path);
    return cfg;
}

template <typename T>
T pick(const std::optional<T>& slot, T fallback) {
    return slot.value_or(fallback);
}

int effective_threads(std::optional<int> flag) {
    int threads = flag.value_or(0);
    if (const char* env = std::getenv("BIORTHO_DQPT_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) threads = threads > 0 ? std::min(threads, cap) : cap;
    }
    return threads;
}

// ---- shared quench options ----------------------------------------------------

struct QuenchArgs {
    std::optional<double> eta_i, gamma_i, eta_f, gamma_f, t_max;
    std::optional<std::size_t> cells, t_steps, quad_steps;
    std::optional<std::string> out;
    std::optional<int> threads;
    std::optional<std::string> config;

    void attach(CLI::App* cmd, bool with_time_grid = true) {
        cmd->add_option("--eta-i", eta_i, "prequench eta");
        cmd->add_option("--gamma-i", gamma_i, "prequench gamma");
        cmd->add_option("--eta-f", eta_f, "postquench eta");
        cmd->add_option("--gamma-f", gamma_f, "postquench gamma");
        cmd->add_option("--cells", cells, "number of unit cells N");
        if (with_time_grid) {
            cmd->add_option("--t-max", t_max, "time window end");
            cmd->add_option("--t-steps", t_steps, "time grid points");
            cmd->add_option("--quad-steps", quad_steps, "Simpson panels per unit time");
        }
        cmd->add_option("--out", out, "output directory");
        cmd->add_option("--threads", threads, "worker count (0 = all)");
        cmd->add_option("--config", config, "key=value config file; flags override");
    }

    dqpt::QuenchSpec resolve(ConfigFile& cfg) {
        cfg.fill("eta-i", eta_i);
        cfg.fill("gamma-i", gamma_i);
        cfg.fill("eta-f", eta_f);
        cfg.fill("gamma-f", gamma_f);
        cfg.fill("cells", cells);
        cfg.fill("t-max", t_max);
        cfg.fill("t-steps", t_steps);
        cfg.fill("quad-steps", quad_steps);
        cfg.fill("out", out);
        cfg.fill("threads", threads);
        if (!eta_i || !gamma_i || !eta_f || !gamma_f)
            throw dqpt::ValidationError(
                "missing quench parameters: --eta-i --gamma-i --eta-f --gamma-f");
        dqpt::QuenchSpec spec;
        spec.pre = {*eta_i, *gamma_i};
        spec.post = {*eta_f, *gamma_f};
        spec.n_cells = pick<std::size_t>(cells, 2000);
        spec.t_max = pick(t_max, 5.0);
        spec.t_steps = pick<std::size_t>(t_steps, 2000);
        spec.quad_steps = pick<std::size_t>(quad_steps, 512);
        spec.validate();
        return spec;
    }

    fs::path out_dir() const {
        if (!out) throw dqpt::ValidationError("missing --out directory");
        return fs::path(*out);
    }
};

std::map<std::string, std::string> spec_echo(const dqpt::QuenchSpec& spec) {
    using dqpt::io::format_number;
    return {{"eta-i", format_number(spec.pre.eta)},
            {"gamma-i", format_number(spec.pre.gamma)},
            {"eta-f", format_number(spec.post.eta)},
            {"gamma-f", format_number(spec.post.gamma)},
            {"cells", std::to_string(spec.n_cells)},
            {"t-max", format_number(spec.t_max)},
            {"t-steps", std::to_string(spec.t_steps)},
            {"quad-steps", std::to_string(spec.quad_steps)}};
}

struct RunTimer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void finalize_run(const fs::path& dir, std::map<std::string, std::string> echo,
                  const std::vector<fs::path>& outputs, const RunTimer& timer) {
    dqpt::io::RunManifest manifest;
    manifest.spec_echo = std::move(echo);
    manifest.tool_version = kVersion;
    manifest.wall_time_seconds = timer.seconds();
    manifest.outputs = outputs;
    dqpt::io::write_manifest(dir / "manifest.json", manifest);
}

// ---- quench -------------------------------------------------------------------

int cmd_quench(QuenchArgs& args) {
    ConfigFile cfg = load_config(args.config);
    const dqpt::QuenchSpec spec = args.resolve(cfg);
    cfg.finish();
    const fs::path dir = args.out_dir();
    const int threads = effective_threads(args.threads);
    dqpt::io::DirectoryLock lock(dir);
    RunTimer timer;

    const dqpt::RateSeries bio = dqpt::loschmidt_rate(spec, threads);
    const dqpt::RateSeries sn = dqpt::self_normal_rate(spec, threads);
    const dqpt::DtopSeries dt = dqpt::dtop(spec, threads);

    using dqpt::io::format_number;
    dqpt::io::Csv rate;
    rate.header = {"t", "LR_biortho", "LR_selfnormal"};
    for (std::size_t j = 0; j < bio.times.size(); ++j)
        rate.rows.push_back(
            {format_number(bio.times[j]), format_number(bio.rate[j]), format_number(sn.rate[j])});
    dqpt::io::write_csv(dir / "rate.csv", rate);

    dqpt::io::Csv dtop_csv;
    dtop_csv.header = {"t", "nu"};
    for (std::size_t j = 0; j < dt.times.size(); ++j)
        dtop_csv.rows.push_back({format_number(dt.times[j]), format_number(dt.nu[j])});
    dqpt::io::write_csv(dir / "dtop.csv", dtop_csv);

    dqpt::io::Csv cusps;
    cusps.header = {"kind", "t", "value"};
    for (double c : bio.cusps)
        cusps.rows.push_back({"rate_biortho", format_number(c), format_number(0.0)});
    for (double c : sn.cusps)
        cusps.rows.push_back({"rate_selfnormal", format_number(c), format_number(0.0)});
    for (const auto& j : dt.jumps)
        cusps.rows.push_back({"dtop_jump", format_number(j.time), format_number(j.delta)});
    dqpt::io::write_csv(dir / "cusps.csv", cusps);

    finalize_run(dir, spec_echo(spec), {dir / "rate.csv", dir / "dtop.csv", dir / "cusps.csv"},
                 timer);
    std::cout << "quench: " << bio.cusps.size() << " biorthogonal cusps, " << dt.jumps.size()
              << " DTOP jumps -> " << dir.string() << "\n";
    return kOk;
}

// ---- fisher -------------------------------------------------------------------

int cmd_fisher(QuenchArgs& args, std::optional<int>& n_min, std::optional<int>& n_max,
               std::optional<std::size_t>& k_samples) {
    ConfigFile cfg = load_config(args.config);
    cfg.fill("n-min", n_min);
    cfg.fill("n-max", n_max);
    cfg.fill("k-samples", k_samples);
    const dqpt::QuenchSpec spec = args.resolve(cfg);
    cfg.finish();
    const fs::path dir = args.out_dir();
    const int threads = effective_threads(args.threads);
    dqpt::io::DirectoryLock lock(dir);
    RunTimer timer;

    const int lo = pick(n_min, 0), hi = pick(n_max, 6);
    const std::size_t samples = pick<std::size_t>(k_samples, 2000);
    const dqpt::FisherSet fset = dqpt::fisher_branches(spec, lo, hi, samples, 1e-6, threads);

    using dqpt::io::format_number;
    dqpt::io::Csv fisher;
    fisher.header = {"n", "k", "re_z", "im_z"};
    for (const auto& b : fset.branches)
        for (std::size_t j = 0; j < b.k_values.size(); ++j) {
            const Complex z = b.z_values[j];
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) continue;  // singular mode
            fisher.rows.push_back({std::to_string(b.n), format_number(b.k_values[j]),
                                   format_number(z.real()), format_number(z.imag())});
        }
    dqpt::io::write_csv(dir / "fisher.csv", fisher);

    dqpt::io::Csv crossings;
    crossings.header = {"n", "k_c", "t_c", "g_residual"};
    std::size_t n_cross = 0;
    for (const auto& b : fset.branches)
        for (const auto& c : b.crossings) {
            crossings.rows.push_back({std::to_string(b.n), format_number(c.k_c),
                                      format_number(c.t_c), format_number(c.g_residual)});
            ++n_cross;
        }
    dqpt::io::write_csv(dir / "crossings.csv", crossings);

    auto echo = spec_echo(spec);
    echo["n-min"] = std::to_string(lo);
    echo["n-max"] = std::to_string(hi);
    echo["k-samples"] = std::to_string(samples);
    echo["singular-modes-skipped"] = std::to_string(fset.singular_modes);
    finalize_run(dir, echo, {dir / "fisher.csv", dir / "crossings.csv"}, timer);
    std::cout << "fisher: " << n_cross << " real-axis crossings across " << fset.branches.size()
              << " branches (" << fset.singular_modes << " singular modes skipped) -> "
              << dir.string() << "\n";
    return kOk;
}

// ---- phase diagram --------------------------------------------------------------

int cmd_phase_diagram(std::optional<std::string>& config, std::vector<double>& eta_range,
                      std::vector<double>& gamma_range, std::optional<std::size_t>& grid,
                      std::optional<std::string>& out) {
    ConfigFile cfg = load_config(config);
    std::optional<double> eta_lo, eta_hi, gamma_lo, gamma_hi;
    if (eta_range.size() == 2) {
        eta_lo = eta_range[0];
        eta_hi = eta_range[1];
    }
    if (gamma_range.size() == 2) {
        gamma_lo = gamma_range[0];
        gamma_hi = gamma_range[1];
    }
    cfg.fill("eta-lo", eta_lo);
    cfg.fill("eta-hi", eta_hi);
    cfg.fill("gamma-lo", gamma_lo);
    cfg.fill("gamma-hi", gamma_hi);
    cfg.fill("grid", grid);
    cfg.fill("out", out);
    cfg.finish();
    if (!eta_lo || !eta_hi || !gamma_lo || !gamma_hi)
        throw dqpt::ValidationError("missing --eta-range and --gamma-range");
    const std::size_t n = pick<std::size_t>(grid, 50);
    if (n < 2) throw dqpt::ValidationError("--grid must be >= 2");
    if (!out) throw dqpt::ValidationError("missing --out directory");
    const fs::path dir(*out);
    dqpt::io::DirectoryLock lock(dir);
    RunTimer timer;

    using dqpt::io::format_number;
    dqpt::io::Csv phases;
    phases.header = {"eta", "gamma", "region", "winding", "boundary"};
    const double de = (*eta_hi - *eta_lo) / static_cast<double>(n - 1);
    const double dg = (*gamma_hi - *gamma_lo) / static_cast<double>(n - 1);
    const double margin = 0.5 * std::max(std::abs(de), std::abs(dg));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double eta = *eta_lo + de * static_cast<double>(i);
            const double gamma = *gamma_lo + dg * static_cast<double>(j);
            // distance to the boundary lines; adjacent cells flagged
            const double dist =
                std::min({std::abs(std::abs(gamma) - 4.0), std::abs(std::abs(gamma) - 4.0 * eta),
                          std::abs(std::abs(gamma) + 4.0 * eta)});
            std::string region = "-";
            std::string winding = "nan";
            try {
                const auto label = dqpt::classify_phase({eta, gamma});
                region = dqpt::region_name(label.region) + (label.mirrored ? "m" : "");
                winding = format_number(label.winding);
            } catch (const dqpt::OnBoundary&) {
                // refused cell: the boundary flag carries the information
            }
            phases.rows.push_back({format_number(eta), format_number(gamma), region, winding,
                                   dist <= margin ? "1" : "0"});
        }
    }
    dqpt::io::write_csv(dir / "phases.csv", phases);

    std::map<std::string, std::string> echo{
        {"eta-lo", format_number(*eta_lo)},     {"eta-hi", format_number(*eta_hi)},
        {"gamma-lo", format_number(*gamma_lo)}, {"gamma-hi", format_number(*gamma_hi)},
        {"grid", std::to_string(n)}};
    finalize_run(dir, echo, {dir / "phases.csv"}, timer);
    std::cout << "phase-diagram: " << n << "x" << n << " grid -> " << dir.string() << "\n";
    return kOk;
}

// ---- sm-example -----------------------------------------------------------------

int cmd_sm_example(std::optional<std::string>& config, std::optional<std::string>& out) {
    ConfigFile cfg = load_config(config);
    cfg.fill("out", out);
    cfg.finish();
    using dqpt::Mat2;
    using dqpt::Vec2;
    const Mat2 hi{0.0, Complex(4.0, 1.0), Complex(2.0, -1.0), 0.0};
    const Mat2 hf{0.0, Complex(0.0, -3.0), Complex(-2.0, 3.0), 0.0};
    const auto basis = dqpt::eig_biortho(hi);

    const Vec2 psi_t = dqpt::traceless_exp(hf, 1.0) * basis.u_plus;
    const auto coeff = dqpt::decompose(psi_t, basis);
    const Vec2 assoc = dqpt::associated_state(psi_t, basis);
    const Vec2 phi = 2.0 * basis.u_plus + 3.0 * basis.u_minus;
    const double p = dqpt::transition_probability(psi_t, phi, basis);
    const Complex p_naive = dqpt::naive_left_evolution_diagnostic(hf, basis, phi, 1.0);

    struct Field {
        std::string name;
        Complex got, want;
    };
    const std::vector<Field> fields = {
        {"psi_t[0]", psi_t.c0, {-1.132, 0.190}},
        {"psi_t[1]", psi_t.c1, {-0.359, -0.927}},
        {"a", coeff.c_plus, {-0.772, -0.359}},
        {"b", coeff.c_minus, {0.264, -0.953}},
        {"assoc[0]", assoc.c0, {-0.614, 0.103}},
        {"assoc[1]", assoc.c1, {-0.359, -0.927}},
        {"p", {p, 0.0}, {0.603, 0.0}},
        {"p_naive", p_naive, {-0.372, 1.118}},
    };

    nlohmann::json report;
    bool ok = true;
    for (const auto& f : fields) {
        const double diff = std::abs(f.got - f.want);
        report[f.name] = {{"re", f.got.real()},
                          {"im", f.got.imag()},
                          {"expected_re", f.want.real()},
                          {"expected_im", f.want.imag()},
                          {"abs_diff", diff},
                          {"pass", diff < 1e-3}};
        if (diff >= 1e-3) {
            ok = false;
            std::cerr << "MISMATCH " << f.name << ": got (" << f.got.real() << ", " << f.got.imag()
                      << "), expected (" << f.want.real() << ", " << f.want.imag()
                      << "), |diff| = " << diff << "\n";
        }
    }
    report["pass"] = ok;
    std::cout << report.dump(2) << "\n";
    if (out) {
        const fs::path dir(*out);
        fs::create_directories(dir);
        std::ofstream file(dir / "sm_example.json");
        file << report.dump(2) << "\n";
    }
    return ok ? kOk : kNumeric;
}

// ---- table-s1 -------------------------------------------------------------------

std::string set_to_string(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
    return s.empty() ? "none" : s;
}

std::string set_to_string(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ";";
        s += (v[i] == 0.5) ? "1/2" : std::to_string(static_cast<int>(v[i]));
    }
    return s.empty() ? "none" : s;
}

int cmd_table_s1(std::optional<std::string>& rows_filter, QuenchArgs& args,
                 std::optional<std::size_t>& k_samples) {
    ConfigFile cfg = load_config(args.config);
    cfg.fill("rows", rows_filter);
    cfg.fill("cells", args.cells);
    cfg.fill("t-max", args.t_max);
    cfg.fill("t-steps", args.t_steps);
    cfg.fill("quad-steps", args.quad_steps);
    cfg.fill("k-samples", k_samples);
    cfg.fill("out", args.out);
    cfg.fill("threads", args.threads);
    cfg.finish();

    std::vector<dqpt::TableRow> rows = dqpt::table_s1_rows();
    if (rows_filter) {
        std::vector<dqpt::TableRow> filtered;
        std::stringstream ss(*rows_filter);
        std::string label;
        while (std::getline(ss, label, ',')) {
            const auto it = std::find_if(rows.begin(), rows.end(),
                                         [&](const auto& r) { return r.label == label; });
            if (it == rows.end())
                throw dqpt::ValidationError("--rows: unknown row label '" + label + "'");
            filtered.push_back(*it);
        }
        rows = std::move(filtered);
    }

    const fs::path dir = args.out_dir();
    dqpt::io::DirectoryLock lock(dir);
    RunTimer timer;

    dqpt::TableS1Options opt;
    opt.n_cells = pick<std::size_t>(args.cells, 2000);
    opt.t_max = pick(args.t_max, 5.0);
    opt.t_steps = pick<std::size_t>(args.t_steps, 2000);
    opt.quad_steps = pick<std::size_t>(args.quad_steps, 512);
    opt.k_samples = pick<std::size_t>(k_samples, 2000);
    opt.threads = effective_threads(args.threads);

    const auto report = dqpt::table_s1_report(rows, opt);

    dqpt::io::Csv csv;
    csv.header = {"row",        "direction",     "fisher_counts", "fisher_expected",
                  "dtop_jumps", "dtop_expected", "status"};
    std::vector<std::string> failing;
    for (const auto& e : report) {
        const std::string dir_str = e.forward ? "fwd" : "rev";
        csv.rows.push_back({e.label, dir_str, set_to_string(e.fisher_counts),
                            set_to_string(e.fisher_expected), set_to_string(e.dtop_jumps),
                            set_to_string(e.dtop_expected),
                            e.error.empty() ? (e.pass ? "PASS" : "FAIL") : "ERROR"});
        if (!e.pass)
            failing.push_back(e.label + " " + dir_str +
                              (e.error.empty() ? "" : " (" + e.error + ")"));
        std::cout << e.label << " " << dir_str << ": fisher {" << set_to_string(e.fisher_counts)
                  << "} dtop {" << set_to_string(e.dtop_jumps) << "} "
                  << (e.pass ? "PASS" : "FAIL") << "\n";
    }
    dqpt::io::write_csv(dir / "table_s1.csv", csv);

    std::map<std::string, std::string> echo{{"cells", std::to_string(opt.n_cells)},
                                            {"t-max", dqpt::io::format_number(opt.t_max)},
                                            {"t-steps", std::to_string(opt.t_steps)},
                                            {"k-samples", std::to_string(opt.k_samples)}};
    if (rows_filter) echo["rows"] = *rows_filter;
    finalize_run(dir, echo, {dir / "table_s1.csv"}, timer);

    if (!failing.empty()) {
        std::cerr << "failing rows:";
        for (const auto& f : failing) std::cerr << " " << f;
        std::cerr << "\n";
        return kNumeric;
    }
    return kOk;
}

int dispatch_errors(const std::function<int()>& body) {
    try {
        return body();
    } catch (const dqpt::OnBoundary& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kRefusal;
    } catch (const dqpt::ExceptionalPoint& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kRefusal;
    } catch (const dqpt::ValidationError& e) {
        std::cerr << "invalid: " << e.what() << "\n";
        return kValidation;
    } catch (const dqpt::NumericsError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumeric;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "biorthogonal dynamical quantum phase transitions for the non-Hermitian SSH model"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    QuenchArgs quench_args;
    CLI::App* quench = app.add_subcommand("quench", "Loschmidt rate, self-normal rate, and DTOP");
    quench_args.attach(quench);

    QuenchArgs fisher_args;
    std::optional<int> n_min, n_max;
    std::optional<std::size_t> fisher_k;
    CLI::App* fisher = app.add_subcommand("fisher", "Fisher-zero branches and crossings");
    fisher_args.attach(fisher, false);
    fisher->add_option("--n-min", n_min, "lowest branch index");
    fisher->add_option("--n-max", n_max, "highest branch index");
    fisher->add_option("--k-samples", fisher_k, "momentum samples");

    std::vector<double> eta_range, gamma_range;
    std::optional<std::size_t> grid;
    std::optional<std::string> pd_out, pd_config;
    CLI::App* phase = app.add_subcommand("phase-diagram", "region and winding map");
    phase->add_option("--eta-range", eta_range, "eta lo hi")->expected(2);
    phase->add_option("--gamma-range", gamma_range, "gamma lo hi")->expected(2);
    phase->add_option("--grid", grid, "grid points per axis");
    phase->add_option("--out", pd_out, "output directory");
    phase->add_option("--config", pd_config, "key=value config file; flags override");

    std::optional<std::string> sm_out, sm_config;
    CLI::App* sm = app.add_subcommand("sm-example", "hard-coded 2x2 worked example");
    sm->add_option("--out", sm_out, "output directory for sm_example.json");
    sm->add_option("--config", sm_config, "key=value config file; flags override");

    QuenchArgs table_args;
    std::optional<std::string> rows_filter;
    std::optional<std::size_t> table_k;
    CLI::App* table = app.add_subcommand("table-s1", "batch quench-catalog reproduction");
    table->add_option("--rows", rows_filter, "comma-separated row labels, e.g. I-II,V-V");
    table->add_option("--cells", table_args.cells, "number of unit cells N");
    table->add_option("--t-max", table_args.t_max, "time window end");
    table->add_option("--t-steps", table_args.t_steps, "time grid points");
    table->add_option("--quad-steps", table_args.quad_steps, "Simpson panels per unit time");
    table->add_option("--k-samples", table_k, "momentum samples for the Fisher scan");
    table->add_option("--out", table_args.out, "output directory");
    table->add_option("--threads", table_args.threads, "worker count");
    table->add_option("--config", table_args.config, "key=value config file; flags override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kValidation;
    }

    if (quench->parsed()) return dispatch_errors([&] { return cmd_quench(quench_args); });
    if (fisher->parsed())
        return dispatch_errors([&] { return cmd_fisher(fisher_args, n_min, n_max, fisher_k); });
    if (phase->parsed())
        return dispatch_errors(
            [&] { return cmd_phase_diagram(pd_config, eta_range, gamma_range, grid, pd_out); });
    if (sm->parsed()) return dispatch_errors([&] { return cmd_sm_example(sm_config, sm_out); });
    if (table->parsed())
        return dispatch_errors([&] { return cmd_table_s1(rows_filter, table_args, table_k); });
    return kValidation;
}
