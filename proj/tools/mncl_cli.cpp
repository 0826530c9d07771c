// mncl: Monte Carlo bound on the maximum number of concurrent links in MIMO
// ad hoc networks.
//
//   mncl simulate --config run.cfg --pairs 1-15 --antennas 4 --out results/
//   mncl sweep --scheme rxdiv,beamforming --pairs 12 --antennas 1-8 --out results/
//   mncl fit --input results/aggregate.csv
//   mncl validate --pairs 6 --antennas 2 --trials 100 --seed 7
//
// Exit status: 0 success, 1 parameter error, 2 runtime/numeric error,
// 3 validation mismatch.

#include "mncl/config.hpp"
#include "mncl/errors.hpp"
#include "mncl/harness.hpp"
#include "mncl/report.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

namespace {

using namespace mncl;

constexpr int kExitParameter = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitMismatch = 3;

struct SweepFlags {
    std::string config_path;
    std::optional<std::string> pairs, antennas, scheme, pt_dbm;
    std::optional<int> trials, imax, threads;
    std::optional<std::uint64_t> seed;
    std::optional<double> radius_m, sinr_db;
    std::optional<std::string> out;
    bool record_timing = false;
};

void add_sweep_flags(CLI::App* cmd, SweepFlags& f)
{
    cmd->add_option("--config", f.config_path, "key=value config file");
    cmd->add_option("--pairs", f.pairs, "pair counts K, e.g. 10 or 1-15");
    cmd->add_option("--antennas", f.antennas, "receive antenna counts M, e.g. 4 or 1-8");
    cmd->add_option("--scheme", f.scheme, "rxdiv|stbc|beamforming (comma list or 'all' where allowed)");
    cmd->add_option("--trials", f.trials, "Monte Carlo trials per cell");
    cmd->add_option("--seed", f.seed, "master RNG seed");
    cmd->add_option("--radius-m", f.radius_m, "disk radius in meters");
    cmd->add_option("--pt-dbm", f.pt_dbm, "max transmit power per pair in dBm (comma list)");
    cmd->add_option("--sinr-db", f.sinr_db, "SINR threshold in dB");
    cmd->add_option("--imax", f.imax, "IDF iteration limit");
    cmd->add_option("--threads", f.threads, "worker threads (default: hardware concurrency)");
    cmd->add_option("--out", f.out, "output directory for trials.csv, aggregate.csv, summary.json");
    cmd->add_flag("--record-timing", f.record_timing, "record wall time per trial (output no longer reproducible)");
}

ExperimentConfig build_config(const SweepFlags& f)
{
    ExperimentConfig config;
    config.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (!f.config_path.empty())
        apply_settings(config, load_settings(f.config_path));
    if (f.pairs) apply_setting(config, "pairs", *f.pairs);
    if (f.antennas) apply_setting(config, "antennas", *f.antennas);
    if (f.scheme) apply_setting(config, "scheme", *f.scheme);
    if (f.pt_dbm) apply_setting(config, "pt_dbm", *f.pt_dbm);
    if (f.trials) config.trials = *f.trials;
    if (f.seed) config.params.rng_seed = *f.seed;
    if (f.radius_m) config.params.disk_radius_m = *f.radius_m;
    if (f.sinr_db) config.params.set_sinr_threshold_db(*f.sinr_db);
    if (f.imax) config.params.max_iterations = *f.imax;
    if (f.threads) config.threads = *f.threads;
    if (f.out) config.out_dir = *f.out;
    if (f.record_timing) config.record_timing = true;
    config.validate();
    return config;
}

void print_aggregates(const std::vector<CellAggregate>& aggregates)
{
    std::printf("%-12s %3s %3s %8s %10s %8s %12s %7s\n", "scheme", "K", "M", "pt_dbm", "C(K,M)", "stderr", "idf_calls",
                "trials");
    for (const CellAggregate& a : aggregates)
        std::printf("%-12s %3d %3d %8g %10.4f %8.4f %12.1f %7d\n", std::string(scheme_name(a.cell.scheme)).c_str(),
                    a.cell.pairs, a.cell.antennas, a.cell.pt_dbm, a.mean_nmax, a.stderr_nmax, a.mean_idf_calls,
                    a.trials);
}

void print_fits(const std::vector<CurveFit>& fits)
{
    for (const CurveFit& f : fits)
        std::printf("fit %s M=%d pt_dbm=%g: a1=%.4f b1=%.4f a2=%.4f b2=%.4f\n",
                    std::string(scheme_name(f.scheme)).c_str(), f.antennas, f.pt_dbm, f.fit.diversity.intercept,
                    f.fit.diversity.slope, f.fit.multiuser.intercept, f.fit.multiuser.slope);
}

int run_sweep(const SweepFlags& flags, bool single_curve)
{
    const ExperimentConfig config = build_config(flags);
    if (single_curve && (config.schemes.size() != 1 || config.antennas.size() != 1 || config.pt_dbm.size() != 1))
        throw ParameterError("simulate takes a single scheme, antenna count and power cap; use 'sweep' for grids");

    const RunResult result = run_trials(config);
    const std::vector<CurveFit> fits = fit_curves(result.aggregates);
    print_aggregates(result.aggregates);
    print_fits(fits);
    if (!config.out_dir.empty()) {
        emit_report(config.out_dir, config, result, fits);
        std::printf("wrote %s/{trials.csv,aggregate.csv,summary.json}\n", config.out_dir.c_str());
    }
    return 0;
}

// Keeps rounding residue from printing as -0.0000.
double tidy(double v) { return std::abs(v) < 5e-5 ? 0.0 : v; }

void print_segment(const char* label, const std::vector<double>& x, const std::vector<double>& y, bool pinned)
{
    if (pinned) {
        std::printf("  %s: a=0.0000 b=%.4f (single point K=1)\n", label, y.front());
        return;
    }
    if (x.size() < 2) {
        std::printf("  %s: not enough points\n", label);
        return;
    }
    const LineFit f = fit_line(x, y);
    std::printf("  %s: a=%.4f b=%.4f rss=%.3g points=%d\n", label, tidy(f.intercept), tidy(f.slope), f.rss, f.points);
}

int run_fit(const std::string& input, std::optional<int> antennas_filter)
{
    std::ifstream in(input);
    if (!in)
        throw ParameterError("cannot open aggregate CSV '" + input + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::vector<CellAggregate> cells = parse_aggregate_csv(buf.str());

    // Group by (scheme, M, pt) in file order.
    std::vector<std::tuple<Scheme, int, double>> keys;
    for (const CellAggregate& c : cells) {
        const auto key = std::make_tuple(c.cell.scheme, c.cell.antennas, c.cell.pt_dbm);
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            keys.push_back(key);
    }
    int fitted = 0;
    for (const auto& [scheme, m, pt] : keys) {
        if (antennas_filter && *antennas_filter != m)
            continue;
        std::vector<double> x1, y1, x2, y2;
        for (const CellAggregate& c : cells) {
            if (c.cell.scheme != scheme || c.cell.antennas != m || c.cell.pt_dbm != pt)
                continue;
            if (c.cell.pairs >= 1 && c.cell.pairs <= m) {
                x1.push_back(c.cell.pairs);
                y1.push_back(c.mean_nmax);
            } else if (c.cell.pairs > m && c.cell.pairs <= 15) {
                x2.push_back(c.cell.pairs);
                y2.push_back(c.mean_nmax);
            }
        }
        std::printf("%s M=%d pt_dbm=%g\n", std::string(scheme_name(scheme)).c_str(), m, pt);
        print_segment("segment 1 (1<=K<=M)", x1, y1, m == 1 && x1.size() == 1);
        print_segment("segment 2 (M+1<=K<=15)", x2, y2, false);
        fitted += (x1.size() >= 2 || (m == 1 && x1.size() == 1)) + (x2.size() >= 2);
    }
    if (fitted == 0)
        throw ParameterError("no curve in '" + input + "' has enough points to fit");
    return 0;
}

int run_validate(const SweepFlags& flags, int pair_cap)
{
    SweepFlags f = flags;
    if (!f.scheme)
        f.scheme = "all";
    const ExperimentConfig config = build_config(f);
    const std::vector<ValidationCell> cells = validate_search(config, pair_cap);

    int mismatches = 0;
    std::printf("%-12s %3s %3s %8s %9s %10s %11s %9s\n", "scheme", "K", "M", "pt_dbm", "scenarios", "bols_calls",
                "brute_calls", "2^K-1");
    for (const ValidationCell& v : cells) {
        mismatches += v.mismatches;
        std::printf("%-12s %3d %3d %8g %9d %10.1f %11.1f %9.0f%s\n", std::string(scheme_name(v.cell.scheme)).c_str(),
                    v.cell.pairs, v.cell.antennas, v.cell.pt_dbm, v.scenarios, v.mean_bols_calls, v.mean_brute_calls,
                    std::exp2(v.cell.pairs) - 1.0, v.mismatches ? "  MISMATCH" : "");
    }
    std::printf("mismatches: %d\n", mismatches);
    return mismatches == 0 ? 0 : kExitMismatch;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bound on the maximum number of concurrent links in MIMO ad hoc networks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    SweepFlags simulate_flags, sweep_flags, validate_flags;
    auto* simulate = app.add_subcommand("simulate", "run one sweep (single scheme/M/P_T) from a config file");
    add_sweep_flags(simulate, simulate_flags);
    auto* sweep = app.add_subcommand("sweep", "cartesian sweep over K, M, P_T and scheme");
    add_sweep_flags(sweep, sweep_flags);

    auto* fit = app.add_subcommand("fit", "two-segment line fit of C(K,M) from an aggregate CSV");
    std::string fit_input;
    std::optional<int> fit_antennas;
    fit->add_option("--input,input", fit_input, "aggregate CSV")->required();
    fit->add_option("--antennas", fit_antennas, "only fit curves with this M");

    auto* validate = app.add_subcommand("validate", "check backtracking search against brute force");
    add_sweep_flags(validate, validate_flags);
    int pair_cap = 15;
    validate->add_option("--k-cap", pair_cap, "largest K allowed for brute force");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitParameter;
    }

    try {
        if (*simulate)
            return run_sweep(simulate_flags, true);
        if (*sweep)
            return run_sweep(sweep_flags, false);
        if (*fit)
            return run_fit(fit_input, fit_antennas);
        if (*validate)
            return run_validate(validate_flags, pair_cap);
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParameter;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitParameter;
}
