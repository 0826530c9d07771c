// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
//
// The master seed is fixed. Every run writes its reports under --out so the
// numbers behind each line can be inspected afterwards.

#include "mncl/errors.hpp"
#include "mncl/harness.hpp"
#include "mncl/mimo.hpp"
#include "mncl/power.hpp"
#include "mncl/report.hpp"
#include "mncl/selection.hpp"
#include "mncl/units.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace mncl;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 1;

struct Suite {
    int threads = 1;
    fs::path out = "acceptance_out";
    int failed = 0;

    void report(int id, const std::string& title, bool pass, const std::string& detail)
    {
        std::printf("%s [%2d] %s: %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
        std::fflush(stdout);
        failed += pass ? 0 : 1;
    }

    ExperimentConfig base() const
    {
        ExperimentConfig c;
        c.params.rng_seed = kSeed;
        c.threads = threads;
        return c;
    }

    RunResult run(const std::string& name, const ExperimentConfig& config) const
    {
        const auto start = std::chrono::steady_clock::now();
        const RunResult r = run_trials(config);
        emit_report((out / name).string(), config, r, fit_curves(r.aggregates));
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::fprintf(stderr, "  run %-12s %6zu trials %8.1f s\n", name.c_str(), r.records.size(), s);
        return r;
    }
};

const CellAggregate& find(const RunResult& r, Scheme s, int K, int M, double pt = 20.0)
{
    for (const CellAggregate& a : r.aggregates)
        if (a.cell.scheme == s && a.cell.pairs == K && a.cell.antennas == M && a.cell.pt_dbm == pt)
            return a;
    throw ContractError("no such cell in run");
}

double combined_se(const CellAggregate& a, const CellAggregate& b)
{
    return std::hypot(a.stderr_nmax, b.stderr_nmax);
}

std::string fmt(const char* pattern, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

bool within(double value, double target, double fraction) { return std::abs(value - target) <= fraction * target; }

Eigen::VectorXcd gaussian_vector(int n, Rng& rng)
{
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    Eigen::VectorXcd v(n);
    for (int i = 0; i < n; ++i)
        v(i) = cdouble(g(rng), g(rng));
    return v;
}

Scenario sample(int pairs, SchemeConfig scheme, std::uint64_t stream, std::uint64_t index)
{
    SimParams p;
    p.rng_seed = kSeed;
    Rng rng = trial_stream(kSeed, stream, index);
    return build_scenario(p, pairs, scheme, rng);
}

PairSet random_subset(const PairSet& of, Rng& rng, bool proper)
{
    std::vector<int> pick;
    for (int k : of)
        if (rng() & 1)
            pick.push_back(k);
    if (pick.empty())
        pick.push_back(of.indices()[rng() % of.size()]);
    if (proper && static_cast<int>(pick.size()) == of.size())
        pick.erase(pick.begin() + static_cast<long>(rng() % pick.size()));
    return PairSet(pick);
}

// ---------------------------------------------------------------------------

void search_checks(Suite& suite)
{
    ExperimentConfig c = suite.base();
    c.schemes = {Scheme::RxDiversity, Scheme::Stbc, Scheme::Beamforming};
    c.pairs = {6};
    c.antennas = {2, 4};
    c.trials = 100;
    const auto start = std::chrono::steady_clock::now();
    const std::vector<ValidationCell> cells = validate_search(c);
    std::fprintf(stderr, "  run %-12s %6d scenarios %6.1f s\n", "validate", 600,
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());

    int mismatches = 0;
    int scenarios = 0;
    std::string detail;
    for (const ValidationCell& v : cells) {
        mismatches += v.mismatches;
        scenarios += v.scenarios;
    }
    detail = fmt("%d scenarios (3 schemes, K=6, M in {2,4}), %d mismatches", scenarios, mismatches);
    suite.report(1, "bols equals brute force", scenarios == 600 && mismatches == 0, detail);
}

void complexity_check(Suite& suite, const RunResult& k10)
{
    const double limit = 0.5 * 1023.0;
    bool pass = true;
    std::string detail;
    for (Scheme s : {Scheme::RxDiversity, Scheme::Stbc, Scheme::Beamforming}) {
        const CellAggregate& a = find(k10, s, 10, 4);
        pass = pass && a.mean_idf_calls < limit;
        detail += fmt("%s %.1f, ", std::string(scheme_name(s)).c_str(), a.mean_idf_calls);
    }
    detail += fmt("limit %.1f (K=10, M=4, %d trials)", limit, find(k10, Scheme::Beamforming, 10, 4).trials);
    suite.report(2, "bols idf calls well below exhaustive", pass, detail);
}

void beamforming_curve(Suite& suite, const RunResult& bf, const RunResult& siso)
{
    const CellAggregate& c10 = find(bf, Scheme::Beamforming, 10, 4);
    const CellAggregate& c15 = find(bf, Scheme::Beamforming, 15, 4);
    const bool ok = within(c10.mean_nmax, 6.68, 0.15) && within(c15.mean_nmax, 8.27, 0.15);
    suite.report(3, "beamforming M=4 curve", ok,
                 fmt("C(10,4)=%.3f (6.68 +/-15%%), C(15,4)=%.3f (8.27 +/-15%%)", c10.mean_nmax, c15.mean_nmax));

    const CellAggregate& s15 = find(siso, Scheme::RxDiversity, 15, 1);
    const double ratio = c15.mean_nmax / s15.mean_nmax;
    const bool ok4 = within(s15.mean_nmax, 2.62, 0.20) && ratio >= 2.5 && ratio <= 3.8;
    suite.report(4, "single-antenna baseline and gain", ok4,
                 fmt("C(15,1)=%.3f (2.62 +/-20%%), C(15,4)/C(15,1)=%.3f (in [2.5, 3.8])", s15.mean_nmax, ratio));
}

void fit_shape(Suite& suite, const RunResult& bf)
{
    std::vector<std::pair<int, double>> curve;
    for (int K = 1; K <= 15; ++K)
        curve.emplace_back(K, find(bf, Scheme::Beamforming, K, 4).mean_nmax);
    const FitParams f = fit_two_stage(curve, 4);
    const double b1 = f.diversity.slope;
    const double b2 = f.multiuser.slope;
    suite.report(6, "two-segment fit shape", b1 >= 0.90 && b1 <= 1.01 && b2 >= 0.2 && b2 <= 0.45,
                 fmt("a1=%.4f b1=%.4f (in [0.90, 1.01]), a2=%.4f b2=%.4f (in [0.2, 0.45])", f.diversity.intercept, b1,
                     f.multiuser.intercept, b2));
}

void scheme_ordering(Suite& suite, const RunResult& k10)
{
    bool pass = true;
    std::string detail;
    for (int M : {2, 3, 4}) {
        const CellAggregate& bf = find(k10, Scheme::Beamforming, 10, M);
        const CellAggregate& rx = find(k10, Scheme::RxDiversity, 10, M);
        const CellAggregate& st = find(k10, Scheme::Stbc, 10, M);
        const double g1 = bf.mean_nmax - rx.mean_nmax;
        const double g2 = rx.mean_nmax - st.mean_nmax;
        const double s1 = 2.0 * combined_se(bf, rx);
        const double s2 = 2.0 * combined_se(rx, st);
        pass = pass && g1 > s1 && g2 > s2;
        detail += fmt("M=%d bf %.3f rx %.3f stbc %.3f gaps %.3f>%.3f %.3f>%.3f; ", M, bf.mean_nmax, rx.mean_nmax,
                      st.mean_nmax, g1, s1, g2, s2);
    }
    detail.resize(detail.size() - 2);
    suite.report(5, "scheme ordering at K=10", pass, detail);
}

void power_saturation(Suite& suite, const RunResult& r, const std::vector<double>& pts)
{
    bool rising = true;
    std::string series;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const CellAggregate& a = find(r, Scheme::Beamforming, 10, 4, pts[i]);
        series += fmt("%g:%.3f ", pts[i], a.mean_nmax);
        if (i + 1 < pts.size() && pts[i + 1] <= 10.0) {
            const CellAggregate& b = find(r, Scheme::Beamforming, 10, 4, pts[i + 1]);
            rising = rising && b.mean_nmax >= a.mean_nmax - 2.0 * combined_se(a, b);
        }
    }
    const double c10 = find(r, Scheme::Beamforming, 10, 4, 10.0).mean_nmax;
    const double c50 = find(r, Scheme::Beamforming, 10, 4, 50.0).mean_nmax;
    const bool flat = c50 - c10 <= 0.10 * c10;
    suite.report(7, "power saturation", rising && flat,
                 fmt("C by dBm %s| rising to 10 dBm: %s, C(50)-C(10)=%.3f (<= %.3f)", series.c_str(),
                     rising ? "yes" : "no", c50 - c10, 0.10 * c10));
}

void antenna_saturation(Suite& suite, const RunResult& r)
{
    bool pass = true;
    std::string detail;
    for (Scheme s : {Scheme::RxDiversity, Scheme::Beamforming}) {
        std::vector<double> c;
        for (int M = 1; M <= 8; ++M)
            c.push_back(find(r, s, 12, M).mean_nmax);
        bool monotone = true;
        for (int i = 0; i + 1 < 8; ++i)
            monotone = monotone && c[i + 1] >= c[i];
        const double ratio = c[7] / c[0];
        const double gain34 = c[3] - c[2];
        double worst = -1e9;
        for (int M = 5; M <= 7; ++M)
            worst = std::max(worst, c[M] - c[M - 1]);
        const bool ok = monotone && ratio >= 3.2 && ratio <= 4.8 && worst < gain34;
        pass = pass && ok;
        std::string series;
        for (double v : c)
            series += fmt("%.3f ", v);
        detail += fmt("%s M=1..8: %s| ratio %.3f (in [3.2, 4.8]), max gain beyond M=5 %.3f < gain 3->4 %.3f; ",
                      std::string(scheme_name(s)).c_str(), series.c_str(), ratio, worst, gain34);
    }
    detail.resize(detail.size() - 2);
    suite.report(8, "antenna saturation at K=12", pass, detail);
}

void property_suites(Suite& suite)
{
    std::vector<std::string> broken;
    Rng rng = trial_stream(kSeed, 7000, 0);

    // Standard-function properties of the power mapping.
    int sf_instances = 0;
    int sf_failures = 0;
    for (int i = 0; i < 1000; ++i) {
        const Scheme s = static_cast<Scheme>(i % 3);
        const Scenario sc = sample(6, {s, 1 + i % 4}, 7001, i);
        const LinkEvaluator ev(sc);
        const PairSet all{0, 1, 2, 3, 4, 5};
        const PairSet set = random_subset(all, rng, false);
        std::uniform_real_distribution<double> u(0.0, 100.0);
        PowerVector low = ev.zero_powers();
        PowerVector high = ev.zero_powers();
        for (int k : set)
            for (int l = 0; l < ev.streams(); ++l) {
                low.at(k, l) = u(rng);
                high.at(k, l) = low.at(k, l) + u(rng);
            }
        const double a = 1.0 + std::uniform_real_distribution<double>(0.0, 9.0)(rng);
        PowerVector scaled = low;
        for (double& x : scaled.values())
            x *= a;
        const PowerVector m_low = ev.power_step(set, low);
        const PowerVector m_high = ev.power_step(set, high);
        const PowerVector m_scaled = ev.power_step(set, scaled);
        bool ok = true;
        for (int k : set)
            for (int l = 0; l < ev.streams(); ++l)
                ok = ok && m_low.at(k, l) > 0.0 && m_high.at(k, l) >= m_low.at(k, l) * (1.0 - 1e-9)
                     && a * m_low.at(k, l) >= m_scaled.at(k, l) * (1.0 - 1e-9);
        ++sf_instances;
        sf_failures += ok ? 0 : 1;
    }
    if (sf_failures)
        broken.push_back(fmt("standard function %d/%d", sf_failures, sf_instances));

    // Nondecreasing iterates on every IDF run of full searches.
    long idf_runs = 0;
    long decreasing = 0;
    for (int i = 0; i < 150; ++i) {
        const Scenario sc = sample(8, {static_cast<Scheme>(i % 3), 2 + i % 3}, 7002, i);
        const LinkEvaluator ev(sc);
        bols(
            [&](const PairSet& set) {
                const FeasibilityResult r = ev.idf(set);
                ++idf_runs;
                decreasing += r.nondecreasing ? 0 : 1;
                return r.feasible();
            },
            8);
    }
    if (decreasing)
        broken.push_back(fmt("decreasing iterates in %ld/%ld runs", decreasing, idf_runs));

    // MMSE unit gain and optimality against perturbed combiners.
    int mmse_failures = 0;
    for (int i = 0; i < 1000; ++i) {
        const int n = 1 + i % 8;
        const Eigen::MatrixXcd a = [&] {
            Eigen::MatrixXcd m(n, n);
            for (int c = 0; c < n; ++c)
                m.col(c) = gaussian_vector(n, rng);
            return m;
        }();
        const Eigen::MatrixXcd cov = a * a.adjoint() + 1e-3 * Eigen::MatrixXcd::Identity(n, n);
        const Eigen::VectorXcd h = gaussian_vector(n, rng);
        const MmseOutput m = mmse_weight(cov, h);
        const double best = combiner_sinr(1.0, 1.0, h, m.weight, cov);
        bool ok = std::abs(m.weight.dot(h) - cdouble(1.0, 0.0)) < 1e-9
                  && std::abs(best - mmse_sinr(1.0, 1.0, h, cov)) <= 1e-8 * best;
        for (int probe = 0; probe < 5; ++probe) {
            const Eigen::VectorXcd w = m.weight + 0.1 * m.weight.norm() * gaussian_vector(n, rng);
            ok = ok && combiner_sinr(1.0, 1.0, h, w, cov) <= best * (1.0 + 1e-9);
        }
        mmse_failures += ok ? 0 : 1;
    }
    if (mmse_failures)
        broken.push_back(fmt("MMSE probes %d/1000", mmse_failures));

    // Alamouti stacking: the two stream vectors are exactly orthogonal.
    int stbc_failures = 0;
    for (int i = 0; i < 1000; ++i) {
        const int M = 1 + i % 8;
        const auto [s1, s2] = stbc_stack(gaussian_vector(M, rng), gaussian_vector(M, rng));
        cdouble upper = 0.0;
        cdouble lower = 0.0;
        for (int j = 0; j < M; ++j) {
            upper += std::conj(s1(j)) * s2(j);
            lower += std::conj(s1(M + j)) * s2(M + j);
        }
        stbc_failures += (upper + lower == cdouble(0.0, 0.0)) ? 0 : 1;
    }
    if (stbc_failures)
        broken.push_back(fmt("STBC orthogonality %d/1000", stbc_failures));

    // Subsets of feasible sets are feasible.
    int feasible_sets = 0;
    int subset_failures = 0;
    for (int i = 0; feasible_sets < 100 && i < 1000; ++i) {
        const Scenario sc = sample(10, {static_cast<Scheme>(i % 3), 2 + i % 3}, 7003, i);
        const LinkEvaluator ev(sc);
        const SelectionResult best = bols(idf_oracle(ev), 10);
        if (best.n_max < 2)
            continue;
        ++feasible_sets;
        for (int j = 0; j < 20; ++j)
            subset_failures += ev.idf(random_subset(best.best_set, rng, true)).feasible() ? 0 : 1;
    }
    if (feasible_sets < 100 || subset_failures)
        broken.push_back(fmt("subset feasibility %d failures over %d sets", subset_failures, feasible_sets));

    // Four-pair example family.
    const std::vector<std::vector<int>> maximal{{0, 1, 2}, {0, 2}, {1, 2}, {1, 3}, {2, 3}, {3}};
    const SelectionResult mock = bols(
        [&](const PairSet& s) {
            return std::any_of(maximal.begin(), maximal.end(), [&](const std::vector<int>& m) {
                return std::includes(m.begin(), m.end(), s.begin(), s.end());
            });
        },
        4);
    if (mock.n_max != 3 || mock.best_set != PairSet{0, 1, 2})
        broken.push_back("example family gave " + mock.best_set.to_string());

    std::string detail = fmt("standard function on %d instances, %ld IDF runs nondecreasing, 1000 MMSE probes, "
                             "1000 STBC pairs, %d feasible sets x 20 subsets, example family n_max=%d %s",
                             sf_instances, idf_runs, feasible_sets, mock.n_max, mock.best_set.to_string().c_str());
    for (const std::string& b : broken)
        detail += " | BROKEN: " + b;
    suite.report(9, "property suites", broken.empty(), detail);
}

void reproducibility(Suite& suite, const ExperimentConfig& config)
{
    bool same = true;
    std::string detail;
    const fs::path reference = suite.out / "repro_1";
    {
        ExperimentConfig c = config;
        c.threads = 1;
        const RunResult r = run_trials(c);
        emit_report(reference.string(), c, r, fit_curves(r.aggregates));
    }
    for (int threads : {2, 4}) {
        ExperimentConfig c = config;
        c.threads = threads;
        const RunResult r = run_trials(c);
        const fs::path dir = suite.out / ("repro_" + std::to_string(threads));
        emit_report(dir.string(), c, r, fit_curves(r.aggregates));
        for (const char* name : {"trials.csv", "aggregate.csv", "summary.json"}) {
            const bool eq = slurp(reference / name) == slurp(dir / name);
            same = same && eq;
            if (!eq)
                detail += fmt("%s differs at %d workers; ", name, threads);
        }
    }
    detail += fmt("%zu cells x %d trials, 1 vs 2 vs 4 workers, trials.csv/aggregate.csv/summary.json compared",
                  enumerate_cells(config).size(), config.trials);
    suite.report(10, "byte-identical outputs across worker counts", same, detail);
}

} // namespace

int main(int argc, char** argv)
{
    Suite suite;
    suite.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::string out = suite.out.string();

    CLI::App app{"mncl acceptance suite"};
    app.add_option("--threads", suite.threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--out", out, "directory for run reports");
    CLI11_PARSE(app, argc, argv);
    suite.out = out;

    const auto start = std::chrono::steady_clock::now();
    std::printf("mncl acceptance, seed %llu, %d worker(s)\n", static_cast<unsigned long long>(kSeed), suite.threads);
    std::fflush(stdout);

    try {
        search_checks(suite);

        ExperimentConfig k10 = suite.base();
        k10.schemes = {Scheme::RxDiversity, Scheme::Stbc, Scheme::Beamforming};
        k10.pairs = {10};
        k10.antennas = {2, 3, 4};
        k10.trials = 300;
        const RunResult k10_run = suite.run("k10", k10);
        complexity_check(suite, k10_run);

        ExperimentConfig bf = suite.base();
        bf.schemes = {Scheme::Beamforming};
        bf.pairs = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
        bf.antennas = {4};
        bf.trials = 300;
        const RunResult bf_run = suite.run("bf_m4", bf);

        ExperimentConfig siso = suite.base();
        siso.schemes = {Scheme::RxDiversity};
        siso.pairs = bf.pairs;
        siso.antennas = {1};
        siso.trials = 300;
        const RunResult siso_run = suite.run("siso", siso);

        beamforming_curve(suite, bf_run, siso_run);
        scheme_ordering(suite, k10_run);
        fit_shape(suite, bf_run);

        ExperimentConfig power = suite.base();
        power.schemes = {Scheme::Beamforming};
        power.pairs = {10};
        power.antennas = {4};
        power.pt_dbm = {-20, -10, 0, 10, 20, 30, 40, 50};
        power.trials = 200;
        power_saturation(suite, suite.run("power", power), power.pt_dbm);

        ExperimentConfig antennas = suite.base();
        antennas.schemes = {Scheme::RxDiversity, Scheme::Beamforming};
        antennas.pairs = {12};
        antennas.antennas = {1, 2, 3, 4, 5, 6, 7, 8};
        antennas.trials = 200;
        antenna_saturation(suite, suite.run("antennas", antennas));

        property_suites(suite);
        reproducibility(suite, siso);
    } catch (const std::exception& e) {
        std::printf("FAIL aborted: %s\n", e.what());
        return 2;
    }

    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s: %d of 10 criteria failed (%.0f s)\n", suite.failed ? "FAILED" : "OK", suite.failed, s);
    return suite.failed ? 1 : 0;
}
