#include "mncl/harness.hpp"
#include "mncl/errors.hpp"
#include "mncl/selection.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

namespace mncl {

void ExperimentConfig::validate() const
{
    params.validate();
    if (schemes.empty() || pairs.empty() || antennas.empty() || pt_dbm.empty())
        throw ParameterError("sweep lists must be nonempty");
    if (trials < 1)
        throw ParameterError("trial count must be >= 1");
    if (threads < 1)
        throw ParameterError("worker count must be >= 1");
    for (int k : pairs)
        if (k < 1)
            throw ParameterError("pair count must be >= 1");
    for (int m : antennas)
        if (m < 1)
            throw ParameterError("antenna count must be >= 1");
    for (double pt : pt_dbm)
        if (!std::isfinite(pt))
            throw ParameterError("power cap must be finite");
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body)
{
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                const std::lock_guard lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                next = count;
            }
        }
    };
    const std::size_t n_workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1,
                                                          std::max<std::size_t>(count, 1));
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 1; w < n_workers; ++w)
            pool.emplace_back(worker);
        worker();
    }
    if (first_error)
        std::rethrow_exception(first_error);
}

std::vector<Cell> enumerate_cells(const ExperimentConfig& config)
{
    std::vector<Cell> cells;
    for (Scheme scheme : config.schemes)
        for (int m : config.antennas)
            for (double pt : config.pt_dbm)
                for (int k : config.pairs)
                    cells.push_back({cells.size(), scheme, k, m, pt});
    return cells;
}

CellAggregate aggregate(const Cell& cell, const std::vector<TrialRecord>& records)
{
    CellAggregate agg;
    agg.cell = cell;
    agg.trials = static_cast<int>(records.size());
    if (records.empty())
        return agg;

    double sum = 0.0;
    double calls = 0.0;
    agg.running_mean.reserve(records.size());
    for (std::size_t t = 0; t < records.size(); ++t) {
        sum += records[t].n_max;
        calls += static_cast<double>(records[t].idf_calls);
        agg.running_mean.push_back(sum / static_cast<double>(t + 1));
    }
    const double n = static_cast<double>(records.size());
    agg.mean_nmax = sum / n;
    agg.mean_idf_calls = calls / n;
    if (records.size() > 1) {
        double ss = 0.0;
        for (const TrialRecord& r : records)
            ss += (r.n_max - agg.mean_nmax) * (r.n_max - agg.mean_nmax);
        agg.stderr_nmax = std::sqrt(ss / (n - 1.0) / n);
    }
    return agg;
}

RunResult run_trials(const ExperimentConfig& config)
{
    config.validate();
    const std::vector<Cell> cells = enumerate_cells(config);
    const std::size_t trials = static_cast<std::size_t>(config.trials);
    const std::size_t total = cells.size() * trials;

    std::vector<TrialRecord> slots(total);
    std::vector<std::optional<std::string>> errors(total);
    auto run_one = [&](std::size_t item) {
        const Cell& cell = cells[item / trials];
        const int t = static_cast<int>(item % trials);

        TrialRecord& rec = slots[item];
        rec.trial = t;
        rec.scheme = cell.scheme;
        rec.pairs = cell.pairs;
        rec.antennas = cell.antennas;
        rec.pt_dbm = cell.pt_dbm;

        SimParams params = config.params;
        params.set_max_power_dbm(cell.pt_dbm);
        const auto start = std::chrono::steady_clock::now();
        try {
            Rng rng = trial_stream(params.rng_seed, cell.index, static_cast<std::uint64_t>(t));
            const Scenario scenario = build_scenario(params, cell.pairs, {cell.scheme, cell.antennas}, rng);
            const SelectionResult sel = select_max_links(scenario);
            rec.n_max = sel.n_max;
            rec.idf_calls = sel.idf_calls;
        } catch (const NumericError& e) {
            errors[item] = e.what();
        }
        if (config.record_timing)
            rec.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    };

    parallel_for(total, config.threads, run_one);

    RunResult result;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        std::vector<TrialRecord> kept;
        int failed = 0;
        for (std::size_t t = 0; t < trials; ++t) {
            const std::size_t item = c * trials + t;
            if (errors[item]) {
                ++failed;
                result.failures.push_back("cell " + std::to_string(c) + " trial " + std::to_string(t) + ": "
                                          + *errors[item]);
                continue;
            }
            kept.push_back(slots[item]);
        }
        CellAggregate agg = aggregate(cells[c], kept);
        agg.failed = failed;
        result.failed_trials += failed;
        result.records.insert(result.records.end(), kept.begin(), kept.end());
        result.aggregates.push_back(std::move(agg));
    }
    if (result.failed_trials > 0 && !config.tolerate_failures)
        throw NumericError(std::to_string(result.failed_trials) + " trial(s) failed; first: " + result.failures.front());
    return result;
}

std::vector<ValidationCell> validate_search(const ExperimentConfig& config, int pair_cap)
{
    config.validate();
    for (int k : config.pairs)
        if (k > pair_cap)
            throw ParameterError("validation is capped at " + std::to_string(pair_cap) + " pairs");

    const std::vector<Cell> cells = enumerate_cells(config);
    const std::size_t trials = static_cast<std::size_t>(config.trials);

    struct Outcome {
        bool match = true;
        long bols_calls = 0;
        long brute_calls = 0;
    };
    std::vector<Outcome> outcomes(cells.size() * trials);
    parallel_for(outcomes.size(), config.threads, [&](std::size_t item) {
        const Cell& cell = cells[item / trials];
        SimParams params = config.params;
        params.set_max_power_dbm(cell.pt_dbm);
        Rng rng = trial_stream(params.rng_seed, cell.index, item % trials);
        const Scenario scenario = build_scenario(params, cell.pairs, {cell.scheme, cell.antennas}, rng);
        const LinkEvaluator evaluator(scenario);
        const FeasibilityOracle oracle = idf_oracle(evaluator);
        const SelectionResult fast = bols(oracle, cell.pairs);
        const SelectionResult slow = brute_force(oracle, cell.pairs, pair_cap);
        outcomes[item] = {fast.n_max == slow.n_max, fast.idf_calls, slow.idf_calls};
    });

    std::vector<ValidationCell> summary;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        ValidationCell v;
        v.cell = cells[c];
        v.scenarios = config.trials;
        for (std::size_t t = 0; t < trials; ++t) {
            const Outcome& o = outcomes[c * trials + t];
            v.mismatches += o.match ? 0 : 1;
            v.mean_bols_calls += static_cast<double>(o.bols_calls);
            v.mean_brute_calls += static_cast<double>(o.brute_calls);
        }
        v.mean_bols_calls /= static_cast<double>(trials);
        v.mean_brute_calls /= static_cast<double>(trials);
        summary.push_back(v);
    }
    return summary;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size())
        throw ContractError("fit_line: x and y lengths differ");
    const std::size_t n = x.size();
    if (n < 2)
        throw ParameterError("a line fit needs at least two points");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0)
        throw ParameterError("a line fit needs at least two distinct abscissae");

    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.points = static_cast<int>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        fit.rss += r * r;
    }
    return fit;
}

FitParams fit_two_stage(const std::vector<std::pair<int, double>>& curve, int antennas)
{
    if (antennas < 1)
        throw ParameterError("antenna count must be >= 1");

    std::vector<double> x1, y1, x2, y2;
    for (const auto& [k, c] : curve) {
        if (k >= 1 && k <= antennas) {
            x1.push_back(k);
            y1.push_back(c);
        } else if (k > antennas && k <= 15) {
            x2.push_back(k);
            y2.push_back(c);
        }
    }

    FitParams fit;
    fit.antennas = antennas;
    if (antennas == 1) {
        if (x1.size() != 1)
            throw ParameterError("the M = 1 fit needs exactly one point at K = 1");
        fit.diversity = {0.0, y1.front(), 0.0, 1};
    } else {
        fit.diversity = fit_line(x1, y1);
    }
    fit.multiuser = fit_line(x2, y2);
    return fit;
}

} // namespace mncl
