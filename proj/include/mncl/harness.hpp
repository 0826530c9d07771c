#pragma once

#include "mncl/scenario.hpp"
#include "mncl/scheme.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace mncl {

/// One Monte Carlo sweep: the cartesian product of schemes, antenna counts,
/// power caps and pair counts, each cell run for `trials` realizations.
struct ExperimentConfig {
    SimParams params;
    std::vector<Scheme> schemes{Scheme::Beamforming};
    std::vector<int> pairs{10};
    std::vector<int> antennas{4};
    std::vector<double> pt_dbm{20.0};
    int trials = 100;
    int threads = 1;
    // Wall-clock timing makes the per-trial CSV non-reproducible; off by default.
    bool record_timing = false;
    // Keep going past numeric failures (they are counted and excluded).
    bool tolerate_failures = false;
    std::string out_dir;

    void validate() const;
};

/// Sweep coordinates of one cell; `index` seeds its trial substreams.
struct Cell {
    std::size_t index = 0;
    Scheme scheme = Scheme::RxDiversity;
    int pairs = 0;
    int antennas = 0;
    double pt_dbm = 0.0;
};

/// Cells in sweep order: scheme, then antennas, then power cap, then pairs.
std::vector<Cell> enumerate_cells(const ExperimentConfig& config);

struct TrialRecord {
    int trial = 0;
    Scheme scheme = Scheme::RxDiversity;
    int pairs = 0;
    int antennas = 0;
    double pt_dbm = 0.0;
    int n_max = 0;
    long idf_calls = 0;
    double ms = 0.0;
};

struct CellAggregate {
    Cell cell;
    double mean_nmax = 0.0;
    double stderr_nmax = 0.0;
    double mean_idf_calls = 0.0;
    int trials = 0;
    int failed = 0;
    // Mean n_max over the first t+1 trials, for convergence plots.
    std::vector<double> running_mean;
};

struct RunResult {
    std::vector<TrialRecord> records; // cell order, then trial order
    std::vector<CellAggregate> aggregates;
    int failed_trials = 0;
    std::vector<std::string> failures;
};

/// Runs every cell of the sweep. Each trial draws from
/// trial_stream(seed, cell.index, trial), so results do not depend on the
/// worker count or on completion order.
///
/// Numeric failures abort the run with NumericError unless
/// `tolerate_failures` is set, in which case they are counted and excluded.
RunResult run_trials(const ExperimentConfig& config);

/// Mean, standard error and running mean of a series of n_max values.
CellAggregate aggregate(const Cell& cell, const std::vector<TrialRecord>& records);

struct ValidationCell {
    Cell cell;
    int scenarios = 0;
    int mismatches = 0;
    double mean_bols_calls = 0.0;
    double mean_brute_calls = 0.0;
};

/// Runs BOLS and brute-force search on the same IDF oracle for every trial of
/// every cell and counts scenarios where their n_max differ. Throws
/// ParameterError if a pair count exceeds `pair_cap`.
std::vector<ValidationCell> validate_search(const ExperimentConfig& config, int pair_cap = 15);

/// Runs body(i) for i in [0, count) on `threads` workers (the caller included).
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double rss = 0.0; // residual sum of squares
    int points = 0;
};

/// Ordinary least squares of y on x. Needs at least two distinct x values.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct FitParams {
    int antennas = 0;
    LineFit diversity;   // a1 + b1 K on 1 <= K <= M
    LineFit multiuser;   // a2 + b2 K on M+1 <= K <= 15
};

/// Two-segment fit of C(K, M); points outside 1..15 are ignored.
///
/// The segments are fitted independently. For M = 1 the first segment is the
/// single point K = 1, and the fit is pinned to a1 = 0, b1 = C(1, 1).
FitParams fit_two_stage(const std::vector<std::pair<int, double>>& curve, int antennas);

} // namespace mncl
