#pragma once

#include "mncl/harness.hpp"

#include <string>
#include <vector>

namespace mncl {

inline constexpr const char* kVersion = "mncl 1.0.0";

/// Two-stage fit of one (scheme, M, P_T) curve.
struct CurveFit {
    Scheme scheme = Scheme::RxDiversity;
    int antennas = 0;
    double pt_dbm = 0.0;
    FitParams fit;
};

/// Fits every (scheme, M, P_T) group that has enough K points; groups that
/// cannot be fitted are skipped.
std::vector<CurveFit> fit_curves(const std::vector<CellAggregate>& aggregates);

/// trial,scheme,K,M,pt_dbm,n_max,idf_calls,ms
std::string trials_csv(const std::vector<TrialRecord>& records);
/// scheme,K,M,pt_dbm,mean_nmax,stderr,mean_idf_calls,trials
std::string aggregate_csv(const std::vector<CellAggregate>& aggregates);
/// Config echo, seed, per-cell summaries with running means, fits, version.
std::string summary_json(const ExperimentConfig& config, const RunResult& result, const std::vector<CurveFit>& fits);

/// Writes trials.csv, aggregate.csv and summary.json under `out_dir`
/// (created if missing). Throws std::runtime_error on I/O failure.
void emit_report(const std::string& out_dir, const ExperimentConfig& config, const RunResult& result,
                 const std::vector<CurveFit>& fits);

/// Parses an aggregate CSV back into cells (running means are not stored).
std::vector<CellAggregate> parse_aggregate_csv(const std::string& text);

/// Shortest round-trip decimal form of a double.
std::string format_number(double value);

} // namespace mncl
