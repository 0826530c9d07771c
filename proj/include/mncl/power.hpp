#pragma once

#include "mncl/mimo.hpp"
#include "mncl/scenario.hpp"

#include <initializer_list>
#include <string>
#include <vector>

namespace mncl {

/// Sorted, duplicate-free set of zero-based pair indices.
class PairSet {
public:
    PairSet() = default;
    PairSet(std::initializer_list<int> indices);
    explicit PairSet(std::vector<int> indices);

    const std::vector<int>& indices() const { return indices_; }
    int size() const { return static_cast<int>(indices_.size()); }
    bool empty() const { return indices_.empty(); }
    bool contains(int pair) const;
    int max() const { return indices_.back(); }

    /// Throws ContractError unless every index lies in [0, pairs).
    void check_range(int pairs) const;

    /// One-based listing such as "{1,2,3}", for reports and diagnostics.
    std::string to_string() const;

    auto begin() const { return indices_.begin(); }
    auto end() const { return indices_.end(); }

    friend bool operator==(const PairSet&, const PairSet&) = default;

private:
    std::vector<int> indices_;
};

/// Per-pair, per-stream transmit powers in mW (index pair * streams + stream).
class PowerVector {
public:
    PowerVector() = default;
    PowerVector(int pairs, int streams) : streams_(streams), mw_(static_cast<std::size_t>(pairs) * streams, 0.0) {}

    int pair_count() const { return streams_ == 0 ? 0 : static_cast<int>(mw_.size()) / streams_; }
    int streams() const { return streams_; }

    double& at(int pair, int stream) { return mw_[static_cast<std::size_t>(pair) * streams_ + stream]; }
    double at(int pair, int stream) const { return mw_[static_cast<std::size_t>(pair) * streams_ + stream]; }
    double pair_total(int pair) const;

    std::span<const double> values() const { return mw_; }
    std::vector<double>& values() { return mw_; }

    friend bool operator==(const PowerVector&, const PowerVector&) = default;

private:
    int streams_ = 0;
    std::vector<double> mw_;
};

enum class Verdict { Feasible, Infeasible };
enum class InfeasibleCause { None, PowerExceeded, IterationLimit };

struct FeasibilityResult {
    Verdict verdict = Verdict::Infeasible;
    InfeasibleCause cause = InfeasibleCause::None;
    PowerVector powers;
    // Per active stream, in pair-set order then stream order.
    std::vector<Eigen::VectorXcd> weights;
    std::vector<double> sinrs;
    int iterations = 0;
    // False if any iterate decreased an active power by more than 1e-9 relative.
    bool nondecreasing = true;

    bool feasible() const { return verdict == Verdict::Feasible; }
};

/// Power control and feasibility decisions for one scenario.
///
/// Holds the scenario by reference together with its precomputed effective
/// channel; the scenario must outlive the object. All members are const and
/// safe to call concurrently.
class LinkEvaluator {
public:
    explicit LinkEvaluator(const Scenario& scenario);

    const Scenario& scenario() const { return scenario_; }
    const EffectiveChannel& channel() const { return channel_; }
    int pair_count() const { return scenario_.pair_count(); }
    int streams() const { return channel_.streams(); }

    PowerVector zero_powers() const { return PowerVector(pair_count(), streams()); }

    struct StreamState {
        Eigen::VectorXcd weight;
        // Interference leaking through the weight plus filtered noise.
        double disturbance = 0.0;
        double sinr = 0.0;
    };

    /// MMSE weight and SINR of every active stream at power state `powers`. The
    /// SINR is evaluated through the weight, P rho |w^H h|^2 / (C_k{w, P} + sigma^2 w^H w).
    std::vector<StreamState> evaluate(const PairSet& active, const PowerVector& powers) const;

    /// One application of the power-update mapping m(.): with the MMSE weight w
    /// computed at `powers`, P'(k,l) = gamma_T (C_k{w,P} + sigma^2 w^H w) / rho_kk,
    /// and zero outside `active`.
    PowerVector power_step(const PairSet& active, const PowerVector& powers) const;

    /// Every active stream meets gamma_T and every active pair's power sum is
    /// within P_T.
    bool is_supported(const PairSet& active, const PowerVector& powers) const;

    /// Iterative determination of feasibility from P^0 = 0.
    FeasibilityResult idf(const PairSet& active) const;

private:
    bool meets_threshold(double sinr) const;
    PowerVector step_from(const PairSet& active, const std::vector<StreamState>& states) const;

    const Scenario& scenario_;
    EffectiveChannel channel_;
};

} // namespace mncl
