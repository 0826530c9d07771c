#pragma once

#include "mncl/power.hpp"

#include <functional>
#include <optional>

namespace mncl {

/// Feasibility predicate over pair sets. Subsets of feasible sets are assumed
/// to be feasible.
using FeasibilityOracle = std::function<bool(const PairSet&)>;

enum class Direction { Forward, Backward };

struct SelectionResult {
    int n_max = 0;
    PairSet best_set;
    long idf_calls = 0;
};

/// Next candidate of the depth-first backtracking walk over pair sets of
/// {0, ..., pairs-1}; std::nullopt once the walk is exhausted.
///
///   max < pairs-1, Forward  -> append max+1
///   max < pairs-1, Backward -> replace max by max+1
///   max = pairs-1, |U| > 1  -> drop max, then increment the new max
///   max = pairs-1, |U| = 1  -> exhausted
std::optional<PairSet> pairset_gen(const PairSet& current, Direction direction, int pairs);

struct BolsOptions {
    // Skip the oracle for candidates no larger than the best size found so far.
    bool size_pruning = true;
};

/// Backtracking search for the largest feasible pair set. Returns the first
/// maximum-size set met in depth-first order.
SelectionResult bols(const FeasibilityOracle& feasible, int pairs, BolsOptions options = {});

/// Exhaustive search, largest subsets first (lexicographic within a size),
/// stopping at the first feasible one. Throws ParameterError if `pairs`
/// exceeds `pair_cap`.
SelectionResult brute_force(const FeasibilityOracle& feasible, int pairs, int pair_cap = 15);

/// BOLS driven by IDF on a concrete scenario.
SelectionResult select_max_links(const Scenario& scenario, BolsOptions options = {});

/// Feasibility oracle backed by IDF. `evaluator` must outlive the oracle.
FeasibilityOracle idf_oracle(const LinkEvaluator& evaluator);

} // namespace mncl
