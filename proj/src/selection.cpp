#include "mncl/selection.hpp"
#include "mncl/errors.hpp"

#include <numeric>

namespace mncl {

std::optional<PairSet> pairset_gen(const PairSet& current, Direction direction, int pairs)
{
    if (current.empty())
        throw ContractError("pairset_gen needs a nonempty pair set");
    current.check_range(pairs);

    std::vector<int> next = current.indices();
    const int last = pairs - 1;
    if (next.back() < last) {
        if (direction == Direction::Forward)
            next.push_back(next.back() + 1);
        else
            ++next.back();
        return PairSet(std::move(next));
    }
    if (next.size() == 1)
        return std::nullopt;
    next.pop_back();
    ++next.back();
    return PairSet(std::move(next));
}

SelectionResult bols(const FeasibilityOracle& feasible, int pairs, BolsOptions options)
{
    if (pairs < 1)
        throw ParameterError("pair count must be >= 1");

    SelectionResult result;
    PairSet candidate{0};
    for (;;) {
        Direction direction = Direction::Forward;
        if (!options.size_pruning || candidate.size() > result.n_max) {
            ++result.idf_calls;
            if (feasible(candidate)) {
                if (candidate.size() > result.n_max) {
                    result.n_max = candidate.size();
                    result.best_set = candidate;
                }
            } else {
                direction = Direction::Backward;
            }
        }
        // Candidates not larger than the best are never tested, only extended.

        auto next = pairset_gen(candidate, direction, pairs);
        if (!next)
            return result;
        candidate = std::move(*next);
    }
}

SelectionResult brute_force(const FeasibilityOracle& feasible, int pairs, int pair_cap)
{
    if (pairs < 1)
        throw ParameterError("pair count must be >= 1");
    if (pairs > pair_cap)
        throw ParameterError("brute-force search is capped at " + std::to_string(pair_cap) + " pairs");

    SelectionResult result;
    for (int size = pairs; size >= 1; --size) {
        // Lexicographic walk over size-element combinations.
        std::vector<int> combo(size);
        std::iota(combo.begin(), combo.end(), 0);
        for (;;) {
            PairSet candidate(combo);
            ++result.idf_calls;
            if (feasible(candidate)) {
                result.n_max = size;
                result.best_set = std::move(candidate);
                return result;
            }
            int i = size - 1;
            while (i >= 0 && combo[i] == pairs - size + i)
                --i;
            if (i < 0)
                break;
            ++combo[i];
            for (int j = i + 1; j < size; ++j)
                combo[j] = combo[j - 1] + 1;
        }
    }
    return result;
}

FeasibilityOracle idf_oracle(const LinkEvaluator& evaluator)
{
    return [&evaluator](const PairSet& set) { return evaluator.idf(set).feasible(); };
}

SelectionResult select_max_links(const Scenario& scenario, BolsOptions options)
{
    const LinkEvaluator evaluator(scenario);
    return bols(idf_oracle(evaluator), scenario.pair_count(), options);
}

} // namespace mncl
