#include "mncl/power.hpp"
#include "mncl/errors.hpp"

#include <algorithm>
#include <sstream>

namespace mncl {

PairSet::PairSet(std::initializer_list<int> indices) : PairSet(std::vector<int>(indices)) {}

PairSet::PairSet(std::vector<int> indices) : indices_(std::move(indices))
{
    std::sort(indices_.begin(), indices_.end());
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
        throw ContractError("pair set contains duplicate indices");
    if (!indices_.empty() && indices_.front() < 0)
        throw ContractError("pair set contains a negative index");
}

bool PairSet::contains(int pair) const { return std::binary_search(indices_.begin(), indices_.end(), pair); }

void PairSet::check_range(int pairs) const
{
    if (!indices_.empty() && indices_.back() >= pairs)
        throw ContractError("pair index " + std::to_string(indices_.back()) + " out of range for "
                            + std::to_string(pairs) + " pairs");
}

std::string PairSet::to_string() const
{
    std::ostringstream out;
    out << '{';
    for (std::size_t i = 0; i < indices_.size(); ++i)
        out << (i ? "," : "") << indices_[i] + 1;
    out << '}';
    return out.str();
}

double PowerVector::pair_total(int pair) const
{
    double total = 0.0;
    for (int l = 0; l < streams_; ++l)
        total += at(pair, l);
    return total;
}

LinkEvaluator::LinkEvaluator(const Scenario& scenario) : scenario_(scenario), channel_(scenario) {}

bool LinkEvaluator::meets_threshold(double sinr) const
{
    return sinr >= scenario_.params.sinr_threshold * (1.0 - 1e-12);
}

std::vector<LinkEvaluator::StreamState> LinkEvaluator::evaluate(const PairSet& active, const PowerVector& powers) const
{
    active.check_range(pair_count());
    const int K = pair_count();
    const int S = streams();
    const ChannelSet& ch = scenario_.channels;

    std::vector<StreamState> states;
    states.reserve(static_cast<std::size_t>(active.size()) * S);
    for (int k : active)
        for (int l = 0; l < S; ++l) {
            const Eigen::MatrixXcd phi = interference_covariance(scenario_, channel_, k, l, powers.values());
            const Eigen::VectorXcd& h = channel_.desired(k, l);
            Eigen::VectorXcd w = mmse_weight(phi, h).weight;

            // C_k{w, P}: interference leaking through the combiner.
            double leakage = 0.0;
            for (int i = 0; i < K; ++i)
                for (int li = 0; li < S; ++li) {
                    const double p = powers.at(i, li);
                    if (p == 0.0 || (i == k && li == l))
                        continue;
                    leakage += p * ch.gain(k, i) * std::norm(w.dot(channel_.vector(k, i, li)));
                }
            const double disturbance = leakage + ch.noise_power_mw * w.squaredNorm();
            const double sinr = powers.at(k, l) * ch.gain(k, k) * std::norm(w.dot(h)) / disturbance;
            states.push_back({std::move(w), disturbance, sinr});
        }
    return states;
}

PowerVector LinkEvaluator::step_from(const PairSet& active, const std::vector<StreamState>& states) const
{
    const ChannelSet& ch = scenario_.channels;
    const double gamma = scenario_.params.sinr_threshold;

    PowerVector next = zero_powers();
    std::size_t s = 0;
    for (int k : active)
        for (int l = 0; l < streams(); ++l, ++s)
            next.at(k, l) = gamma * states[s].disturbance / ch.gain(k, k);
    return next;
}

PowerVector LinkEvaluator::power_step(const PairSet& active, const PowerVector& powers) const
{
    return step_from(active, evaluate(active, powers));
}

bool LinkEvaluator::is_supported(const PairSet& active, const PowerVector& powers) const
{
    if (active.empty())
        return true;
    for (int k : active)
        if (powers.pair_total(k) > scenario_.params.max_power_mw)
            return false;
    const auto states = evaluate(active, powers);
    return std::all_of(states.begin(), states.end(), [&](const StreamState& st) { return meets_threshold(st.sinr); });
}

FeasibilityResult LinkEvaluator::idf(const PairSet& active) const
{
    active.check_range(pair_count());
    const SimParams& params = scenario_.params;

    FeasibilityResult result;
    PowerVector powers = zero_powers();
    if (active.empty()) {
        result.verdict = Verdict::Feasible;
        result.powers = std::move(powers);
        return result;
    }

    auto states = evaluate(active, powers);
    for (int n = 0;; ++n) {
        PowerVector next = step_from(active, states);
        result.iterations = n + 1;

        for (int k : active)
            for (int l = 0; l < streams(); ++l)
                if (next.at(k, l) < powers.at(k, l) * (1.0 - 1e-9))
                    result.nondecreasing = false;
        powers = std::move(next);

        // Criterion 1: a pair over the power cap can never come back under it.
        for (int k : active)
            if (powers.pair_total(k) > params.max_power_mw) {
                result.cause = InfeasibleCause::PowerExceeded;
                result.powers = std::move(powers);
                return result;
            }

        // Criterion 2: the current iterate already supports every pair.
        // These states also hold the weights for the next power update.
        states = evaluate(active, powers);
        const bool supported = std::all_of(states.begin(), states.end(),
                                           [&](const StreamState& st) { return meets_threshold(st.sinr); });
        if (supported) {
            result.verdict = Verdict::Feasible;
            result.powers = std::move(powers);
            for (auto& st : states) {
                result.weights.push_back(std::move(st.weight));
                result.sinrs.push_back(st.sinr);
            }
            return result;
        }

        // Criterion 3
        if (n + 1 >= params.max_iterations) {
            result.cause = InfeasibleCause::IterationLimit;
            result.powers = std::move(powers);
            return result;
        }
    }
}

} // namespace mncl
