#include "mncl/mimo.hpp"
#include "mncl/errors.hpp"

#include <cmath>
#include <string>

namespace mncl {

namespace {

constexpr double kRayleighTolerance = 1e-12;
constexpr int kPowerIterationCap = 100000;

void normalize_phase(Eigen::VectorXcd& v)
{
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v(i));
        if (mag > 1e-9) {
            v *= std::conj(v(i)) / mag;
            v(i) = cdouble(v(i).real(), 0.0);
            return;
        }
    }
}

} // namespace

Eigen::VectorXcd beamforming_weight(const Eigen::MatrixXcd& channel)
{
    if (!channel.allFinite())
        throw NumericError("beamforming channel has non-finite entries");
    const Eigen::Index n = channel.cols();
    const Eigen::MatrixXcd gram = channel.adjoint() * channel;

    // Fixed, non-symmetric start so that no coordinate axis is missed.
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v(i) = cdouble(1.0 / static_cast<double>(i + 1), 0.25 / static_cast<double>(i + 2));
    v.normalize();

    double quotient = (v.adjoint() * gram * v)(0).real();
    for (int it = 0; it < kPowerIterationCap; ++it) {
        Eigen::VectorXcd next = gram * v;
        const double norm = next.norm();
        if (norm == 0.0) {
            // gram is the zero matrix; every unit vector is an eigenvector.
            normalize_phase(v);
            return v;
        }
        next /= norm;
        const double next_quotient = (next.adjoint() * gram * next)(0).real();
        v = std::move(next);
        if (std::abs(next_quotient - quotient) <= kRayleighTolerance * std::abs(next_quotient)) {
            normalize_phase(v);
            return v;
        }
        quotient = next_quotient;
    }
    throw NumericError("power iteration did not converge");
}

std::pair<Eigen::VectorXcd, Eigen::VectorXcd> stbc_stack(const Eigen::VectorXcd& h1, const Eigen::VectorXcd& h2)
{
    if (h1.size() != h2.size())
        throw ContractError("STBC antenna channels must have equal length");
    const Eigen::Index m = h1.size();
    Eigen::VectorXcd first(2 * m);
    Eigen::VectorXcd second(2 * m);
    first << h1, h2.conjugate();
    second << h2, -h1.conjugate();
    return {std::move(first), std::move(second)};
}

EffectiveChannel::EffectiveChannel(const Scenario& scenario)
    : pairs_(scenario.pair_count())
    , streams_(scenario.scheme.streams())
    , dimension_(scenario.scheme.dimension())
{
    const ChannelSet& ch = scenario.channels;
    if (ch.pair_count() != pairs_ || ch.rx_antennas() != scenario.scheme.antennas
        || ch.tx_antennas() != scenario.scheme.tx_antennas())
        throw ContractError("channel tensor does not match the scheme");

    vectors_.resize(static_cast<std::size_t>(pairs_) * pairs_ * streams_);
    auto slot = [&](int k, int i, int l) -> Eigen::VectorXcd& {
        return vectors_[(static_cast<std::size_t>(k) * pairs_ + i) * streams_ + l];
    };

    switch (scenario.scheme.scheme) {
    case Scheme::RxDiversity:
        for (int k = 0; k < pairs_; ++k)
            for (int i = 0; i < pairs_; ++i)
                slot(k, i, 0) = ch.fading(k, i, 0);
        break;
    case Scheme::Stbc:
        for (int k = 0; k < pairs_; ++k)
            for (int i = 0; i < pairs_; ++i) {
                auto [first, second] = stbc_stack(ch.fading(k, i, 0), ch.fading(k, i, 1));
                slot(k, i, 0) = std::move(first);
                slot(k, i, 1) = std::move(second);
            }
        break;
    case Scheme::Beamforming:
        precoders_.reserve(pairs_);
        for (int i = 0; i < pairs_; ++i)
            precoders_.push_back(beamforming_weight(ch.fading_matrix(i, i)));
        for (int k = 0; k < pairs_; ++k)
            for (int i = 0; i < pairs_; ++i)
                slot(k, i, 0) = ch.fading_matrix(k, i) * precoders_[i];
        break;
    }
}

Eigen::MatrixXcd interference_covariance(const Scenario& scenario, const EffectiveChannel& channel, int pair,
                                         int stream, std::span<const double> powers)
{
    const int K = channel.pair_count();
    const int S = channel.streams();
    if (static_cast<int>(powers.size()) != K * S)
        throw ContractError("power vector length " + std::to_string(powers.size()) + " does not match "
                            + std::to_string(K * S) + " streams");
    if (pair < 0 || pair >= K || stream < 0 || stream >= S)
        throw ContractError("stream index out of range");

    const int D = channel.dimension();
    Eigen::MatrixXcd phi = Eigen::MatrixXcd::Identity(D, D) * scenario.channels.noise_power_mw;
    for (int i = 0; i < K; ++i)
        for (int l = 0; l < S; ++l) {
            const double p = powers[static_cast<std::size_t>(i) * S + l];
            if (p == 0.0 || (i == pair && l == stream))
                continue;
            const Eigen::VectorXcd& h = channel.vector(pair, i, l);
            phi.selfadjointView<Eigen::Lower>().rankUpdate(h, p * scenario.channels.gain(pair, i));
        }
    // rankUpdate only touches the lower triangle.
    phi.triangularView<Eigen::StrictlyUpper>() = phi.adjoint();
    return phi;
}

MmseOutput mmse_weight(const Eigen::MatrixXcd& covariance, const Eigen::VectorXcd& desired)
{
    if (covariance.rows() != covariance.cols() || covariance.rows() != desired.size())
        throw ContractError("covariance and desired vector dimensions differ");

    const Eigen::LLT<Eigen::MatrixXcd> llt(covariance);
    if (llt.info() != Eigen::Success)
        throw NumericError("interference covariance is not positive definite");
    Eigen::VectorXcd solved = llt.solve(desired);
    const double gain = desired.dot(solved).real();
    if (!(gain > 0.0) || !std::isfinite(gain))
        throw NumericError("degenerate MMSE normalization h^H Phi^-1 h");
    return {solved / gain, gain};
}

double mmse_sinr(double power_mw, double desired_gain, const Eigen::VectorXcd& desired,
                 const Eigen::MatrixXcd& covariance)
{
    if (power_mw == 0.0)
        return 0.0;
    return power_mw * desired_gain * mmse_weight(covariance, desired).gain;
}

double combiner_sinr(double power_mw, double desired_gain, const Eigen::VectorXcd& desired,
                     const Eigen::VectorXcd& weight, const Eigen::MatrixXcd& covariance)
{
    const double signal = std::norm(weight.dot(desired));
    const double noise = weight.dot(covariance * weight).real();
    return power_mw * desired_gain * signal / noise;
}

} // namespace mncl
