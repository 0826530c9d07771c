#pragma once

#include "mncl/scenario.hpp"

#include <Eigen/Dense>

#include <span>
#include <utility>
#include <vector>

namespace mncl {

/// Dominant eigenvector of H^H H by power iteration.
///
/// The result has unit norm and its first component with magnitude above
/// 1e-9 is real and nonnegative. Throws NumericError if the Rayleigh quotient
/// has not settled to 1e-12 relative within the iteration cap.
Eigen::VectorXcd beamforming_weight(const Eigen::MatrixXcd& channel);

/// Alamouti stacking of the two per-antenna channels of one link:
/// first = [h1; conj(h2)], second = [h2; -conj(h1)].
std::pair<Eigen::VectorXcd, Eigen::VectorXcd> stbc_stack(const Eigen::VectorXcd& h1, const Eigen::VectorXcd& h2);

/// Receive-side vectors for every (receiver, transmitter, stream) triple of a
/// scenario, after the scheme's transmit processing.
///
/// For beamforming, the vector seen at receiver k from transmitter i is
/// H_ki u_i, i.e. it uses the interferer's own precoder.
class EffectiveChannel {
public:
    explicit EffectiveChannel(const Scenario& scenario);

    int pair_count() const { return pairs_; }
    int streams() const { return streams_; }
    int dimension() const { return dimension_; }

    const Eigen::VectorXcd& vector(int rx, int tx, int stream) const
    {
        return vectors_[(static_cast<std::size_t>(rx) * pairs_ + tx) * streams_ + stream];
    }
    const Eigen::VectorXcd& desired(int pair, int stream) const { return vector(pair, pair, stream); }

    /// Transmit precoders (beamforming only; empty otherwise).
    const std::vector<Eigen::VectorXcd>& precoders() const { return precoders_; }

private:
    int pairs_ = 0;
    int streams_ = 1;
    int dimension_ = 1;
    std::vector<Eigen::VectorXcd> vectors_;
    std::vector<Eigen::VectorXcd> precoders_;
};

/// Interference-plus-noise covariance seen by stream `stream` of pair `pair`.
///
/// `powers` holds pair-major per-stream powers (index pair * streams + stream)
/// in mW; inactive pairs carry zero. Every stream other than the desired one
/// contributes P * rho * h h^H, including the pair's own other STBC stream.
Eigen::MatrixXcd interference_covariance(const Scenario& scenario, const EffectiveChannel& channel, int pair,
                                         int stream, std::span<const double> powers);

struct MmseOutput {
    Eigen::VectorXcd weight;
    // h^H Phi^{-1} h; SINR = P * rho * gain.
    double gain = 0.0;
};

/// MMSE combiner w = Phi^{-1} h / (h^H Phi^{-1} h), via a Cholesky solve.
MmseOutput mmse_weight(const Eigen::MatrixXcd& covariance, const Eigen::VectorXcd& desired);

/// P rho h^H Phi^{-1} h.
double mmse_sinr(double power_mw, double desired_gain, const Eigen::VectorXcd& desired,
                 const Eigen::MatrixXcd& covariance);

/// SINR of an arbitrary combiner: P rho |w^H h|^2 / (w^H Phi w).
double combiner_sinr(double power_mw, double desired_gain, const Eigen::VectorXcd& desired,
                     const Eigen::VectorXcd& weight, const Eigen::MatrixXcd& covariance);

} // namespace mncl
