#pragma once

#include "mncl/scheme.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace mncl {

using Rng = std::mt19937_64;
using cdouble = std::complex<double>;

/// Physical and numerical parameters of one simulation.
///
/// Powers are linear milliwatts and the SINR threshold is a linear ratio;
/// dB/dBm values only appear at the configuration boundary
/// (see `max_power_dbm()` and friends).
struct SimParams {
    double pathloss_exponent = 3.0;     // alpha
    double reference_distance_m = 1.0;  // d0
    double reference_loss_db = 46.0;    // L_P(d0)
    double noise_psd_dbm_hz = -174.0;   // eta_n
    double noise_figure_db = 4.0;       // F_n
    double bandwidth_hz = 1e6;          // W
    double max_power_mw = 100.0;        // P_T (20 dBm)
    double sinr_threshold = 10.0;       // gamma_T (10 dB)
    double disk_radius_m = 100.0;
    int max_iterations = 200;           // I_max
    double convergence_tolerance = 1e-8;
    std::uint64_t rng_seed = 1;

    double max_power_dbm() const;
    void set_max_power_dbm(double dbm);
    double sinr_threshold_db() const;
    void set_sinr_threshold_db(double db);

    /// Throws ParameterError when an invariant is violated.
    void validate() const;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

double distance(const Point& a, const Point& b);

struct Topology {
    std::vector<Point> tx;
    std::vector<Point> rx;

    int pair_count() const { return static_cast<int>(tx.size()); }
};

/// Large-scale gains, small-scale fading and noise for one realization.
class ChannelSet {
public:
    ChannelSet() = default;
    ChannelSet(int pairs, int tx_antennas, int rx_antennas);

    int pair_count() const { return pairs_; }
    int tx_antennas() const { return tx_antennas_; }
    int rx_antennas() const { return rx_antennas_; }

    /// rho_kj: power ratio from Tx node j to Rx node k.
    double gain(int rx, int tx) const { return gains_(rx, tx); }
    const Eigen::MatrixXd& gains() const { return gains_; }
    Eigen::MatrixXd& gains() { return gains_; }

    /// H_kj(m): M-vector from antenna m of Tx node j to Rx node k.
    const Eigen::VectorXcd& fading(int rx, int tx, int antenna) const
    {
        return fading_[index(rx, tx, antenna)];
    }
    Eigen::VectorXcd& fading(int rx, int tx, int antenna) { return fading_[index(rx, tx, antenna)]; }

    /// [H_kj(1), ..., H_kj(n_tx)] as an M x n_tx matrix.
    Eigen::MatrixXcd fading_matrix(int rx, int tx) const;

    double noise_power_mw = 0.0;

private:
    std::size_t index(int rx, int tx, int antenna) const
    {
        return (static_cast<std::size_t>(rx) * pairs_ + tx) * tx_antennas_ + antenna;
    }

    int pairs_ = 0;
    int tx_antennas_ = 0;
    int rx_antennas_ = 0;
    Eigen::MatrixXd gains_;
    std::vector<Eigen::VectorXcd> fading_;
};

struct Scenario {
    SimParams params;
    SchemeConfig scheme;
    Topology topology;
    ChannelSet channels;

    int pair_count() const { return topology.pair_count(); }
};

/// Independent stream for trial `trial` of sweep cell `cell`. The same triple
/// always yields the same stream, whatever thread runs it.
Rng trial_stream(std::uint64_t master_seed, std::uint64_t cell, std::uint64_t trial);

/// 2K points i.i.d. uniform over a disk centred on the origin.
Topology sample_topology(int pairs, double radius_m, double reference_distance_m, Rng& rng);

/// 10^{-L_P(d)/10}, with d clamped to the reference distance.
double path_gain(double distance_m, const SimParams& params);

/// rho(k, j) for every Rx node k and Tx node j.
Eigen::MatrixXd link_gains(const Topology& topology, const SimParams& params);

/// Thermal noise power in mW.
double noise_power(const SimParams& params);

/// CN(0,1) entries: a tensor of pairs x pairs x tx_antennas vectors of length rx_antennas.
ChannelSet sample_channels(int pairs, int tx_antennas, int rx_antennas, Rng& rng);

Scenario build_scenario(const SimParams& params, int pairs, const SchemeConfig& scheme, Rng& rng);

/// Self-describing JSON record, for debugging and replay.
std::string scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const std::string& text);

} // namespace mncl
