#include "mncl/scenario.hpp"
#include "mncl/errors.hpp"
#include "mncl/units.hpp"

#include <json.hpp>

#include <cmath>
#include <numbers>

namespace mncl {

using nlohmann::json;

double SimParams::max_power_dbm() const { return mw_to_dbm(max_power_mw); }
void SimParams::set_max_power_dbm(double dbm) { max_power_mw = dbm_to_mw(dbm); }
double SimParams::sinr_threshold_db() const { return ratio_to_db(sinr_threshold); }
void SimParams::set_sinr_threshold_db(double db) { sinr_threshold = db_to_ratio(db); }

void SimParams::validate() const
{
    if (!(pathloss_exponent > 0.0))
        throw ParameterError("path-loss exponent must be > 0");
    if (!(reference_distance_m > 0.0))
        throw ParameterError("reference distance must be > 0");
    if (!(bandwidth_hz > 0.0))
        throw ParameterError("bandwidth must be > 0");
    if (!(max_power_mw > 0.0) || !std::isfinite(max_power_mw))
        throw ParameterError("maximum transmit power must be > 0 mW");
    if (!(sinr_threshold > 0.0) || !std::isfinite(sinr_threshold))
        throw ParameterError("SINR threshold must be > 0 (linear)");
    if (!(disk_radius_m >= reference_distance_m))
        throw ParameterError("disk radius must be >= the reference distance");
    if (max_iterations < 1)
        throw ParameterError("iteration limit must be >= 1");
    if (!(convergence_tolerance > 0.0))
        throw ParameterError("convergence tolerance must be > 0");
    if (!std::isfinite(reference_loss_db) || !std::isfinite(noise_psd_dbm_hz) || !std::isfinite(noise_figure_db))
        throw ParameterError("loss and noise parameters must be finite");
}

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

ChannelSet::ChannelSet(int pairs, int tx_antennas, int rx_antennas)
    : pairs_(pairs)
    , tx_antennas_(tx_antennas)
    , rx_antennas_(rx_antennas)
    , gains_(Eigen::MatrixXd::Zero(pairs, pairs))
    , fading_(static_cast<std::size_t>(pairs) * pairs * tx_antennas, Eigen::VectorXcd::Zero(rx_antennas))
{
}

Eigen::MatrixXcd ChannelSet::fading_matrix(int rx, int tx) const
{
    Eigen::MatrixXcd h(rx_antennas_, tx_antennas_);
    for (int m = 0; m < tx_antennas_; ++m)
        h.col(m) = fading(rx, tx, m);
    return h;
}

Rng trial_stream(std::uint64_t master_seed, std::uint64_t cell, std::uint64_t trial)
{
    std::seed_seq seq{
        static_cast<std::uint32_t>(master_seed),
        static_cast<std::uint32_t>(master_seed >> 32),
        static_cast<std::uint32_t>(cell),
        static_cast<std::uint32_t>(cell >> 32),
        static_cast<std::uint32_t>(trial),
        static_cast<std::uint32_t>(trial >> 32),
    };
    return Rng(seq);
}

Topology sample_topology(int pairs, double radius_m, double reference_distance_m, Rng& rng)
{
    if (pairs < 1)
        throw ParameterError("pair count must be >= 1");
    if (!(reference_distance_m > 0.0) || !(radius_m >= reference_distance_m))
        throw ParameterError("disk radius must be >= the reference distance");

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto draw = [&] {
        const double r = radius_m * std::sqrt(unit(rng));
        const double theta = 2.0 * std::numbers::pi * unit(rng);
        return Point{r * std::cos(theta), r * std::sin(theta)};
    };

    Topology topo;
    topo.tx.reserve(pairs);
    topo.rx.reserve(pairs);
    for (int k = 0; k < pairs; ++k) {
        topo.tx.push_back(draw());
        topo.rx.push_back(draw());
    }
    return topo;
}

double path_gain(double distance_m, const SimParams& params)
{
    if (!(distance_m > 0.0))
        throw ParameterError("distance must be > 0");
    const double d = std::max(distance_m, params.reference_distance_m);
    const double loss_db = params.reference_loss_db
        + 10.0 * params.pathloss_exponent * std::log10(d / params.reference_distance_m);
    return db_to_ratio(-loss_db);
}

Eigen::MatrixXd link_gains(const Topology& topology, const SimParams& params)
{
    const int K = topology.pair_count();
    Eigen::MatrixXd gains(K, K);
    for (int k = 0; k < K; ++k)
        for (int j = 0; j < K; ++j) {
            // Coincident nodes give d = 0; the clamp covers everything below d0.
            const double d = std::max(distance(topology.rx[k], topology.tx[j]), params.reference_distance_m);
            gains(k, j) = path_gain(d, params);
        }
    return gains;
}

double noise_power(const SimParams& params)
{
    if (!(params.bandwidth_hz > 0.0))
        throw ParameterError("bandwidth must be > 0");
    return dbm_to_mw(params.noise_psd_dbm_hz + 10.0 * std::log10(params.bandwidth_hz) + params.noise_figure_db);
}

ChannelSet sample_channels(int pairs, int tx_antennas, int rx_antennas, Rng& rng)
{
    if (pairs < 1 || tx_antennas < 1 || rx_antennas < 1)
        throw ParameterError("channel tensor dimensions must be >= 1");

    // CN(0,1): each quadrature component has variance 1/2.
    std::normal_distribution<double> component(0.0, std::sqrt(0.5));
    ChannelSet set(pairs, tx_antennas, rx_antennas);
    for (int k = 0; k < pairs; ++k)
        for (int j = 0; j < pairs; ++j)
            for (int m = 0; m < tx_antennas; ++m) {
                Eigen::VectorXcd& h = set.fading(k, j, m);
                for (int i = 0; i < rx_antennas; ++i) {
                    const double re = component(rng);
                    const double im = component(rng);
                    h(i) = cdouble(re, im);
                }
            }
    return set;
}

Scenario build_scenario(const SimParams& params, int pairs, const SchemeConfig& scheme, Rng& rng)
{
    params.validate();
    scheme.validate();

    Scenario sc;
    sc.params = params;
    sc.scheme = scheme;
    sc.topology = sample_topology(pairs, params.disk_radius_m, params.reference_distance_m, rng);
    sc.channels = sample_channels(pairs, scheme.tx_antennas(), scheme.antennas, rng);
    sc.channels.gains() = link_gains(sc.topology, params);
    sc.channels.noise_power_mw = noise_power(params);
    return sc;
}

namespace {

json params_to_json(const SimParams& p)
{
    return json{
        {"pathloss_exponent", p.pathloss_exponent},
        {"reference_distance_m", p.reference_distance_m},
        {"reference_loss_db", p.reference_loss_db},
        {"noise_psd_dbm_hz", p.noise_psd_dbm_hz},
        {"noise_figure_db", p.noise_figure_db},
        {"bandwidth_hz", p.bandwidth_hz},
        {"max_power_mw", p.max_power_mw},
        {"sinr_threshold", p.sinr_threshold},
        {"disk_radius_m", p.disk_radius_m},
        {"max_iterations", p.max_iterations},
        {"convergence_tolerance", p.convergence_tolerance},
        {"rng_seed", p.rng_seed},
    };
}

SimParams params_from_json(const json& j)
{
    SimParams p;
    p.pathloss_exponent = j.at("pathloss_exponent").get<double>();
    p.reference_distance_m = j.at("reference_distance_m").get<double>();
    p.reference_loss_db = j.at("reference_loss_db").get<double>();
    p.noise_psd_dbm_hz = j.at("noise_psd_dbm_hz").get<double>();
    p.noise_figure_db = j.at("noise_figure_db").get<double>();
    p.bandwidth_hz = j.at("bandwidth_hz").get<double>();
    p.max_power_mw = j.at("max_power_mw").get<double>();
    p.sinr_threshold = j.at("sinr_threshold").get<double>();
    p.disk_radius_m = j.at("disk_radius_m").get<double>();
    p.max_iterations = j.at("max_iterations").get<int>();
    p.convergence_tolerance = j.at("convergence_tolerance").get<double>();
    p.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    return p;
}

} // namespace

std::string scenario_to_json(const Scenario& sc)
{
    const int K = sc.pair_count();
    const ChannelSet& ch = sc.channels;

    json points = json::array();
    for (int k = 0; k < K; ++k)
        points.push_back({{"tx", {sc.topology.tx[k].x, sc.topology.tx[k].y}},
                          {"rx", {sc.topology.rx[k].x, sc.topology.rx[k].y}}});

    json gains = json::array();
    for (int k = 0; k < K; ++k) {
        json row = json::array();
        for (int j = 0; j < K; ++j)
            row.push_back(ch.gain(k, j));
        gains.push_back(row);
    }

    // fading[k][j][m] = [[re, im], ...] of length M
    json fading = json::array();
    for (int k = 0; k < K; ++k) {
        json per_rx = json::array();
        for (int j = 0; j < K; ++j) {
            json per_tx = json::array();
            for (int m = 0; m < ch.tx_antennas(); ++m) {
                json vec = json::array();
                for (const cdouble& z : ch.fading(k, j, m))
                    vec.push_back({z.real(), z.imag()});
                per_tx.push_back(vec);
            }
            per_rx.push_back(per_tx);
        }
        fading.push_back(per_rx);
    }

    json doc{
        {"record", "mncl.scenario"},
        {"pairs", K},
        {"scheme", std::string(scheme_name(sc.scheme.scheme))},
        {"rx_antennas", sc.scheme.antennas},
        {"tx_antennas", ch.tx_antennas()},
        {"params", params_to_json(sc.params)},
        {"noise_power_mw", ch.noise_power_mw},
        {"nodes", points},
        {"gains", gains},
        {"fading", fading},
    };
    return doc.dump();
}

Scenario scenario_from_json(const std::string& text)
{
    const json doc = json::parse(text);
    if (doc.value("record", "") != "mncl.scenario")
        throw ParameterError("not a scenario record");

    Scenario sc;
    sc.params = params_from_json(doc.at("params"));
    sc.scheme.scheme = parse_scheme(doc.at("scheme").get<std::string>());
    sc.scheme.antennas = doc.at("rx_antennas").get<int>();
    const int K = doc.at("pairs").get<int>();
    const int n_tx = doc.at("tx_antennas").get<int>();
    if (K < 1 || n_tx != sc.scheme.tx_antennas())
        throw ParameterError("scenario record dimensions are inconsistent");

    for (const json& node : doc.at("nodes")) {
        sc.topology.tx.push_back({node.at("tx")[0].get<double>(), node.at("tx")[1].get<double>()});
        sc.topology.rx.push_back({node.at("rx")[0].get<double>(), node.at("rx")[1].get<double>()});
    }
    sc.channels = ChannelSet(K, n_tx, sc.scheme.antennas);
    sc.channels.noise_power_mw = doc.at("noise_power_mw").get<double>();
    for (int k = 0; k < K; ++k)
        for (int j = 0; j < K; ++j) {
            sc.channels.gains()(k, j) = doc.at("gains")[k][j].get<double>();
            for (int m = 0; m < n_tx; ++m) {
                const json& vec = doc.at("fading")[k][j][m];
                Eigen::VectorXcd& h = sc.channels.fading(k, j, m);
                if (static_cast<int>(vec.size()) != sc.scheme.antennas)
                    throw ParameterError("fading vector length does not match the antenna count");
                for (int i = 0; i < sc.scheme.antennas; ++i)
                    h(i) = cdouble(vec[i][0].get<double>(), vec[i][1].get<double>());
            }
        }
    return sc;
}

} // namespace mncl
