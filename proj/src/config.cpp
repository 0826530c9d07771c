#include "mncl/config.hpp"
#include "mncl/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace mncl {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos)
            return parts;
        start = pos + 1;
    }
}

template <typename T>
T parse_number(std::string_view text, std::string_view what)
{
    text = trim(text);
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw ParameterError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
    return value;
}

bool parse_bool(std::string_view text)
{
    text = trim(text);
    if (text == "1" || text == "true" || text == "yes" || text == "on")
        return true;
    if (text == "0" || text == "false" || text == "no" || text == "off")
        return false;
    throw ParameterError("invalid boolean: '" + std::string(text) + "'");
}

std::string normalize_key(std::string_view key)
{
    std::string k(trim(key));
    std::replace(k.begin(), k.end(), '-', '_');
    return k;
}

} // namespace

Settings parse_settings(std::string_view text)
{
    Settings settings;
    int line_no = 0;
    for (std::string_view line : split(text, '\n')) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ParameterError("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string_view key = trim(line.substr(0, eq));
        if (key.empty())
            throw ParameterError("config line " + std::to_string(line_no) + ": empty key");
        settings.emplace_back(std::string(key), std::string(trim(line.substr(eq + 1))));
    }
    return settings;
}

Settings load_settings(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParameterError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_settings(buf.str());
}

std::vector<int> parse_int_list(std::string_view text)
{
    std::vector<int> values;
    for (std::string_view item : split(text, ',')) {
        if (item.empty())
            throw ParameterError("empty entry in list '" + std::string(text) + "'");
        // A range "a-b" never starts with '-'; the lists here are non-negative counts.
        if (const auto dash = item.find('-', 1); dash != std::string_view::npos) {
            const int lo = parse_number<int>(item.substr(0, dash), "range start");
            const int hi = parse_number<int>(item.substr(dash + 1), "range end");
            if (hi < lo)
                throw ParameterError("descending range '" + std::string(item) + "'");
            for (int v = lo; v <= hi; ++v)
                values.push_back(v);
        } else {
            values.push_back(parse_number<int>(item, "integer"));
        }
    }
    return values;
}

std::vector<double> parse_double_list(std::string_view text)
{
    std::vector<double> values;
    for (std::string_view item : split(text, ','))
        values.push_back(parse_number<double>(item, "number"));
    return values;
}

std::vector<Scheme> parse_scheme_list(std::string_view text)
{
    if (trim(text) == "all")
        return {Scheme::RxDiversity, Scheme::Stbc, Scheme::Beamforming};
    std::vector<Scheme> schemes;
    for (std::string_view item : split(text, ','))
        schemes.push_back(parse_scheme(item));
    return schemes;
}

void apply_setting(ExperimentConfig& config, std::string_view raw_key, std::string_view value)
{
    const std::string key = normalize_key(raw_key);
    SimParams& p = config.params;

    if (key == "pairs")
        config.pairs = parse_int_list(value);
    else if (key == "antennas")
        config.antennas = parse_int_list(value);
    else if (key == "scheme" || key == "schemes")
        config.schemes = parse_scheme_list(value);
    else if (key == "pt_dbm")
        config.pt_dbm = parse_double_list(value);
    else if (key == "trials")
        config.trials = parse_number<int>(value, "trial count");
    else if (key == "threads")
        config.threads = parse_number<int>(value, "worker count");
    else if (key == "seed")
        p.rng_seed = parse_number<std::uint64_t>(value, "seed");
    else if (key == "radius_m")
        p.disk_radius_m = parse_number<double>(value, "radius");
    else if (key == "sinr_db")
        p.set_sinr_threshold_db(parse_number<double>(value, "SINR threshold"));
    else if (key == "imax")
        p.max_iterations = parse_number<int>(value, "iteration limit");
    else if (key == "tolerance")
        p.convergence_tolerance = parse_number<double>(value, "tolerance");
    else if (key == "pathloss_exponent")
        p.pathloss_exponent = parse_number<double>(value, "path-loss exponent");
    else if (key == "reference_distance_m")
        p.reference_distance_m = parse_number<double>(value, "reference distance");
    else if (key == "reference_loss_db")
        p.reference_loss_db = parse_number<double>(value, "reference loss");
    else if (key == "noise_psd_dbm_hz")
        p.noise_psd_dbm_hz = parse_number<double>(value, "noise PSD");
    else if (key == "noise_figure_db")
        p.noise_figure_db = parse_number<double>(value, "noise figure");
    else if (key == "bandwidth_hz")
        p.bandwidth_hz = parse_number<double>(value, "bandwidth");
    else if (key == "record_timing")
        config.record_timing = parse_bool(value);
    else if (key == "out")
        config.out_dir = std::string(trim(value));
    else
        throw ParameterError("unknown setting '" + std::string(raw_key) + "'");
}

void apply_settings(ExperimentConfig& config, const Settings& settings)
{
    for (const auto& [key, value] : settings)
        apply_setting(config, key, value);
}

} // namespace mncl
