#include "mncl/report.hpp"
#include "mncl/errors.hpp"
#include "mncl/units.hpp"

#include <json.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

namespace mncl {

using nlohmann::ordered_json;

std::string format_number(double value)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc())
        return "nan";
    return std::string(buf, ptr);
}

namespace {

std::string fixed(double value, int digits)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, digits);
    return ec == std::errc() ? std::string(buf, ptr) : "nan";
}

void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out)
        throw std::runtime_error("write to '" + path.string() + "' failed");
}

ordered_json line_json(const LineFit& f)
{
    return {{"a", f.intercept}, {"b", f.slope}, {"rss", f.rss}, {"points", f.points}};
}

} // namespace

std::vector<CurveFit> fit_curves(const std::vector<CellAggregate>& aggregates)
{
    // Group by (scheme, M, P_T), preserving first-seen order.
    std::vector<std::tuple<Scheme, int, double>> order;
    std::map<std::tuple<Scheme, int, double>, std::vector<std::pair<int, double>>> curves;
    for (const CellAggregate& agg : aggregates) {
        if (agg.trials == 0)
            continue;
        const auto key = std::make_tuple(agg.cell.scheme, agg.cell.antennas, agg.cell.pt_dbm);
        if (!curves.contains(key))
            order.push_back(key);
        curves[key].emplace_back(agg.cell.pairs, agg.mean_nmax);
    }

    std::vector<CurveFit> fits;
    for (const auto& key : order) {
        const auto& [scheme, m, pt] = key;
        try {
            fits.push_back({scheme, m, pt, fit_two_stage(curves[key], m)});
        } catch (const ParameterError&) {
            // Not enough K points on one of the segments.
        }
    }
    return fits;
}

std::string trials_csv(const std::vector<TrialRecord>& records)
{
    std::string out = "trial,scheme,K,M,pt_dbm,n_max,idf_calls,ms\n";
    for (const TrialRecord& r : records) {
        out += std::to_string(r.trial) + ',' + std::string(scheme_name(r.scheme)) + ',' + std::to_string(r.pairs) + ','
            + std::to_string(r.antennas) + ',' + format_number(r.pt_dbm) + ',' + std::to_string(r.n_max) + ','
            + std::to_string(r.idf_calls) + ',' + fixed(r.ms, 3) + '\n';
    }
    return out;
}

std::string aggregate_csv(const std::vector<CellAggregate>& aggregates)
{
    std::string out = "scheme,K,M,pt_dbm,mean_nmax,stderr,mean_idf_calls,trials\n";
    for (const CellAggregate& a : aggregates) {
        out += std::string(scheme_name(a.cell.scheme)) + ',' + std::to_string(a.cell.pairs) + ','
            + std::to_string(a.cell.antennas) + ',' + format_number(a.cell.pt_dbm) + ',' + format_number(a.mean_nmax)
            + ',' + format_number(a.stderr_nmax) + ',' + format_number(a.mean_idf_calls) + ','
            + std::to_string(a.trials) + '\n';
    }
    return out;
}

std::string summary_json(const ExperimentConfig& config, const RunResult& result, const std::vector<CurveFit>& fits)
{
    const SimParams& p = config.params;
    ordered_json schemes = ordered_json::array();
    for (Scheme s : config.schemes)
        schemes.push_back(std::string(scheme_name(s)));

    ordered_json pt_mw = ordered_json::array();
    for (double pt : config.pt_dbm)
        pt_mw.push_back(dbm_to_mw(pt));

    ordered_json doc;
    doc["version"] = kVersion;
    doc["seed"] = p.rng_seed;
    doc["config"] = {
        {"schemes", schemes},
        {"pairs", config.pairs},
        {"antennas", config.antennas},
        {"pt_dbm", config.pt_dbm},
        {"pt_mw", pt_mw},
        {"trials", config.trials},
        {"sinr_db", p.sinr_threshold_db()},
        {"sinr_linear", p.sinr_threshold},
        {"radius_m", p.disk_radius_m},
        {"imax", p.max_iterations},
        {"tolerance", p.convergence_tolerance},
        {"pathloss_exponent", p.pathloss_exponent},
        {"reference_distance_m", p.reference_distance_m},
        {"reference_loss_db", p.reference_loss_db},
        {"noise_psd_dbm_hz", p.noise_psd_dbm_hz},
        {"noise_figure_db", p.noise_figure_db},
        {"bandwidth_hz", p.bandwidth_hz},
        {"noise_power_dbm", mw_to_dbm(noise_power(p))},
        {"record_timing", config.record_timing},
    };
    doc["empty_run"] = result.records.empty();
    doc["records"] = result.records.size();
    doc["failed_trials"] = result.failed_trials;

    ordered_json cells = ordered_json::array();
    for (const CellAggregate& a : result.aggregates) {
        cells.push_back({
            {"scheme", std::string(scheme_name(a.cell.scheme))},
            {"K", a.cell.pairs},
            {"M", a.cell.antennas},
            {"pt_dbm", a.cell.pt_dbm},
            {"mean_nmax", a.mean_nmax},
            {"stderr", a.stderr_nmax},
            {"mean_idf_calls", a.mean_idf_calls},
            {"trials", a.trials},
            {"failed", a.failed},
            {"running_mean", a.running_mean},
        });
    }
    doc["cells"] = cells;

    ordered_json fit_list = ordered_json::array();
    for (const CurveFit& f : fits) {
        fit_list.push_back({
            {"scheme", std::string(scheme_name(f.scheme))},
            {"M", f.antennas},
            {"pt_dbm", f.pt_dbm},
            {"a1", f.fit.diversity.intercept},
            {"b1", f.fit.diversity.slope},
            {"a2", f.fit.multiuser.intercept},
            {"b2", f.fit.multiuser.slope},
            {"segment1", line_json(f.fit.diversity)},
            {"segment2", line_json(f.fit.multiuser)},
        });
    }
    doc["fits"] = fit_list;
    return doc.dump(2) + '\n';
}

void emit_report(const std::string& out_dir, const ExperimentConfig& config, const RunResult& result,
                 const std::vector<CurveFit>& fits)
{
    const std::filesystem::path dir(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory '" + out_dir + "': " + ec.message());
    write_file(dir / "trials.csv", trials_csv(result.records));
    write_file(dir / "aggregate.csv", aggregate_csv(result.aggregates));
    write_file(dir / "summary.json", summary_json(config, result, fits));
}

std::vector<CellAggregate> parse_aggregate_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw ParameterError("aggregate CSV is empty");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != "scheme,K,M,pt_dbm,mean_nmax,stderr,mean_idf_calls,trials")
        throw ParameterError("unexpected aggregate CSV header: " + line);

    std::vector<CellAggregate> cells;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::vector<std::string> fields;
        std::istringstream row(line);
        for (std::string f; std::getline(row, f, ',');)
            fields.push_back(f);
        if (fields.size() != 8)
            throw ParameterError("aggregate CSV line " + std::to_string(line_no) + ": expected 8 fields");
        try {
            CellAggregate a;
            a.cell.index = cells.size();
            a.cell.scheme = parse_scheme(fields[0]);
            a.cell.pairs = std::stoi(fields[1]);
            a.cell.antennas = std::stoi(fields[2]);
            a.cell.pt_dbm = std::stod(fields[3]);
            a.mean_nmax = std::stod(fields[4]);
            a.stderr_nmax = std::stod(fields[5]);
            a.mean_idf_calls = std::stod(fields[6]);
            a.trials = std::stoi(fields[7]);
            cells.push_back(std::move(a));
        } catch (const ParameterError&) {
            throw;
        } catch (const std::logic_error&) {
            throw ParameterError("aggregate CSV line " + std::to_string(line_no) + ": malformed number");
        }
    }
    return cells;
}

} // namespace mncl
