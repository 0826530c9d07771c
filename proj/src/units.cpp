#include "mncl/units.hpp"
#include "mncl/errors.hpp"
#include "mncl/scheme.hpp"

#include <cmath>
#include <string>

namespace mncl {

double db_to_ratio(double db) { return std::pow(10.0, db / 10.0); }

double ratio_to_db(double ratio) { return 10.0 * std::log10(ratio); }

std::string_view scheme_name(Scheme scheme)
{
    switch (scheme) {
    case Scheme::RxDiversity: return "rxdiv";
    case Scheme::Stbc: return "stbc";
    case Scheme::Beamforming: return "beamforming";
    }
    return "unknown";
}

Scheme parse_scheme(std::string_view name)
{
    if (name == "rxdiv") return Scheme::RxDiversity;
    if (name == "stbc") return Scheme::Stbc;
    if (name == "beamforming") return Scheme::Beamforming;
    throw ParameterError("unknown scheme '" + std::string(name) + "' (expected rxdiv|stbc|beamforming)");
}

void SchemeConfig::validate() const
{
    if (antennas < 1)
        throw ParameterError("receive antenna count must be >= 1");
}

} // namespace mncl
