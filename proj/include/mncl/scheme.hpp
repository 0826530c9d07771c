#pragma once

#include <string>
#include <string_view>

namespace mncl {

enum class Scheme {
    RxDiversity, // 1 x M, one stream
    Stbc,        // 2 x M Alamouti, two streams per pair
    Beamforming, // M x M dominant-eigenvector precoding, one stream
};

std::string_view scheme_name(Scheme scheme);
Scheme parse_scheme(std::string_view name);

struct SchemeConfig {
    Scheme scheme = Scheme::RxDiversity;
    int antennas = 1; // receive antennas M

    int streams() const { return scheme == Scheme::Stbc ? 2 : 1; }
    int tx_antennas() const
    {
        switch (scheme) {
        case Scheme::RxDiversity: return 1;
        case Scheme::Stbc: return 2;
        case Scheme::Beamforming: return antennas;
        }
        return 1;
    }
    // Length of the receive-side vectors the MMSE combiner works on.
    int dimension() const { return scheme == Scheme::Stbc ? 2 * antennas : antennas; }

    void validate() const;
};

} // namespace mncl
