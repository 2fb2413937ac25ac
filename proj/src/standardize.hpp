#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "ouhf/error.hpp"

namespace ouhf::detail {

// Values re-expressed as (x - x[0]) / 2^k with 2^k the power of two nearest the
// root-mean-square deviation from x[0]. Subtracting a nearby value and dividing by
// a power of two are exact, so shifting or rescaling the input by representable
// amounts leaves the standardized data bit-identical.
struct Standardized {
    std::vector<double> z;
    double center = 0.0;
    double scale = 1.0;
};

inline Standardized standardize(std::span<const double> x) {
    Standardized s;
    s.center = x[0];
    double ss = 0.0;
    for (double v : x) ss += (v - s.center) * (v - s.center);
    const double rms = std::sqrt(ss / static_cast<double>(x.size()));
    if (!(rms > 0.0)) throw Error(ErrorKind::DegenerateInput, "series is constant");
    s.scale = std::exp2(std::round(std::log2(rms)));
    s.z.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) s.z[i] = (x[i] - s.center) / s.scale;
    return s;
}

}  // namespace ouhf::detail
