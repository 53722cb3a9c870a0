#include "puckergrade/metrics.hpp"

#include "puckergrade/error.hpp"

#include <cmath>

namespace puckergrade::metrics {

double sp_thickness(double seam_thickness, double fabric_thickness) {
    if (!(fabric_thickness > 0.0) || !std::isfinite(fabric_thickness)) {
        throw Error(ErrorCode::NonPositiveThickness, "fabric thickness must be > 0");
    }
    const double plies = 2.0 * fabric_thickness;
    return (seam_thickness - plies) / plies * 100.0;
}

double sp_length(double unraveled_length, double sewn_length) {
    if (!(sewn_length > 0.0) || !std::isfinite(sewn_length)) {
        throw Error(ErrorCode::NonPositiveLength, "sewn assembly length must be > 0");
    }
    return (unraveled_length - sewn_length) / sewn_length * 100.0;
}

} // namespace puckergrade::metrics
