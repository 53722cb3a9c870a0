#pragma once

namespace puckergrade::metrics {

// Physical seam measurements in millimetres.
struct PuckerMeasurement {
    double seam_thickness = 0.0;   // t_s
    double fabric_thickness = 0.0; // t
    double unraveled_length = 0.0; // l
    double sewn_length = 0.0;      // l_s
};

// Thickness-based seam pucker, percent: (t_s - 2t) / 2t * 100. Throws NonPositiveThickness unless t > 0.
[[nodiscard]] double sp_thickness(double seam_thickness, double fabric_thickness);

// Length-based seam pucker, percent: (l - l_s) / l_s * 100. Throws NonPositiveLength unless l_s > 0.
[[nodiscard]] double sp_length(double unraveled_length, double sewn_length);

[[nodiscard]] inline double sp_thickness(const PuckerMeasurement& m) {
    return sp_thickness(m.seam_thickness, m.fabric_thickness);
}
[[nodiscard]] inline double sp_length(const PuckerMeasurement& m) {
    return sp_length(m.unraveled_length, m.sewn_length);
}

} // namespace puckergrade::metrics
