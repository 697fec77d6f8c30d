#include "catbench/bo/acquisition.hpp"

#include "catbench/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace catbench::bo {

std::string_view to_string(AcquisitionKind k) {
    switch (k) {
    case AcquisitionKind::ei: return "ei";
    case AcquisitionKind::pi: return "pi";
    case AcquisitionKind::ucb: return "ucb";
    }
    return "ei";
}

AcquisitionKind acquisition_from_string(std::string_view s) {
    if (s == "ei" || s == "EI")
        return AcquisitionKind::ei;
    if (s == "pi" || s == "PI")
        return AcquisitionKind::pi;
    if (s == "ucb" || s == "UCB")
        return AcquisitionKind::ucb;
    throw ConfigError("unknown acquisition '" + std::string(s) + "'");
}

double standard_normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double acquisition_value(const AcquisitionSpec& spec, double mean, double stddev) {
    if (spec.kind == AcquisitionKind::ucb)
        return mean + std::sqrt(spec.ucb_beta) * stddev;
    const double gain = mean - spec.incumbent;
    if (!(stddev > 0.0)) {
        if (spec.kind == AcquisitionKind::ei)
            return std::max(0.0, gain);
        return gain > 0.0 ? 1.0 : 0.0;
    }
    const double z = gain / stddev;
    if (spec.kind == AcquisitionKind::pi)
        return standard_normal_cdf(z);
    return std::max(0.0, gain * standard_normal_cdf(z) + stddev * standard_normal_pdf(z));
}

double acquisition_value(const GPModel& model, const AcquisitionSpec& spec, const GPInput& candidate) {
    const auto p = model.predict(candidate);
    return acquisition_value(spec, p.mean, std::sqrt(p.variance));
}

} // namespace catbench::bo
