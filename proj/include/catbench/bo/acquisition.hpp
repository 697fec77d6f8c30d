#pragma once

#include "catbench/bo/gp.hpp"

#include <string_view>

namespace catbench::bo {

enum class AcquisitionKind { ei, pi, ucb };

inline constexpr double kDefaultUcbBeta = 4.0;

std::string_view to_string(AcquisitionKind k);
AcquisitionKind acquisition_from_string(std::string_view s);

// Maximization convention; `incumbent` is the best observed value on the
// same (standardized) scale as the posterior.
struct AcquisitionSpec {
    AcquisitionKind kind = AcquisitionKind::ei;
    double ucb_beta = kDefaultUcbBeta;
    double incumbent = 0.0;
};

double standard_normal_pdf(double z);
double standard_normal_cdf(double z);

// EI = E[max(0, f - incumbent)], PI = P(f > incumbent), UCB = mean + sqrt(beta) sd.
// With sd = 0, EI = max(0, mean - incumbent) and PI = [mean > incumbent].
double acquisition_value(const AcquisitionSpec& spec, double mean, double stddev);

double acquisition_value(const GPModel& model, const AcquisitionSpec& spec, const GPInput& candidate);

} // namespace catbench::bo
