#pragma once

#include "catbench/space/param_space.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace catbench::bo {

enum class FeaturizationMode { one_hot, descriptors };

std::string_view to_string(FeaturizationMode m);
FeaturizationMode featurization_from_string(std::string_view s);

inline constexpr std::size_t kMaxFeaturesPerParameter = 10;
inline constexpr double kCorrelationCutoff = 0.95;
// Parameters with fewer options are filtered by variance instead of correlation.
inline constexpr std::size_t kCorrelationMinOptions = 5;

// Raw descriptor table for one parameter: option label -> feature row.
// Cells that failed to parse as finite numbers are std::nullopt.
struct DescriptorTable {
    std::vector<std::string> feature_names;
    std::map<std::string, std::vector<std::optional<double>>> rows;
};

// CSV: header "label,<feature>,<feature>,...", then one row per option.
DescriptorTable parse_descriptor_csv(std::string_view text);
DescriptorTable load_descriptor_csv(const std::filesystem::path& path);

struct ParameterFeatures {
    std::vector<std::size_t> selected;      // indices into the raw table's features
    std::vector<std::string> selected_names;
    std::vector<double> mean;               // per retained feature, over options
    std::vector<double> stddev;
    std::vector<std::vector<double>> encoded; // option -> standardized retained features
};

// one_hot: each parameter is an indicator block; the GP works on option
// indices with the Hamming kernel, which is the same distance.
// descriptors: per-parameter blocks of standardized descriptor features.
struct Featurization {
    FeaturizationMode mode = FeaturizationMode::one_hot;
    std::vector<std::size_t> option_counts;
    std::vector<ParameterFeatures> parameters; // descriptors mode only

    std::size_t width() const;
    // GP input for one assignment: option indices (one_hot) or the
    // concatenated descriptor blocks.
    std::vector<double> encode(std::span<const OptionIndex> idx) const;
    // Indicator columns for one_hot, exactly one hot per parameter.
    std::vector<double> one_hot(std::span<const OptionIndex> idx) const;
};

// Drops non-numeric and zero-variance features, then keeps at most 10 per
// parameter: by raw variance for parameters with < 5 options, otherwise by a
// greedy |r| > 0.95 correlation filter on standardized features (the
// higher-variance member survives) followed by the top 10 by raw variance.
// Retained features are standardized across the parameter's options.
// No objective data is consulted.
Featurization build_featurization(const ParameterSpace& space, FeaturizationMode mode,
                                  const std::vector<DescriptorTable>* descriptors = nullptr);

} // namespace catbench::bo
