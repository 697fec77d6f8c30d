#include "catbench/bo/featurization.hpp"

#include "catbench/error.hpp"
#include "catbench/space/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

namespace catbench::bo {

std::string_view to_string(FeaturizationMode m) { return m == FeaturizationMode::one_hot ? "one_hot" : "descriptors"; }

FeaturizationMode featurization_from_string(std::string_view s) {
    if (s == "one_hot" || s == "ohe" || s == "one-hot")
        return FeaturizationMode::one_hot;
    if (s == "descriptors" || s == "des")
        return FeaturizationMode::descriptors;
    throw ConfigError("unknown featurization '" + std::string(s) + "'");
}

namespace {

std::vector<std::vector<std::string>> split_csv(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string cell;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                cell += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cell += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            row.push_back(std::move(cell));
            cell.clear();
            any = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n')
                ++i;
            if (any || !cell.empty()) {
                row.push_back(std::move(cell));
                rows.push_back(std::move(row));
            }
            row.clear();
            cell.clear();
            any = false;
        } else {
            cell += c;
            any = true;
        }
    }
    if (any || !cell.empty()) {
        row.push_back(std::move(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::optional<double> parse_number(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    if (b == std::string::npos)
        return std::nullopt;
    double v = 0.0;
    const char* first = s.data() + b;
    const char* last = s.data() + e + 1;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v))
        return std::nullopt;
    return v;
}

double population_variance(const std::vector<double>& v, double& mean) {
    mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v)
        s += (x - mean) * (x - mean);
    return s / static_cast<double>(v.size());
}

ParameterFeatures select_features(const Parameter& param, const DescriptorTable& table) {
    const std::size_t n_opts = param.options.size();
    const std::size_t n_feat = table.feature_names.size();

    std::vector<std::vector<double>> columns;
    std::vector<std::size_t> candidate;
    std::vector<double> variance;
    for (std::size_t f = 0; f < n_feat; ++f) {
        std::vector<double> col;
        bool numeric = true;
        for (const auto& label : param.options) {
            auto it = table.rows.find(label);
            if (it == table.rows.end())
                throw ConfigError("descriptor table for '" + param.name + "' has no row for option '" + label + "'");
            if (it->second.size() != n_feat)
                throw ConfigError("descriptor row for '" + label + "' has the wrong number of cells");
            if (!it->second[f]) {
                numeric = false;
                break;
            }
            col.push_back(*it->second[f]);
        }
        if (!numeric)
            continue;
        double mean = 0.0;
        const double var = population_variance(col, mean);
        if (!(var > 1e-12))
            continue;
        candidate.push_back(f);
        variance.push_back(var);
        columns.push_back(std::move(col));
    }
    if (candidate.empty())
        throw ConfigError("no informative descriptors for parameter '" + param.name + "'");

    std::vector<std::size_t> order(candidate.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return variance[a] > variance[b]; });

    std::vector<std::size_t> kept;
    if (n_opts < kCorrelationMinOptions) {
        kept.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::min(order.size(), kMaxFeaturesPerParameter)));
    } else {
        std::vector<std::vector<double>> z(columns.size());
        for (std::size_t c = 0; c < columns.size(); ++c) {
            double mean = 0.0;
            const double sd = std::sqrt(population_variance(columns[c], mean));
            for (double v : columns[c])
                z[c].push_back((v - mean) / sd);
        }
        for (std::size_t c : order) {
            bool redundant = false;
            for (std::size_t k : kept) {
                double r = 0.0;
                for (std::size_t o = 0; o < n_opts; ++o)
                    r += z[c][o] * z[k][o];
                if (std::abs(r / static_cast<double>(n_opts)) > kCorrelationCutoff) {
                    redundant = true;
                    break;
                }
            }
            if (!redundant)
                kept.push_back(c);
            if (kept.size() == kMaxFeaturesPerParameter)
                break;
        }
    }
    std::sort(kept.begin(), kept.end());

    ParameterFeatures pf;
    pf.encoded.assign(n_opts, {});
    for (std::size_t c : kept) {
        double mean = 0.0;
        const double sd = std::sqrt(population_variance(columns[c], mean));
        pf.selected.push_back(candidate[c]);
        pf.selected_names.push_back(table.feature_names[candidate[c]]);
        pf.mean.push_back(mean);
        pf.stddev.push_back(sd);
        for (std::size_t o = 0; o < n_opts; ++o)
            pf.encoded[o].push_back((columns[c][o] - mean) / sd);
    }
    return pf;
}

} // namespace

DescriptorTable parse_descriptor_csv(std::string_view text) {
    auto rows = split_csv(text);
    if (rows.empty() || rows.front().size() < 2)
        throw ConfigError("descriptor CSV needs a header with a label column and at least one feature");
    DescriptorTable t;
    t.feature_names.assign(rows.front().begin() + 1, rows.front().end());
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != t.feature_names.size() + 1)
            throw ConfigError("descriptor CSV row " + std::to_string(r + 1) + " has " + std::to_string(row.size()) +
                              " cells, expected " + std::to_string(t.feature_names.size() + 1));
        std::vector<std::optional<double>> values;
        for (std::size_t c = 1; c < row.size(); ++c)
            values.push_back(parse_number(row[c]));
        if (!t.rows.emplace(row.front(), std::move(values)).second)
            throw ConfigError("descriptor CSV repeats option '" + row.front() + "'");
    }
    return t;
}

DescriptorTable load_descriptor_csv(const std::filesystem::path& path) {
    return parse_descriptor_csv(read_text_file(path));
}

std::size_t Featurization::width() const {
    if (mode == FeaturizationMode::one_hot)
        return option_counts.size();
    std::size_t w = 0;
    for (const auto& p : parameters)
        w += p.selected.size();
    return w;
}

std::vector<double> Featurization::encode(std::span<const OptionIndex> idx) const {
    std::vector<double> out;
    out.reserve(width());
    if (mode == FeaturizationMode::one_hot) {
        for (auto j : idx)
            out.push_back(static_cast<double>(j));
        return out;
    }
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const auto& row = parameters[i].encoded[idx[i]];
        out.insert(out.end(), row.begin(), row.end());
    }
    return out;
}

std::vector<double> Featurization::one_hot(std::span<const OptionIndex> idx) const {
    std::vector<double> out;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        std::vector<double> block(option_counts[i], 0.0);
        block[idx[i]] = 1.0;
        out.insert(out.end(), block.begin(), block.end());
    }
    return out;
}

Featurization build_featurization(const ParameterSpace& space, FeaturizationMode mode,
                                  const std::vector<DescriptorTable>* descriptors) {
    Featurization f;
    f.mode = mode;
    for (std::size_t i = 0; i < space.dimension(); ++i)
        f.option_counts.push_back(space.option_count(i));
    if (mode == FeaturizationMode::one_hot)
        return f;
    if (!descriptors || descriptors->size() != space.dimension())
        throw ConfigError("descriptors mode needs one descriptor table per parameter");
    for (std::size_t i = 0; i < space.dimension(); ++i)
        f.parameters.push_back(select_features(space.parameter(i), (*descriptors)[i]));
    return f;
}

} // namespace catbench::bo
