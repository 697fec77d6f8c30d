#include "catbench/space/dataset_io.hpp"

#include "json_locate.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unistd.h>
#include <unordered_set>

namespace catbench {

using nlohmann::json;
using Pointer = json::json_pointer;

namespace {

class ManifestReader {
public:
    explicit ManifestReader(std::string_view text) : text_(text) {}

    BenchmarkDataset read() {
        json doc;
        try {
            doc = json::parse(text_);
        } catch (const json::parse_error& e) {
            throw DatasetFormatError({detail::line_of_offset(text_, e.byte == 0 ? 0 : e.byte - 1),
                                      "malformed JSON: " + std::string(e.what())});
        }
        if (!doc.is_object())
            fail(Pointer(), "manifest must be a JSON object");

        const auto name = require_string(doc, Pointer("/name"));
        std::string provenance;
        if (doc.contains("provenance"))
            provenance = require_string(doc, Pointer("/provenance"));
        bool selectivity = false;
        if (doc.contains("selectivity")) {
            if (!doc["selectivity"].is_boolean())
                fail(Pointer("/selectivity"), "'selectivity' must be a boolean");
            selectivity = doc["selectivity"].get<bool>();
        }

        ParameterSpace space = read_parameters(doc);
        auto objectives = read_objectives(doc);
        if (selectivity && objectives.size() < 2)
            fail(Pointer("/selectivity"), "selectivity needs (desired, undesired) objectives");

        BenchmarkDataset dataset(name, std::move(space), std::move(objectives), provenance, selectivity);
        read_rows(doc, dataset);
        return dataset;
    }

private:
    [[noreturn]] void fail(const Pointer& where, const std::string& message) const {
        throw DatasetFormatError({detail::line_of_pointer(text_, where), message});
    }

    const json& require(const json& doc, const Pointer& ptr) const {
        if (!doc.contains(ptr))
            fail(ptr.parent_pointer(), "missing required field '" + ptr.back() + "'");
        return doc.at(ptr);
    }

    std::string require_string(const json& doc, const Pointer& ptr) const {
        const auto& v = require(doc, ptr);
        if (!v.is_string() || v.get<std::string>().empty())
            fail(ptr, "'" + ptr.back() + "' must be a non-empty string");
        return v.get<std::string>();
    }

    const json& require_array(const json& doc, const Pointer& ptr, bool non_empty) const {
        const auto& v = require(doc, ptr);
        if (!v.is_array())
            fail(ptr, "'" + ptr.back() + "' must be an array");
        if (non_empty && v.empty())
            fail(ptr, "'" + ptr.back() + "' must not be empty");
        return v;
    }

    ParameterSpace read_parameters(const json& doc) const {
        const Pointer base("/parameters");
        const auto& arr = require_array(doc, base, true);
        std::vector<Parameter> params;
        std::unordered_set<std::string> names;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const Pointer at = base / i;
            if (!arr[i].is_object())
                fail(at, "parameter entry must be an object");
            Parameter p;
            p.name = require_string(doc, at / "name");
            if (!names.insert(p.name).second)
                fail(at / "name", "duplicate parameter name '" + p.name + "'");
            const auto& opts = require_array(doc, at / "options", true);
            std::unordered_set<std::string> seen;
            for (std::size_t j = 0; j < opts.size(); ++j) {
                if (!opts[j].is_string())
                    fail(at / "options" / j, "option labels must be strings");
                auto label = opts[j].get<std::string>();
                if (!seen.insert(label).second)
                    fail(at / "options" / j, "duplicate option '" + label + "' in parameter '" + p.name + "'");
                p.options.push_back(std::move(label));
            }
            if (p.options.size() < 2)
                fail(at / "options", "parameter '" + p.name + "' needs at least 2 options");
            params.push_back(std::move(p));
        }
        try {
            return ParameterSpace(std::move(params));
        } catch (const ConfigError& e) {
            fail(base, e.what());
        }
    }

    std::vector<ObjectiveSpec> read_objectives(const json& doc) const {
        const Pointer base("/objectives");
        const auto& arr = require_array(doc, base, true);
        std::vector<ObjectiveSpec> out;
        std::unordered_set<std::string> names;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const Pointer at = base / i;
            if (!arr[i].is_object())
                fail(at, "objective entry must be an object");
            ObjectiveSpec o;
            o.name = require_string(doc, at / "name");
            if (!names.insert(o.name).second)
                fail(at / "name", "duplicate objective name '" + o.name + "'");
            const auto goal = require_string(doc, at / "goal");
            if (goal != "maximize" && goal != "minimize")
                fail(at / "goal", "goal must be 'maximize' or 'minimize'");
            o.goal = goal_from_string(goal);
            if (arr[i].contains("tolerance")) {
                const auto& t = arr[i]["tolerance"];
                if (!t.is_number() || !(t.get<double>() >= 0.0 && t.get<double>() <= 1.0))
                    fail(at / "tolerance", "tolerance must be a number in [0, 1]");
                o.tolerance = t.get<double>();
            }
            out.push_back(std::move(o));
        }
        return out;
    }

    void read_rows(const json& doc, BenchmarkDataset& dataset) const {
        const Pointer base("/rows");
        const auto& rows = require_array(doc, base, true);
        const auto& space = dataset.space();
        const auto& objectives = dataset.objectives();
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const Pointer at = base / r;
            if (!rows[r].is_object())
                fail(at, "row must be an object");
            const auto& a = require(doc, at / "assignment");
            if (!a.is_object())
                fail(at / "assignment", "'assignment' must be an object");
            OptionIndices key(space.dimension());
            for (auto it = a.begin(); it != a.end(); ++it)
                if (!space.find_parameter(it.key()))
                    fail(at / "assignment" / it.key(), "unknown parameter '" + it.key() + "'");
            for (std::size_t i = 0; i < space.dimension(); ++i) {
                const auto& pname = space.parameter(i).name;
                if (!a.contains(pname))
                    fail(at / "assignment", "assignment is missing parameter '" + pname + "'");
                const auto& label = a[pname];
                if (!label.is_string())
                    fail(at / "assignment" / pname, "option label must be a string");
                auto j = space.find_option(i, label.get<std::string>());
                if (!j)
                    fail(at / "assignment" / pname,
                         "unknown option '" + label.get<std::string>() + "' for parameter '" + pname + "'");
                key[i] = *j;
            }

            const auto& v = require(doc, at / "values");
            if (!v.is_object())
                fail(at / "values", "'values' must be an object");
            for (auto it = v.begin(); it != v.end(); ++it) {
                bool known = false;
                for (const auto& o : objectives)
                    known = known || o.name == it.key();
                if (!known)
                    fail(at / "values" / it.key(), "unknown objective '" + it.key() + "'");
            }
            MeasurementVector values;
            for (const auto& o : objectives) {
                if (!v.contains(o.name))
                    fail(at / "values", "row is missing a value for objective '" + o.name + "'");
                const auto& x = v[o.name];
                if (!x.is_number() || !std::isfinite(x.get<double>()))
                    fail(at / "values" / o.name, "objective value must be a finite number");
                if (dataset.selectivity() && values.size() < 2 && x.get<double>() < 0.0)
                    fail(at / "values" / o.name, "selectivity yields must be nonnegative");
                values.push_back(x.get<double>());
            }
            dataset.add_measurement(key, std::move(values));
        }
    }

    std::string_view text_;
};

} // namespace

BenchmarkDataset parse_dataset(std::string_view text) { return ManifestReader(text).read(); }

BenchmarkDataset load_dataset(const std::filesystem::path& path) { return parse_dataset(read_text_file(path)); }

std::optional<Diagnostic> validate_dataset_text(std::string_view text) {
    try {
        parse_dataset(text);
    } catch (const DatasetFormatError& e) {
        return e.diagnostic();
    }
    return std::nullopt;
}

std::string serialize_dataset(const BenchmarkDataset& dataset) {
    nlohmann::ordered_json doc;
    doc["name"] = dataset.name();
    if (!dataset.provenance().empty())
        doc["provenance"] = dataset.provenance();
    if (dataset.selectivity())
        doc["selectivity"] = true;
    auto& params = doc["parameters"] = nlohmann::ordered_json::array();
    for (const auto& p : dataset.space().parameters())
        params.push_back({{"name", p.name}, {"options", p.options}});
    auto& objs = doc["objectives"] = nlohmann::ordered_json::array();
    for (const auto& o : dataset.objectives())
        objs.push_back({{"name", o.name}, {"goal", std::string(to_string(o.goal))}, {"tolerance", o.tolerance}});
    auto& rows = doc["rows"] = nlohmann::ordered_json::array();
    const auto& space = dataset.space();
    for (const auto& [flat, group] : dataset.table()) {
        const auto labels = space.labels_of(space.unflatten(flat)).labels;
        nlohmann::ordered_json assignment = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < labels.size(); ++i)
            assignment[space.parameter(i).name] = labels[i];
        for (const auto& m : group) {
            nlohmann::ordered_json values = nlohmann::ordered_json::object();
            for (std::size_t k = 0; k < m.size(); ++k)
                values[dataset.objectives()[k].name] = m[k];
            rows.push_back({{"assignment", assignment}, {"values", values}});
        }
    }
    return doc.dump(1) + "\n";
}

void save_dataset(const BenchmarkDataset& dataset, const std::filesystem::path& path) {
    write_text_file_atomic(path, serialize_dataset(dataset));
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file_atomic(const std::filesystem::path& path, std::string_view text) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    static std::atomic<unsigned> counter{0};
    tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw ConfigError("cannot write '" + tmp.string() + "'");
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        out.flush();
        if (!out)
            throw ConfigError("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

} // namespace catbench
