#pragma once

#include "catbench/error.hpp"
#include "catbench/space/dataset.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace catbench {

struct Diagnostic {
    std::size_t line = 0; // 1-based
    std::string message;
};

class DatasetFormatError : public Error {
public:
    explicit DatasetFormatError(Diagnostic d)
        : Error("line " + std::to_string(d.line) + ": " + d.message), diagnostic_(std::move(d)) {}
    const Diagnostic& diagnostic() const noexcept { return diagnostic_; }

private:
    Diagnostic diagnostic_;
};

// Manifest schema (UTF-8 JSON):
//   { "name": str, "provenance"?: str, "selectivity"?: bool,
//     "parameters": [ {"name": str, "options": [str, ...]}, ... ],
//     "objectives": [ {"name": str, "goal": "maximize"|"minimize", "tolerance"?: num}, ... ],
//     "rows": [ {"assignment": {param: option, ...}, "values": {objective: num, ...}}, ... ] }
// Rows sharing an assignment form a replicate group.
BenchmarkDataset parse_dataset(std::string_view text);
BenchmarkDataset load_dataset(const std::filesystem::path& path);

std::string serialize_dataset(const BenchmarkDataset& dataset);
void save_dataset(const BenchmarkDataset& dataset, const std::filesystem::path& path);

// First violation, or nullopt for a valid manifest.
std::optional<Diagnostic> validate_dataset_text(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
// write-temp-then-rename
void write_text_file_atomic(const std::filesystem::path& path, std::string_view text);

} // namespace catbench
