#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "bincorr/model.hpp"

namespace bincorr {

// Model document:
//   {"kind": "parallel" | "serial" | "mixed" | "linear",
//    "n": <sources per chain>, "m": <chains, optional, default 1>,
//    "rho": [..n values..] | [[..n values..] x m]  (mixed, one array per chain)
//         | <number>                               (same value on every edge),
//    "A": ["0101", ...]                            (linear only, one string per row)}
// A scalar "rho" for a serial model leaves the first edge at 1.

nlohmann::json model_to_json(const ModelSpec& spec);
/// Throws InvalidSpec on schema or parameter errors.
ModelSpec model_from_json(const nlohmann::json& doc);
ModelSpec model_from_json_text(const std::string& text);
/// Throws IoError when the file cannot be read, InvalidSpec otherwise.
ModelSpec read_model_file(const std::filesystem::path& path);

}  // namespace bincorr
