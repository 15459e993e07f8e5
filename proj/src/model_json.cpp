#include "bincorr/model_json.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "bincorr/error.hpp"

namespace bincorr {
namespace {

using nlohmann::json;

std::size_t count_field(const json& doc, const char* key, std::size_t fallback, bool required) {
  if (!doc.contains(key)) {
    if (required) throw InvalidSpec(std::string("model: missing field '") + key + "'");
    return fallback;
  }
  const auto& v = doc.at(key);
  if (!v.is_number_unsigned() || v.get<std::size_t>() == 0) {
    throw InvalidSpec(std::string("model: '") + key + "' must be a positive integer");
  }
  return v.get<std::size_t>();
}

std::vector<double> number_array(const json& v, std::size_t expected, const std::string& what) {
  if (!v.is_array()) throw InvalidSpec("model: " + what + " must be an array of numbers");
  if (v.size() != expected) {
    throw InvalidSpec("model: " + what + " has " + std::to_string(v.size()) +
                      " entries, expected " + std::to_string(expected));
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_number()) throw InvalidSpec("model: " + what + " must contain only numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

}  // namespace

json model_to_json(const ModelSpec& spec) {
  json doc;
  doc["kind"] = std::string(to_string(spec.kind()));
  doc["n"] = spec.n();
  doc["m"] = spec.m();
  const auto rho = spec.rho();
  if (spec.kind() == ModelKind::kMixed) {
    json chains = json::array();
    for (std::size_t j = 0; j < spec.m(); ++j) {
      chains.push_back(std::vector<double>(rho.begin() + static_cast<std::ptrdiff_t>(j * spec.n()),
                                           rho.begin() + static_cast<std::ptrdiff_t>((j + 1) * spec.n())));
    }
    doc["rho"] = std::move(chains);
  } else {
    doc["rho"] = std::vector<double>(rho.begin(), rho.end());
  }
  if (spec.matrix()) doc["A"] = spec.matrix()->to_strings();
  return doc;
}

ModelSpec model_from_json(const json& doc) {
  if (!doc.is_object()) throw InvalidSpec("model: document must be a JSON object");
  if (!doc.contains("kind") || !doc.at("kind").is_string()) {
    throw InvalidSpec("model: missing string field 'kind'");
  }
  const ModelKind kind = model_kind_from_string(doc.at("kind").get<std::string>());
  const std::size_t n = count_field(doc, "n", 0, true);
  const std::size_t m = count_field(doc, "m", 1, false);
  if (kind != ModelKind::kMixed && m != 1) {
    throw InvalidSpec("model: 'm' must be 1 for a " + std::string(to_string(kind)) + " model");
  }
  if (kind != ModelKind::kLinear && doc.contains("A")) {
    throw InvalidSpec("model: 'A' is only valid for the linear model");
  }
  if (!doc.contains("rho")) throw InvalidSpec("model: missing field 'rho'");
  const json& rho = doc.at("rho");

  std::vector<std::vector<double>> chains;
  if (rho.is_number()) {
    chains.assign(m, std::vector<double>(n, rho.get<double>()));
    if (kind == ModelKind::kSerial) chains[0][0] = 1.0;
  } else if (kind == ModelKind::kMixed) {
    if (!rho.is_array() || rho.size() != m) {
      throw InvalidSpec("model: mixed 'rho' must be an array of " + std::to_string(m) +
                        " chains");
    }
    for (std::size_t j = 0; j < m; ++j) {
      chains.push_back(number_array(rho[j], n, "rho[" + std::to_string(j) + "]"));
    }
  } else {
    chains.push_back(number_array(rho, n, "rho"));
  }

  try {
    switch (kind) {
      case ModelKind::kParallel:
        return ModelSpec::parallel(chains[0]);
      case ModelKind::kSerial:
        return ModelSpec::serial(chains[0]);
      case ModelKind::kMixed:
        return ModelSpec::mixed(chains);
      case ModelKind::kLinear: {
        if (!doc.contains("A")) throw InvalidSpec("model: linear model requires 'A'");
        const json& a = doc.at("A");
        if (!a.is_array()) throw InvalidSpec("model: 'A' must be an array of bit strings");
        std::vector<std::string> rows;
        for (const auto& r : a) {
          if (!r.is_string()) throw InvalidSpec("model: 'A' must be an array of bit strings");
          rows.push_back(r.get<std::string>());
        }
        if (rows.empty()) throw InvalidSpec("model: 'A' is empty");
        return ModelSpec::linear(BitMatrix::from_rows(std::span<const std::string>(rows)),
                                 chains[0]);
      }
    }
  } catch (const std::invalid_argument& e) {
    throw InvalidSpec(std::string("model: ") + e.what());
  }
  throw InvalidSpec("model: unhandled kind");
}

ModelSpec model_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidSpec(std::string("model: malformed JSON: ") + e.what());
  }
  return model_from_json(doc);
}

ModelSpec read_model_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read model file '" + path.string() + "'");
  return model_from_json_text(buf.str());
}

}  // namespace bincorr
