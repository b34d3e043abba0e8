#include <set>
#include <string>

#include "aci/error.hpp"
#include "aci/generators.hpp"
#include "json.hpp"

namespace aci {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& what) {
  throw Error(ErrorKind::invalid_argument, "spectrum spec: " + what);
}

template <typename T>
T get_field(const json& obj, const char* key) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    schema_error(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

std::string spectrum_to_json(const SpectrumSpec& spec) {
  json out;
  out["kind"] = to_string(spec.kind);
  out["eigenvalues"] = spec.eigenvalues;
  json blocks = json::array();
  for (const auto& b : spec.rotation_blocks) blocks.push_back({{"c", b.c}, {"sign", b.sign}});
  out["rotation_blocks"] = std::move(blocks);
  out["has_plus_one"] = spec.has_plus_one;
  out["has_minus_one"] = spec.has_minus_one;
  out["similarity_seed"] =
      spec.similarity_seed ? json(*spec.similarity_seed) : json(nullptr);
  out["distinct_required"] = spec.distinct_required;
  return out.dump();
}

SpectrumSpec spectrum_from_json(const std::string& text) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error& e) {
    schema_error(std::string("malformed JSON: ") + e.what());
  }
  if (!obj.is_object()) schema_error("expected a JSON object");

  static const std::set<std::string> known = {"kind",         "eigenvalues",   "rotation_blocks",
                                              "has_plus_one", "has_minus_one", "similarity_seed",
                                              "distinct_required"};
  for (const auto& [key, _] : obj.items()) {
    if (!known.contains(key)) schema_error("unknown field '" + key + "'");
  }
  if (!obj.contains("kind")) schema_error("missing field 'kind'");

  SpectrumSpec spec;
  spec.kind = spectrum_kind_from_string(get_field<std::string>(obj, "kind"));
  if (obj.contains("eigenvalues")) spec.eigenvalues = get_field<std::vector<double>>(obj, "eigenvalues");
  if (obj.contains("rotation_blocks")) {
    const json& blocks = obj.at("rotation_blocks");
    if (!blocks.is_array()) schema_error("field 'rotation_blocks' must be an array");
    for (const auto& b : blocks) {
      RotationBlock block;
      if (b.is_number()) {
        block.c = b.get<double>();
      } else if (b.is_object() && b.contains("c")) {
        block.c = get_field<double>(b, "c");
        if (b.contains("sign")) block.sign = get_field<int>(b, "sign");
      } else {
        schema_error("rotation block must be a number or an object with field 'c'");
      }
      spec.rotation_blocks.push_back(block);
    }
  }
  if (obj.contains("has_plus_one")) spec.has_plus_one = get_field<bool>(obj, "has_plus_one");
  if (obj.contains("has_minus_one")) spec.has_minus_one = get_field<bool>(obj, "has_minus_one");
  if (obj.contains("similarity_seed") && !obj.at("similarity_seed").is_null()) {
    spec.similarity_seed = get_field<std::uint64_t>(obj, "similarity_seed");
  }
  if (obj.contains("distinct_required")) {
    spec.distinct_required = get_field<bool>(obj, "distinct_required");
  }
  spec.validate();
  return spec;
}

}  // namespace aci
