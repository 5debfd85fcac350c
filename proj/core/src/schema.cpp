#include "schema.hpp"

#include <algorithm>

namespace crd::detail {

namespace {

bool has_type(const nlohmann::json& value, const std::string& type) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "boolean") return value.is_boolean();
  if (type == "null") return value.is_null();
  if (type == "number") return value.is_number();
  if (type == "integer") return value.is_number_integer();
  return false;
}

class Checker {
 public:
  explicit Checker(const nlohmann::json& root) : root_(root) {}

  void check(const nlohmann::json& value, const nlohmann::json& schema, const std::string& path) {
    if (auto ref = schema.find("$ref"); ref != schema.end()) {
      const std::string target = ref->get<std::string>();
      const std::string prefix = "#/definitions/";
      if (target.rfind(prefix, 0) != 0 || !root_["definitions"].contains(target.substr(prefix.size()))) {
        errors.push_back(path + ": unresolved reference " + target);
        return;
      }
      check(value, root_["definitions"][target.substr(prefix.size())], path);
      return;
    }
    if (auto type = schema.find("type"); type != schema.end()) {
      bool ok = false;
      if (type->is_array()) {
        for (const auto& t : *type) ok = ok || has_type(value, t.get<std::string>());
      } else {
        ok = has_type(value, type->get<std::string>());
      }
      if (!ok) {
        errors.push_back(path + ": expected type " + type->dump());
        return;
      }
    }
    if (auto en = schema.find("enum"); en != schema.end()) {
      if (std::find(en->begin(), en->end(), value) == en->end()) errors.push_back(path + ": value not in enum");
    }
    if (auto minimum = schema.find("minimum"); minimum != schema.end() && value.is_number()) {
      if (value.get<double>() < minimum->get<double>()) errors.push_back(path + ": below minimum");
    }
    if (value.is_array()) {
      if (auto min_items = schema.find("minItems"); min_items != schema.end() && value.size() < min_items->get<std::size_t>()) {
        errors.push_back(path + ": fewer than " + min_items->dump() + " items");
      }
      if (auto items = schema.find("items"); items != schema.end()) {
        for (std::size_t i = 0; i < value.size(); ++i) check(value[i], *items, path + "/" + std::to_string(i));
      }
    }
    if (value.is_object()) {
      if (auto required = schema.find("required"); required != schema.end()) {
        for (const auto& key : *required) {
          if (!value.contains(key.get<std::string>())) errors.push_back(path + ": missing " + key.get<std::string>());
        }
      }
      const auto props = schema.find("properties");
      const auto extra = schema.find("additionalProperties");
      for (const auto& [key, child] : value.items()) {
        if (props != schema.end() && props->contains(key)) {
          check(child, (*props)[key], path + "/" + key);
        } else if (extra != schema.end() && extra->is_boolean() && !extra->get<bool>()) {
          errors.push_back(path + ": unexpected property " + key);
        }
      }
    }
  }

  std::vector<std::string> errors;

 private:
  const nlohmann::json& root_;
};

}  // namespace

std::vector<std::string> validate_json(const nlohmann::json& document, const nlohmann::json& schema) {
  Checker checker(schema);
  checker.check(document, schema, "");
  return checker.errors;
}

const nlohmann::json& report_schema() {
  static const nlohmann::json schema = nlohmann::json::parse(
#include "report_schema.inc"
  );
  return schema;
}

}  // namespace crd::detail
