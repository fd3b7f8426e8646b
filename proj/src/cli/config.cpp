#include <cmath>
#include <set>
#include <string>

#include "pmstar/cli.hpp"

namespace pmstar::cli {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

const json& object_at(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  return j;
}

void reject_unknown(const json& obj, const std::string& path,
                    const std::set<std::string>& allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) fail(join(path, key), "unknown field");
  }
}

const json& require(const json& obj, const std::string& path, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(join(path, key), "missing field");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::string spec_type(const json& spec, const std::string& path) {
  object_at(spec, path);
  const json& t = require(spec, path, "type");
  if (!t.is_string()) fail(join(path, "type"), "expected a string");
  return t.get<std::string>();
}

fredholm::Kernel parse_kernel(const json& spec, const std::string& path, double a, double b) {
  const std::string type = spec_type(spec, path);
  if (type == "constant") {
    reject_unknown(spec, path, {"type", "value"});
    return fredholm::constant_kernel(number(require(spec, path, "value"), join(path, "value")));
  }
  if (type == "separable") {
    reject_unknown(spec, path, {"type", "c"});
    return fredholm::separable_kernel(number(require(spec, path, "c"), join(path, "c")));
  }
  if (type == "table") {
    reject_unknown(spec, path, {"type", "values"});
    const std::string vpath = join(path, "values");
    const json& rows = require(spec, path, "values");
    if (!rows.is_array() || rows.size() < 2) fail(vpath, "expected an n x n array with n >= 2");
    std::vector<std::vector<double>> values;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const std::string rpath = vpath + "[" + std::to_string(r) + "]";
      values.push_back(numbers(rows[r], rpath));
      if (values.back().size() != rows.size()) fail(rpath, "row length must equal row count");
    }
    return fredholm::table_kernel(a, b, std::move(values));
  }
  fail(join(path, "type"), "unknown kernel type '" + type + "'");
}

fredholm::Source parse_source(const json& spec, const std::string& path, double a, double b) {
  const std::string type = spec_type(spec, path);
  if (type == "constant") {
    reject_unknown(spec, path, {"type", "value"});
    return fredholm::constant_source(number(require(spec, path, "value"), join(path, "value")));
  }
  if (type == "poly") {
    reject_unknown(spec, path, {"type", "coeffs"});
    auto coeffs = numbers(require(spec, path, "coeffs"), join(path, "coeffs"));
    if (coeffs.empty()) fail(join(path, "coeffs"), "expected at least one coefficient");
    return fredholm::poly_source(std::move(coeffs));
  }
  if (type == "table") {
    reject_unknown(spec, path, {"type", "values"});
    auto values = numbers(require(spec, path, "values"), join(path, "values"));
    if (values.size() < 2) fail(join(path, "values"), "expected at least 2 samples");
    return fredholm::table_source(a, b, std::move(values));
  }
  fail(join(path, "type"), "unknown source type '" + type + "'");
}

}  // namespace

fredholm::Problem parse_fredholm_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  object_at(doc, "");
  reject_unknown(doc, "", {"interval", "m", "kernels", "g"});

  fredholm::Problem prob;
  const auto interval = numbers(require(doc, "", "interval"), "interval");
  if (interval.size() != 2) fail("interval", "expected [a, b]");
  prob.a = interval[0];
  prob.b = interval[1];
  if (!(prob.a < prob.b)) fail("interval", "a < b required");

  const json& m = require(doc, "", "m");
  if (!m.is_number_integer() || m.get<std::int64_t>() < 2) fail("m", "expected an integer >= 2");
  prob.m = static_cast<std::size_t>(m.get<std::int64_t>());

  const json& kernels = object_at(require(doc, "", "kernels"), "kernels");
  reject_unknown(kernels, "kernels", {"K11", "K12", "K21", "K22"});
  const char* kernel_names[4] = {"K11", "K12", "K21", "K22"};
  for (std::size_t k = 0; k < 4; ++k) {
    const std::string path = join("kernels", kernel_names[k]);
    prob.kernels[k] = parse_kernel(require(kernels, "kernels", kernel_names[k]), path, prob.a,
                                   prob.b);
  }

  const json& g = object_at(require(doc, "", "g"), "g");
  reject_unknown(g, "g", {"g1", "g2"});
  prob.sources[0] = parse_source(require(g, "g", "g1"), "g.g1", prob.a, prob.b);
  prob.sources[1] = parse_source(require(g, "g", "g2"), "g.g2", prob.a, prob.b);
  return prob;
}

}  // namespace pmstar::cli
