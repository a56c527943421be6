#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "discrepancy/errors.hpp"
#include "discrepancy/matcore.hpp"

namespace discrepancy {

namespace {

using nlohmann::json;

std::size_t line_of(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  for (std::size_t k = 0; k < offset && k < text.size(); ++k)
    if (text[k] == '\n') ++line;
  return line;
}

// Structural problems have no precise position once parsed; report the
// start of the document.
[[noreturn]] void schema_error(const std::string& what) { throw ParseError("family file: " + what, 1, 0); }

const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(std::string("missing key '") + key + "'");
  return *it;
}

std::size_t require_count(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_number_integer()) schema_error(std::string("'") + key + "' must be an integer");
  const auto x = v.get<std::int64_t>();
  if (x <= 0) schema_error(std::string("'") + key + "' must be positive");
  return static_cast<std::size_t>(x);
}

}  // namespace

std::string format_double(double v) {
  if (!std::isfinite(v)) throw InvalidMatrix("cannot serialise a non-finite value");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string family_to_json(const MatrixFamily& family) {
  std::string out;
  out.reserve(family.size() * family.dim() * family.dim() * 24 + 128);
  out += "{\"version\":1,\"n\":" + std::to_string(family.size()) + ",\"d\":" + std::to_string(family.dim()) +
         ",\"matrices\":[";
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (i) out += ",\n";
    out += '[';
    const auto data = family[i].data();
    for (std::size_t k = 0; k < data.size(); ++k) {
      if (k) out += ',';
      out += format_double(data[k]);
    }
    out += ']';
  }
  out += "],\"meta\":{\"kind\":" + json(family.meta().kind).dump() +
         ",\"seed\":" + std::to_string(family.meta().seed) + "}}\n";
  return out;
}

MatrixFamily family_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t off = e.byte > 0 ? e.byte - 1 : 0;
    throw ParseError("family file: malformed JSON", line_of(text, off), off);
  }
  if (!doc.is_object()) schema_error("top level must be an object");
  const json& version = require(doc, "version");
  if (!version.is_number_integer() || version.get<int>() != 1) schema_error("unsupported version");
  const std::size_t n = require_count(doc, "n");
  const std::size_t d = require_count(doc, "d");
  const json& mats = require(doc, "matrices");
  if (!mats.is_array()) schema_error("'matrices' must be an array");
  if (mats.size() != n) {
    throw ShapeError("family file declares n=" + std::to_string(n) + " but lists " + std::to_string(mats.size()) +
                     " matrices");
  }

  FamilyMeta meta;
  if (auto it = doc.find("meta"); it != doc.end()) {
    if (!it->is_object()) schema_error("'meta' must be an object");
    if (auto k = it->find("kind"); k != it->end()) {
      if (!k->is_string()) schema_error("'meta.kind' must be a string");
      meta.kind = k->get<std::string>();
    }
    if (auto s = it->find("seed"); s != it->end()) {
      if (!s->is_number_unsigned() && !s->is_number_integer()) schema_error("'meta.seed' must be an integer");
      meta.seed = s->get<std::uint64_t>();
    }
  }

  std::vector<SymMatrix> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const json& m = mats[i];
    if (!m.is_array()) schema_error("matrix " + std::to_string(i) + " must be an array");
    if (m.size() != d * d) {
      throw ShapeError("matrix " + std::to_string(i) + " has " + std::to_string(m.size()) + " entries, expected " +
                       std::to_string(d * d));
    }
    std::vector<double> data(d * d);
    for (std::size_t k = 0; k < d * d; ++k) {
      if (!m[k].is_number()) schema_error("matrix " + std::to_string(i) + " has a non-numeric entry");
      data[k] = m[k].get<double>();
    }
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = r + 1; c < d; ++c)
        if (data[r * d + c] != data[c * d + r]) {
          throw InvalidMatrix("matrix " + std::to_string(i) + " is not symmetric");
        }
    out.emplace_back(d, std::move(data));
  }
  return MatrixFamily(std::move(out), std::move(meta));
}

void write_family(const MatrixFamily& family, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + path.string() + "' for writing");
  f << family_to_json(family);
  if (!f) throw ConfigError("write to '" + path.string() + "' failed");
}

MatrixFamily read_family(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return family_from_json(ss.str());
}

}  // namespace discrepancy
