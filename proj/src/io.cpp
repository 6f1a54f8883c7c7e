#include "relfid/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "relfid/errors.hpp"

namespace relfid {

namespace {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& path, const std::string& msg) {
  throw ValidationError("channel spec field '" + path + "': " + msg);
}

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // Locate the byte offset reported by the parser.
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ValidationError(std::string("malformed ") + what + " JSON at line " + std::to_string(line) +
                          ", column " + std::to_string(col) + ": " + e.what());
  }
}

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) field_error(path, "expected a number");
  return j.get<double>();
}

ComplexMatrix matrix_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) field_error(path, "expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = -1;
  ComplexMatrix m;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.empty()) field_error(rp, "expected a non-empty row of [re, im] pairs");
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      m = ComplexMatrix::Zero(rows, cols);
    } else if (static_cast<Eigen::Index>(row.size()) != cols) {
      field_error(rp, "row length " + std::to_string(row.size()) + " differs from " + std::to_string(cols));
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const std::string ep = rp + "[" + std::to_string(c) + "]";
      const json& e = row[static_cast<std::size_t>(c)];
      if (e.is_number()) {
        m(r, c) = e.get<double>();
      } else if (e.is_array() && e.size() == 2) {
        m(r, c) = Complex(number_at(e[0], ep + "[0]"), number_at(e[1], ep + "[1]"));
      } else {
        field_error(ep, "expected [re, im]");
      }
    }
  }
  return m;
}

std::vector<ComplexMatrix> matrices_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) field_error(path, "expected a non-empty array of matrices");
  std::vector<ComplexMatrix> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(matrix_from_json(j[i], path + "[" + std::to_string(i) + "]"));
    if (out.back().rows() != out.front().rows() || out.back().cols() != out.front().cols()) {
      field_error(path + "[" + std::to_string(i) + "]", "shape differs from the first matrix");
    }
  }
  return out;
}

json matrices_to_json(const std::vector<ComplexMatrix>& ms) {
  json arr = json::array();
  for (const auto& m : ms) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
      rows.push_back(row);
    }
    arr.push_back(rows);
  }
  return arr;
}

}  // namespace

FamilySpec parse_family_spec(std::string_view text) {
  const json j = parse_json(text, "channel spec");
  if (!j.is_object()) field_error("$", "expected an object");
  if (!j.contains("family")) field_error("family", "missing");
  if (!j["family"].is_string()) field_error("family", "expected a string");
  FamilySpec spec;
  try {
    spec.family = family_from_name(j["family"].get<std::string>());
  } catch (const ValidationError& e) {
    field_error("family", e.what());
  }
  if (spec.family == Family::raw_kraus) {
    if (!j.contains("matrices")) field_error("matrices", "missing for raw_kraus");
    spec.kraus = matrices_from_json(j["matrices"], "matrices");
    if (j.contains("reference")) spec.reference = matrices_from_json(j["reference"], "reference");
    for (const auto& [key, v] : j.items()) {
      if (key != "family" && key != "matrices" && key != "reference") field_error(key, "unknown field");
    }
  } else {
    if (!j.contains("params")) field_error("params", "missing");
    if (!j["params"].is_object()) field_error("params", "expected an object");
    for (const auto& [key, v] : j["params"].items()) spec.params[key] = number_at(v, "params." + key);
    for (const auto& [key, v] : j.items()) {
      if (key != "family" && key != "params") field_error(key, "unknown field");
    }
  }
  // Surface range and shape errors with the spec context.
  try {
    (void)make_family(spec);
  } catch (const ValidationError& e) {
    field_error(spec.family == Family::raw_kraus ? "matrices" : "params", e.what());
  }
  return spec;
}

FamilySpec load_family_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open channel spec '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_family_spec(ss.str());
}

std::string family_spec_to_json(const FamilySpec& spec, int indent) {
  json j;
  j["family"] = std::string(family_name(spec.family));
  if (spec.family == Family::raw_kraus) {
    j["matrices"] = matrices_to_json(spec.kraus);
    if (!spec.reference.empty()) j["reference"] = matrices_to_json(spec.reference);
  } else {
    j["params"] = json::object();
    for (const auto& [k, v] : spec.params) j["params"][k] = v;
  }
  return j.dump(indent);
}

std::string protocol_spec_to_json(const ProtocolSpec& spec, int indent) {
  json j;
  j["kind"] = std::string(protocol_kind_name(spec.kind));
  j["uses"] = spec.uses;
  j["ancilla_qubits"] = spec.ancilla_qubits;
  j["params"] = std::vector<double>(spec.params.data(), spec.params.data() + spec.params.size());
  return j.dump(indent);
}

ProtocolSpec parse_protocol_spec(std::string_view text) {
  const json j = parse_json(text, "protocol spec");
  ProtocolSpec s;
  try {
    s.kind = protocol_kind_from_name(j.at("kind").get<std::string>());
    s.uses = j.at("uses").get<int>();
    s.ancilla_qubits = j.at("ancilla_qubits").get<int>();
    const auto p = j.at("params").get<std::vector<double>>();
    s.params = Eigen::Map<const RealVector>(p.data(), static_cast<Eigen::Index>(p.size()));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed protocol spec: ") + e.what());
  }
  return s;
}

}  // namespace relfid
