#include <string>

#include <json.hpp>

#include "fwipm/error.h"
#include "fwipm/ipm.h"

namespace fwipm {

namespace {

std::string nullable(const std::optional<double>& v) {
  return v ? format_double(*v) : "null";
}

std::optional<double> read_nullable(const nlohmann::json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) {
    throw Error(ErrorCode::kParseError, std::string(key) + ": missing field");
  }
  if (it->is_null()) return std::nullopt;
  if (!it->is_number()) {
    throw Error(ErrorCode::kParseError, std::string(key) + ": expected a number");
  }
  return it->get<double>();
}

}  // namespace

std::string write_trace_record(const IterationRecord& r) {
  std::string out = "{\"iter\":" + std::to_string(r.iter);
  out += ",\"phase\":\"" + std::string(to_string(r.phase)) + '"';
  out += ",\"objective\":" + format_double(r.objective);
  out += ",\"decrement_fw\":" + format_double(r.decrement_fw);
  out += ",\"gap\":" + nullable(r.gap);
  out += ",\"gap_valid\":" + std::string(r.gap_valid ? "true" : "false");
  out += ",\"s_star\":" + nullable(r.s_star);
  out += ",\"t_step\":" + nullable(r.t_step);
  out += ",\"f_fw_decrease\":" + nullable(r.f_fw_decrease);
  out += '}';
  return out;
}

IterationRecord parse_trace_record(std::string_view line) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(line.begin(), line.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, std::string("trace record: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kParseError, "trace record: not an object");
  try {
    IterationRecord r;
    r.iter = doc.at("iter").get<int>();
    const std::string phase = doc.at("phase").get<std::string>();
    if (phase == "predictor") {
      r.phase = Phase::kPredictor;
    } else if (phase == "corrector") {
      r.phase = Phase::kCorrector;
    } else {
      throw Error(ErrorCode::kParseError, "phase: unknown value '" + phase + "'");
    }
    r.objective = doc.at("objective").get<double>();
    r.decrement_fw = doc.at("decrement_fw").get<double>();
    r.gap = read_nullable(doc, "gap");
    r.gap_valid = doc.at("gap_valid").get<bool>();
    r.s_star = read_nullable(doc, "s_star");
    r.t_step = read_nullable(doc, "t_step");
    r.f_fw_decrease = read_nullable(doc, "f_fw_decrease");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("trace record: ") + e.what());
  }
}

}  // namespace fwipm
