#pragma once
// Result documents for a Decision: a human-readable table and a structured
// JSON form with stable key order (indices are reported 1-based; an infinite
// threshold bound serializes as the string "inf").

#include <string>

#include "mcmt/engine.hpp"

namespace mcmt {

struct RunInfo {
  std::string procedure_label;
  std::string threshold_description;
  std::string input_description;
};

std::string report_table(const Decision& decision, const RunInfo& info);
std::string report_json(const Decision& decision, const RunInfo& info);

}  // namespace mcmt
