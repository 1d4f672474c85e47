#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qie/invariant.hpp"

namespace qie {

enum class ReportFormat { Text, Json, Csv };

ReportFormat parse_format(std::string_view name);

struct SolverSettings {
  std::string method = "dc";  // dc | brute
  int chunk_size = 3;
  std::size_t row_cap = kDefaultRowCap;
};

// Everything `solve` prints. Thread count and wall time are left out unless
// timing is requested, so reports are a pure function of the inputs.
struct RunReport {
  std::string link_name;
  std::string quandle_spec;
  std::uint64_t hom_count = 0;
  EnhancedPolynomial polynomial;
  std::optional<Census> census;
  SolverSettings settings;
  std::optional<double> seconds;
  std::vector<std::string> warnings;
};

RunReport make_report(const HomSet& h, const SolverSettings& settings, bool with_census);

std::string render(const RunReport& r, ReportFormat f);

// Reads back the JSON form (polynomial, count, names, settings, warnings).
RunReport parse_json_report(std::string_view json);

struct CompareReport {
  RunReport a, b;
  Verdict verdict;
};

std::string render(const CompareReport& r, ReportFormat f);

}  // namespace qie
