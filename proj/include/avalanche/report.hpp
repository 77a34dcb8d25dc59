#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "avalanche/ap.hpp"
#include "avalanche/forge.hpp"

namespace aval {

class IoError : public Error {
 public:
  using Error::Error;
};

// One long-format result row.  raw may be NaN when a cell could not be run.
struct ReportRow {
  std::string cell;
  double kappa = 0.0;
  double epsilon = 0.0;
  int n = 0;
  int m = 0;
  std::uint64_t seed = 0;
  std::string quantity;
  double raw = 0.0;
  double bound = 0.0;
  bool pass = false;

  bool operator==(const ReportRow& o) const;
};

inline constexpr const char* kCsvHeader = "cell,kappa,epsilon,n,m,seed,quantity,raw,bound,verdict";
inline constexpr int kReportVersion = 1;

std::string format_double(double x);  // %.17g, "nan" and "inf" spelled out

std::string rows_to_csv(const std::vector<ReportRow>& rows);
std::vector<ReportRow> rows_from_csv(const std::string& text);
std::string rows_to_json(const std::vector<ReportRow>& rows);
std::vector<ReportRow> rows_from_json(const std::string& text);

std::string chain_to_json(const Chain& chain, const ForgeSpec* spec = nullptr);
Chain chain_from_json(const std::string& text);
std::string ap_report_to_json(const APReport& report, const std::vector<ReportRow>& rows);

// Rows for the four conclusions of a report.
std::vector<ReportRow> conclusion_rows(const APReport& report, const std::string& cell, const ForgeSpec& spec);

// Writes through a temporary file in the same directory and renames it into place.
void write_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace aval
