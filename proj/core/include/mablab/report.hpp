#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mablab/estimators.hpp"

namespace mablab {

inline constexpr const char* kRawCsvHeader =
    "scenario,rep,arm,is_chosen,N,stop_time,mean_hat,mu_true,diff,censored";

/// Raw rows for one scenario: for each repetition (0-based, the index fed
/// to derive_seed) one row per arm (1-based), then one row for the chosen
/// arm unless the repetition was censored. Floats use 17 significant
/// digits; mean_hat and diff are empty when N = 0.
void write_raw_csv(std::ostream& out, const std::string& scenario,
                   std::span<const RunRecord> records, std::span<const double> mus);

struct RawData {
  std::string scenario;
  std::vector<RunRecord> records;
  std::vector<double> mus;
};

/// Throws ParseError with a line number on any schema mismatch and
/// NoDataError when there are no data rows.
RawData read_raw_csv(std::istream& in);

/// Summary document for a scenario. Pure function of its arguments; NaN
/// statistics are written as null.
std::string summary_json(const std::string& scenario, const BiasReport& report,
                         std::span<const RunRecord> records);

/// Recomputes the summary from a raw CSV file. Identical to the summary
/// written when the scenario ran. Throws IoError if the file is unreadable.
std::string summarize(const std::filesystem::path& raw_csv);
std::string summarize(std::istream& raw_csv);

/// printf("%.17g").
std::string format_double(double value);

}  // namespace mablab
