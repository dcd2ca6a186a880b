#include "mablab/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include <nlohmann/json.hpp>

#include "mablab/errors.hpp"

namespace mablab {
namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) {
      return fields;
    }
    start = comma + 1;
  }
}

std::uint64_t parse_unsigned(const std::string& field, std::size_t line, const char* column) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw ParseError(line, std::string("column ") + column + ": expected a non-negative integer");
  }
  return value;
}

double parse_double(const std::string& field, std::size_t line, const char* column) {
  if (field.empty()) {
    throw ParseError(line, std::string("column ") + column + ": expected a number");
  }
  char* end = nullptr;
  const double value = std::strtod(field.c_str(), &end);
  if (end != field.c_str() + field.size()) {
    throw ParseError(line, std::string("column ") + column + ": expected a number");
  }
  return value;
}

bool parse_flag(const std::string& field, std::size_t line, const char* column) {
  if (field == "0") return false;
  if (field == "1") return true;
  throw ParseError(line, std::string("column ") + column + ": expected 0 or 1");
}

struct Row {
  std::string scenario;
  std::uint64_t rep;
  std::size_t arm;  // 0-based
  bool is_chosen;
  std::size_t count;
  std::size_t stop_time;
  double mean_hat;
  double mu;
  bool censored;
};

Row parse_row(const std::string& line_text, std::size_t line) {
  const auto f = split_fields(line_text);
  if (f.size() != 10) {
    throw ParseError(line, "expected 10 columns, found " + std::to_string(f.size()));
  }
  Row row;
  row.scenario = f[0];
  if (row.scenario.empty()) {
    throw ParseError(line, "column scenario: empty");
  }
  row.rep = parse_unsigned(f[1], line, "rep");
  const std::uint64_t arm = parse_unsigned(f[2], line, "arm");
  if (arm == 0) {
    throw ParseError(line, "column arm: arms are numbered from 1");
  }
  row.arm = static_cast<std::size_t>(arm - 1);
  row.is_chosen = parse_flag(f[3], line, "is_chosen");
  row.count = parse_unsigned(f[4], line, "N");
  row.stop_time = parse_unsigned(f[5], line, "stop_time");
  row.mu = parse_double(f[7], line, "mu_true");
  row.censored = parse_flag(f[9], line, "censored");
  if (row.count == 0) {
    if (!f[6].empty() || !f[8].empty()) {
      throw ParseError(line, "mean_hat and diff must be empty when N = 0");
    }
    row.mean_hat = kNaN;
  } else {
    row.mean_hat = parse_double(f[6], line, "mean_hat");
    const double diff = parse_double(f[8], line, "diff");
    if (diff != row.mean_hat - row.mu) {
      throw ParseError(line, "diff is not mean_hat - mu_true");
    }
  }
  return row;
}

}  // namespace

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void write_raw_csv(std::ostream& out, const std::string& scenario,
                   std::span<const RunRecord> records, std::span<const double> mus) {
  out << kRawCsvHeader << '\n';
  auto write_row = [&](std::size_t rep, const RunRecord& r, std::size_t k, bool chosen) {
    out << scenario << ',' << rep << ',' << (k + 1) << ',' << (chosen ? 1 : 0) << ','
        << r.counts[k] << ',' << r.stop_time << ',';
    if (r.counts[k] > 0) {
      out << format_double(r.means[k]) << ',' << format_double(mus[k]) << ','
          << format_double(r.means[k] - mus[k]);
    } else {
      out << ',' << format_double(mus[k]) << ',';
    }
    out << ',' << (r.censored ? 1 : 0) << '\n';
  };
  for (std::size_t rep = 0; rep < records.size(); ++rep) {
    const RunRecord& r = records[rep];
    for (std::size_t k = 0; k < mus.size(); ++k) {
      write_row(rep, r, k, false);
    }
    if (!r.censored && r.chosen) {
      write_row(rep, r, *r.chosen, true);
    }
  }
}

RawData read_raw_csv(std::istream& in) {
  RawData data;
  std::string text;
  std::size_t line = 0;
  if (!std::getline(in, text)) {
    throw NoDataError("raw CSV is empty");
  }
  ++line;
  if (!text.empty() && text.back() == '\r') {
    text.pop_back();
  }
  if (text != kRawCsvHeader) {
    throw ParseError(line, "unexpected header");
  }

  RunRecord* current = nullptr;
  std::size_t num_arms = 0;
  bool arms_known = false;
  std::size_t expected_arm = 0;
  bool chosen_seen = false;

  auto close_rep = [&](std::size_t at_line) {
    if (current == nullptr) return;
    if (current->counts.size() != num_arms) {
      throw ParseError(at_line, "repetition " + std::to_string(data.records.size() - 1) +
                                    " has " + std::to_string(current->counts.size()) +
                                    " arm rows, expected " + std::to_string(num_arms));
    }
    if (!current->censored && !chosen_seen) {
      throw ParseError(at_line, "uncensored repetition without a chosen-arm row");
    }
  };

  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') {
      text.pop_back();
    }
    if (text.empty()) {
      throw ParseError(line, "empty line");
    }
    const Row row = parse_row(text, line);
    if (data.scenario.empty()) {
      data.scenario = row.scenario;
    } else if (row.scenario != data.scenario) {
      throw ParseError(line, "scenario name changes within the file");
    }

    const bool new_rep = current == nullptr || row.rep != data.records.size() - 1;
    if (new_rep) {
      if (current != nullptr && !arms_known) {
        num_arms = current->counts.size();
        arms_known = true;
      }
      close_rep(line);
      if (row.rep != data.records.size()) {
        throw ParseError(line, "repetitions must be numbered 0, 1, 2, ... in order");
      }
      data.records.push_back(RunRecord{row.censored, row.stop_time, {}, {}, std::nullopt});
      current = &data.records.back();
      expected_arm = 0;
      chosen_seen = false;
    }

    if (row.censored != current->censored || row.stop_time != current->stop_time) {
      throw ParseError(line, "stop_time or censored differs within a repetition");
    }
    if (row.is_chosen) {
      if (chosen_seen) {
        throw ParseError(line, "more than one chosen-arm row");
      }
      if (row.censored) {
        throw ParseError(line, "censored repetitions have no chosen arm");
      }
      if (row.arm >= current->counts.size() || (arms_known && expected_arm != num_arms) ||
          current->counts[row.arm] != row.count ||
          !(current->means[row.arm] == row.mean_hat ||
            (std::isnan(row.mean_hat) && std::isnan(current->means[row.arm])))) {
        throw ParseError(line, "chosen-arm row does not match its arm row");
      }
      current->chosen = row.arm;
      chosen_seen = true;
      continue;
    }
    if (chosen_seen) {
      throw ParseError(line, "arm row after the chosen-arm row");
    }
    if (row.arm != expected_arm || (arms_known && row.arm >= num_arms)) {
      throw ParseError(line, "arm rows must run 1..K in order");
    }
    if (data.mus.size() <= row.arm) {
      data.mus.push_back(row.mu);
    } else if (data.mus[row.arm] != row.mu) {
      throw ParseError(line, "mu_true differs between repetitions");
    }
    current->counts.push_back(row.count);
    current->means.push_back(row.mean_hat);
    ++expected_arm;
  }
  if (data.records.empty()) {
    throw NoDataError("raw CSV has no data rows");
  }
  if (!arms_known) {
    num_arms = current->counts.size();
  }
  close_rep(line);
  return data;
}

std::string summary_json(const std::string& scenario, const BiasReport& report,
                         std::span<const RunRecord> records) {
  double stop_total = 0.0;
  for (const RunRecord& r : records) {
    if (!r.censored) stop_total += static_cast<double>(r.stop_time);
  }
  const std::size_t uncensored = report.reps - report.censored_reps;

  json arms = json::array();
  for (const ArmBias& a : report.arms) {
    json arm{{"arm", a.arm + 1},
             {"mu", a.mu},
             {"bias", number_or_null(a.bias)},
             {"std_err", number_or_null(a.std_err)},
             {"mean_count", number_or_null(a.mean_count)},
             {"reps_used", a.reps_used},
             {"reps_unsampled", a.reps_unsampled},
             {"wald",
              {{"residual", number_or_null(a.wald.residual)},
               {"std_err", number_or_null(a.wald.std_err)},
               {"reps", a.wald.reps}}}};
    if (a.covariance) {
      arm["covariance"] = {{"lhs", number_or_null(a.covariance->lhs)},
                           {"rhs", number_or_null(a.covariance->rhs)},
                           {"discrepancy", number_or_null(a.covariance->discrepancy)},
                           {"std_err", number_or_null(a.covariance->std_err)},
                           {"reps", a.covariance->reps}};
    } else {
      arm["covariance"] = nullptr;
    }
    arms.push_back(arm);
  }

  json chosen = nullptr;
  if (report.chosen) {
    json conditional = json::array();
    for (const ConditionalBias& c : report.chosen->conditional) {
      conditional.push_back({{"arm", c.arm + 1},
                             {"bias", number_or_null(c.bias)},
                             {"reps", c.reps},
                             {"probability", c.probability}});
    }
    chosen = {{"bias", number_or_null(report.chosen->bias)},
              {"std_err", number_or_null(report.chosen->std_err)},
              {"reps", report.chosen->reps},
              {"conditional", conditional}};
  }

  json doc{{"scenario", scenario},
           {"reps", report.reps},
           {"censored_reps", report.censored_reps},
           {"mean_stop_time",
            number_or_null(uncensored > 0 ? stop_total / static_cast<double>(uncensored) : kNaN)},
           {"arms", arms},
           {"chosen", chosen}};
  return doc.dump(2) + "\n";
}

std::string summarize(std::istream& raw_csv) {
  const RawData data = read_raw_csv(raw_csv);
  const BiasReport report = bias_report(data.records, data.mus);
  return summary_json(data.scenario, report, data.records);
}

std::string summarize(const std::filesystem::path& raw_csv) {
  std::ifstream in(raw_csv);
  if (!in) {
    throw IoError("cannot read raw CSV " + raw_csv.string());
  }
  return summarize(in);
}

}  // namespace mablab
