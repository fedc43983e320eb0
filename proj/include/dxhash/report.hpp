#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace dxhash {

/// One CSV row: experiment,algorithm,param_json,metric,value.
struct ReportRow {
  std::string experiment;
  std::string algorithm;
  nlohmann::json params;
  std::string metric;
  double value = 0.0;
};

/// Rows produced by one experiment run. Metrics whose name ends in
/// "_wallclock" depend on the machine; every other row is a pure function of
/// the configuration and seed.
class ExperimentReport {
 public:
  static constexpr std::string_view kVersion = "1.0.0";
  static constexpr std::string_view kHeader = "experiment,algorithm,param_json,metric,value";

  explicit ExperimentReport(std::uint64_t seed) : seed_(seed) {}

  void add(std::string experiment, std::string algorithm, nlohmann::json params,
           std::string metric, double value);
  /// Extra "# key=value" line written after the seed line.
  void add_note(std::string note) { notes_.push_back(std::move(note)); }

  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<ReportRow>& rows() const noexcept { return rows_; }

  /// Rows for `metric` whose params contain every entry of `match`.
  std::vector<const ReportRow*> select(std::string_view metric,
                                       const nlohmann::json& match = nlohmann::json::object()) const;
  /// The single matching value; throws std::out_of_range unless exactly one
  /// row matches.
  double value(std::string_view metric,
               const nlohmann::json& match = nlohmann::json::object()) const;

  void write_csv(std::ostream& out) const;
  std::string to_csv() const;

 private:
  std::uint64_t seed_;
  std::vector<std::string> notes_;
  std::vector<ReportRow> rows_;
};

/// Formats a value the way write_csv() does: integers without a fraction,
/// everything else with 12 significant digits.
std::string format_value(double value);

} // namespace dxhash
