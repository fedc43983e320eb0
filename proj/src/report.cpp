#include "dxhash/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace dxhash {

namespace {

std::string quote(const std::string& field) {
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') {
      out += '"';
    }
    out += c;
  }
  out += '"';
  return out;
}

bool contains(const nlohmann::json& params, const nlohmann::json& match) {
  for (auto it = match.begin(); it != match.end(); ++it) {
    if (!params.contains(it.key()) || params.at(it.key()) != it.value()) {
      return false;
    }
  }
  return true;
}

} // namespace

std::string format_value(double value) {
  char buffer[64];
  if (std::isfinite(value) && value == std::floor(value) && std::fabs(value) < 9.0e15) {
    std::snprintf(buffer, sizeof buffer, "%.0f", value);
  } else {
    std::snprintf(buffer, sizeof buffer, "%.12g", value);
  }
  return buffer;
}

void ExperimentReport::add(std::string experiment, std::string algorithm, nlohmann::json params,
                           std::string metric, double value) {
  rows_.push_back({std::move(experiment), std::move(algorithm), std::move(params),
                   std::move(metric), value});
}

std::vector<const ReportRow*> ExperimentReport::select(std::string_view metric,
                                                       const nlohmann::json& match) const {
  std::vector<const ReportRow*> out;
  for (const ReportRow& row : rows_) {
    if (row.metric == metric && contains(row.params, match)) {
      out.push_back(&row);
    }
  }
  return out;
}

double ExperimentReport::value(std::string_view metric, const nlohmann::json& match) const {
  const auto rows = select(metric, match);
  if (rows.size() != 1) {
    throw std::out_of_range("expected one row for metric " + std::string(metric) + " " +
                            match.dump() + ", found " + std::to_string(rows.size()));
  }
  return rows.front()->value;
}

void ExperimentReport::write_csv(std::ostream& out) const {
  out << "# seed=" << seed_ << " version=" << kVersion << '\n';
  for (const std::string& note : notes_) {
    out << "# " << note << '\n';
  }
  out << kHeader << '\n';
  for (const ReportRow& row : rows_) {
    out << row.experiment << ',' << row.algorithm << ',' << quote(row.params.dump()) << ','
        << row.metric << ',' << format_value(row.value) << '\n';
  }
}

std::string ExperimentReport::to_csv() const {
  std::ostringstream out;
  write_csv(out);
  return out.str();
}

} // namespace dxhash
