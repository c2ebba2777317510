#include "facetrack/report.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "facetrack/dataio.hpp"
#include "facetrack/errors.hpp"

namespace facetrack {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_field_double(const std::string& token, const std::string& path, int line_number) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end != begin + token.size() || token.empty()) {
    std::ostringstream msg;
    msg << path << ": line " << line_number << ": invalid number '" << token << "'";
    throw ParseError(msg.str());
  }
  return value;
}

long parse_field_long(const std::string& token, const std::string& path, int line_number) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const long value = std::strtol(begin, &end, 10);
  if (end != begin + token.size() || token.empty()) {
    std::ostringstream msg;
    msg << path << ": line " << line_number << ": invalid integer '" << token << "'";
    throw ParseError(msg.str());
  }
  return value;
}

// Rows of a CSV with `#` comment lines and a fixed expected header.
std::vector<std::vector<std::string>> read_csv(const std::string& path,
                                               const std::string& expected_header) {
  std::ifstream in(path);
  if (!in) throw IoError("report: cannot open '" + path + "'");
  std::vector<std::vector<std::string>> rows;
  std::string line;
  int line_number = 0;
  bool saw_header = false;
  const std::size_t columns = split_csv_line(expected_header).size();
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!saw_header) {
      if (line != expected_header) {
        std::ostringstream msg;
        msg << path << ": line " << line_number << ": expected header '" << expected_header
            << "', found '" << line << "'";
        throw ParseError(msg.str());
      }
      saw_header = true;
      continue;
    }
    std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != columns) {
      std::ostringstream msg;
      msg << path << ": line " << line_number << ": expected " << columns
          << " fields, found " << fields.size();
      throw ParseError(msg.str());
    }
    rows.push_back(std::move(fields));
  }
  if (!saw_header) throw ParseError(path + ": missing header line");
  return rows;
}

}  // namespace

void generate_report(const ReportOptions& options) {
  if (options.results_csv.empty()) throw InvalidArgumentError("report: results CSV required");
  if (options.out_path.empty()) throw InvalidArgumentError("report: output path required");
  if (options.landmark >= 0) {
    if (options.estimates_csv.empty()) {
      throw InvalidArgumentError("report: --landmark requires an estimates file");
    }
    if (options.coord != "x" && options.coord != "y" && options.coord != "z") {
      throw InvalidArgumentError("report: coord must be one of x, y, z");
    }
  }

  // series name -> frame -> value text (12 significant digits)
  std::map<std::string, std::map<long, std::string>> series;

  const auto result_rows = read_csv(options.results_csv, "user,filter,frame,mse,mae");
  for (std::size_t i = 0; i < result_rows.size(); ++i) {
    const auto& row = result_rows[i];
    const long frame = parse_field_long(row[2], options.results_csv, static_cast<int>(i));
    const double mse = parse_field_double(row[3], options.results_csv, static_cast<int>(i));
    const double mae = parse_field_double(row[4], options.results_csv, static_cast<int>(i));
    series[row[0] + "." + row[1] + ".mse"][frame] = format_double(mse);
    series[row[0] + "." + row[1] + ".mae"][frame] = format_double(mae);
  }

  if (options.landmark >= 0) {
    const auto estimate_rows =
        read_csv(options.estimates_csv, "user,series,frame,landmark,coord,value");
    long max_landmark = -1;
    for (const auto& row : estimate_rows) {
      max_landmark = std::max(max_landmark, parse_field_long(row[3], options.estimates_csv, 0));
    }
    if (options.landmark > max_landmark) {
      std::ostringstream msg;
      msg << "report: landmark " << options.landmark << " out of range (0.." << max_landmark
          << ")";
      throw InvalidArgumentError(msg.str());
    }
    for (std::size_t i = 0; i < estimate_rows.size(); ++i) {
      const auto& row = estimate_rows[i];
      if (parse_field_long(row[3], options.estimates_csv, static_cast<int>(i)) !=
          options.landmark) {
        continue;
      }
      if (row[4] != options.coord) continue;
      const long frame = parse_field_long(row[2], options.estimates_csv, static_cast<int>(i));
      const double value =
          parse_field_double(row[5], options.estimates_csv, static_cast<int>(i));
      std::ostringstream name;
      name << row[0] << "." << row[1] << ".p" << options.landmark << "." << options.coord;
      series[name.str()][frame] = format_double(value);
    }
  }

  std::ofstream out(options.out_path, std::ios::binary);
  if (!out) throw IoError("report: cannot open '" + options.out_path + "' for writing");
  out << "series,frame,value\n";
  for (const auto& [name, frames] : series) {
    for (const auto& [frame, value] : frames) {
      out << name << ',' << frame << ',' << value << '\n';
    }
  }
  if (!out) throw IoError("report: write to '" + options.out_path + "' failed");
}

}  // namespace facetrack
