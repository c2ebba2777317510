#pragma once

#include <string>

namespace facetrack {

// Turns a results CSV (and optionally an estimates dump) into a tidy
// long-format `series,frame,value` CSV for plotting.
struct ReportOptions {
  std::string results_csv;
  std::string estimates_csv;  // empty = no coordinate traces
  int landmark = -1;          // 0-based; -1 = none
  std::string coord;          // "x", "y" or "z"; required with landmark
  std::string out_path;
};

void generate_report(const ReportOptions& options);

}  // namespace facetrack
