#pragma once

// Regression sweep: a frozen fixture table over the model catalog. Every
// fixture measures one number (a distance, a classification code, a probe
// gap, a flag count) and compares it against an inclusive expected band.
// The CSV output is fully deterministic so that two runs on the same build
// are byte-identical.

#include <string>
#include <vector>

namespace lorlab {

struct RegressRow {
  std::string id;        // stable unique fixture id
  std::string scenario;  // catalog name (with optional variant suffix)
  std::string kind;      // dist | class | probe | miss | ladder | surface |
                         // formula | path
  double h = 0.0;        // finest spacing used
  double measured = 0.0;
  double lo = 0.0, hi = 0.0;  // expected inclusive band
  bool pass = false;
  std::string detail;    // stable auxiliary readings, `key=value;` pairs
};

struct RegressReport {
  std::vector<RegressRow> rows;
  int failures = 0;

  std::string csv() const;    // deterministic table, %.12g numbers
  std::string human() const;  // one PASS/FAIL line per fixture
};

RegressReport run_regress();

}  // namespace lorlab
