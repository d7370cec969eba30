#pragma once

// CSV output helpers. All floating-point fields use a fixed %.15e rendering
// and rows end in a bare LF so files are byte-stable across runs and
// platforms given identical inputs.

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "tailmass/errors.hpp"
#include "tailmass/mass_curve.hpp"

namespace tailmass {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15e", v);
  return buf;
}

// 17 significant digits: parses back to the identical double.
inline std::string format_double_exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void header(const std::vector<std::string>& names) { raw_row(names); }

  void raw_row(const std::vector<std::string>& fields) {
    for (std::size_t k = 0; k < fields.size(); ++k) {
      if (k) os_ << ',';
      os_ << fields[k];
    }
    os_ << '\n';
  }

  std::ostream& stream() { return os_; }

 private:
  std::ostream& os_;
};

inline std::ofstream open_output(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);
  return os;
}

// One curve evaluated over a grid: columns q, mass, provenance.
inline void write_curve_csv(std::ostream& os, const std::vector<double>& grid,
                            const MassCurve& curve) {
  CsvWriter w(os);
  w.header({"q", "mass", "provenance"});
  const std::string label = provenance_label(curve.provenance());
  for (double q : grid)
    w.raw_row({format_double(q), format_double(curve(q)), label});
}

}  // namespace tailmass
