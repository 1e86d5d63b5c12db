#pragma once

#include <Eigen/Dense>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "spectra/ecdf.hpp"
#include "spectra/errors.hpp"

namespace spectra {

/// 17 significant digits: lossless round trip for IEEE doubles.
inline std::string csv_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Comma-separated writer with a header row and LF line endings.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) {
    out_.open(path, std::ios::binary);
    if (!out_) throw io_error("cannot open " + path.string() + " for writing");
    write_row(header);
  }

  void write_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
    if (!out_) throw io_error("write failure on CSV stream");
  }

 private:
  std::ofstream out_;
};

/// Row-major matrix export, 17 significant digits.
inline void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  std::vector<std::string> header;
  header.reserve(m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) header.push_back("c" + std::to_string(j));
  CsvWriter w(path, header);
  std::vector<std::string> row(m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) row[j] = csv_double(m(i, j));
    w.write_row(row);
  }
}

/// Two-column (x, F(x)) export of an empirical CDF.
inline void write_ecdf_csv(const std::filesystem::path& path, const Ecdf& f) {
  CsvWriter w(path, {"x", "F"});
  for (double x : f.points) {
    w.write_row({csv_double(x), csv_double(f(x))});
  }
}

}  // namespace spectra
