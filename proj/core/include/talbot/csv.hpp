#pragma once

#include <complex>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "talbot/spectral_solver.hpp"

namespace talbot {

/// Shortest decimal that parses back to the same double.
std::string format_number(double v);

/// Comma-separated table with a fixed header; rows must match the header width.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  void add_numbers(std::span<const double> values);

  const std::vector<std::string>& header() const noexcept { return header_; }
  std::size_t rows() const noexcept { return rows_.size(); }
  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// `x,re_u,im_u,abs_u,re_v,im_v,abs_v`
CsvTable snapshot_table(std::span<const double> x, std::span<const std::complex<double>> u,
                        std::span<const std::complex<double>> v);

/// `t,norm_u_sq,norm_v_sq,re_inner,im_inner`
CsvTable conservation_table(std::span<const ConservationRow> rows);

}  // namespace talbot
