#include "talbot/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>

#include "talbot/error.hpp"

namespace talbot {

std::string format_number(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) {
    throw Error(Errc::precondition, "row has " + std::to_string(cells.size()) + " cells, header has " +
                                        std::to_string(header_.size()));
  }
  rows_.push_back(std::move(cells));
}

void CsvTable::add_numbers(std::span<const double> values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  add_row(std::move(cells));
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

void CsvTable::write(const std::filesystem::path& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::io, "cannot open " + path.string() + " for writing");
  const std::string s = str();
  f.write(s.data(), static_cast<std::streamsize>(s.size()));
  if (!f) throw Error(Errc::io, "write failed: " + path.string());
}

CsvTable snapshot_table(std::span<const double> x, std::span<const std::complex<double>> u,
                        std::span<const std::complex<double>> v) {
  if (u.size() != x.size() || v.size() != x.size()) throw Error(Errc::grid_mismatch, "snapshot lengths differ");
  CsvTable t({"x", "re_u", "im_u", "abs_u", "re_v", "im_v", "abs_v"});
  for (std::size_t m = 0; m < x.size(); ++m) {
    const std::array<double, 7> row{x[m], u[m].real(), u[m].imag(), std::abs(u[m]),
                                    v[m].real(), v[m].imag(), std::abs(v[m])};
    t.add_numbers(row);
  }
  return t;
}

CsvTable conservation_table(std::span<const ConservationRow> rows) {
  CsvTable t({"t", "norm_u_sq", "norm_v_sq", "re_inner", "im_inner"});
  for (const auto& r : rows) {
    const std::array<double, 5> row{r.t, r.q.norm_u_sq, r.q.norm_v_sq, r.q.inner_uv.real(), r.q.inner_uv.imag()};
    t.add_numbers(row);
  }
  return t;
}

}  // namespace talbot
