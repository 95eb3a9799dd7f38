#include "ptrlab/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace ptrlab {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path) : out_(path) {
  if (!out_) throw std::runtime_error("cannot open for writing: " + path);
}

void CsvWriter::comment(const std::string& text) { out_ << "# " << text << '\n'; }

void CsvWriter::header(const std::vector<std::string>& columns) {
  for (std::size_t i = 0; i < columns.size(); ++i)
    out_ << columns[i] << (i + 1 < columns.size() ? "," : "");
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i)
    out_ << format_double(values[i]) << (i + 1 < values.size() ? "," : "");
  out_ << '\n';
}

void CsvWriter::row_mixed(const std::vector<std::string>& values) {
  for (std::size_t i = 0; i < values.size(); ++i)
    out_ << values[i] << (i + 1 < values.size() ? "," : "");
  out_ << '\n';
}

void write_field_csv(const std::string& path, const DomainGrid& grid,
                     const std::vector<double>& field,
                     const std::string& name) {
  CsvWriter w(path);
  w.comment("field: " + name);
  w.comment("dim=" + std::to_string(grid.dim) + " nx=" + std::to_string(grid.nx) +
            " ny=" + std::to_string(grid.ny) + " h=" + format_double(grid.h));
  w.comment("row-major: row j holds y = j*h");
  std::vector<std::string> cols;
  for (int i = 0; i < grid.nx; ++i) cols.push_back("x" + std::to_string(i));
  w.header(cols);
  for (int j = 0; j < grid.ny; ++j) {
    std::vector<double> row(grid.nx);
    for (int i = 0; i < grid.nx; ++i) row[i] = field[grid.node(i, j)];
    w.row(row);
  }
}

void write_signal_csv(const std::string& path, const DomainGrid& grid,
                      const BoundarySignal& f, const std::string& name) {
  CsvWriter w(path);
  w.comment("boundary signal: " + name);
  w.comment("rows: boundary chain positions; columns: time samples t_k=(k+1/2)dt");
  w.comment("dt=" + format_double(f.dt) + " n_time=" + std::to_string(f.n_time) +
            " horizon=" + format_double(grid.horizon));
  std::vector<std::string> cols;
  for (int k = 0; k < f.n_time; ++k) cols.push_back("t" + std::to_string(k));
  w.header(cols);
  for (int b = 0; b < f.n_boundary; ++b) {
    std::vector<double> row(f.n_time);
    for (int k = 0; k < f.n_time; ++k) row[k] = f.at(b, k);
    w.row(row);
  }
}

}  // namespace ptrlab
