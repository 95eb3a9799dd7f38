#ifndef PTRLAB_CSV_HPP
#define PTRLAB_CSV_HPP

#include <fstream>
#include <string>
#include <vector>

#include "ptrlab/medium.hpp"
#include "ptrlab/signal.hpp"

namespace ptrlab {

/// CSV with a single header row and '#'-prefixed metadata lines; numbers are
/// written with max_digits10 so reruns are byte-identical.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  void comment(const std::string& text);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& values);

 private:
  std::ofstream out_;
};

std::string format_double(double v);

/// Field on grid nodes as a row-major matrix CSV with grid metadata comments.
void write_field_csv(const std::string& path, const DomainGrid& grid,
                     const std::vector<double>& field,
                     const std::string& name);

/// Boundary signal as (node-position x time) matrix CSV.
void write_signal_csv(const std::string& path, const DomainGrid& grid,
                      const BoundarySignal& f, const std::string& name);

}  // namespace ptrlab

#endif  // PTRLAB_CSV_HPP
