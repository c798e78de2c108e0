#ifndef ENTROFILT_CSV_IO_HPP_
#define ENTROFILT_CSV_IO_HPP_

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "entrofilt/errors.hpp"
#include "entrofilt/euler.hpp"
#include "entrofilt/mesh.hpp"

namespace entrofilt {

/// 17 significant digits: enough to round-trip any double.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  return os;
}

inline void check_written(std::ofstream& os,
                          const std::filesystem::path& path) {
  os.flush();
  if (!os) throw IoError("error while writing '" + path.string() + "'");
}

/// One row per solution point (element-major, node-major):
/// x[,y],rho,vx[,vy],P.
template <int Dim>
void write_solution_csv(std::span<const Point<Dim>> coords,
                        std::span<const ConservativeState<Dim>> field,
                        const GasModel& gas,
                        const std::filesystem::path& path) {
  auto os = open_for_write(path);
  os << (Dim == 1 ? "x,rho,vx,P\n" : "x,y,rho,vx,vy,P\n");
  for (size_t k = 0; k < field.size(); ++k) {
    const auto w = cons_to_prim(field[k], gas);
    for (int d = 0; d < Dim; ++d) os << format_number(coords[k][d]) << ',';
    os << format_number(w.rho);
    for (int d = 0; d < Dim; ++d) os << ',' << format_number(w.vel[d]);
    os << ',' << format_number(w.p) << '\n';
  }
  check_written(os, path);
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const {
    for (size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    throw IoError("CSV has no column '" + name + "'");
  }
};

/// Reads a numeric CSV with a single header line.
inline CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open '" + path.string() + "'");
  CsvTable t;
  std::string line;
  if (!std::getline(is, line)) {
    throw IoError("'" + path.string() + "' is empty");
  }
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.header.push_back(cell);
  }
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw IoError("'" + path.string() + "': non-numeric cell '" + cell + "'");
      }
    }
    if (row.size() != t.header.size()) {
      throw IoError("'" + path.string() + "': ragged row");
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace entrofilt

#endif  // ENTROFILT_CSV_IO_HPP_
