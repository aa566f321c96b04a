#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "afgas/grid.hpp"

namespace afgas {

class FieldIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// .afd dump: "AFD1", u32 nx, u32 ny, f64 x0, y0, hx, hy, u8 bc, u8 kind
// (0 real, 1 complex), then row-major f64 values (complex as re, im), all
// little-endian.
std::vector<std::uint8_t> encode_afd(const ScalarField& f);
std::vector<std::uint8_t> encode_afd(const ComplexField& f);
std::variant<ScalarField, ComplexField> decode_afd(const std::vector<std::uint8_t>& bytes);

void write_afd(const std::filesystem::path& path, const ScalarField& f);
void write_afd(const std::filesystem::path& path, const ComplexField& f);
std::variant<ScalarField, ComplexField> read_afd(const std::filesystem::path& path);
/// Reads a complex dump; a real dump is promoted.
ComplexField read_afd_complex(const std::filesystem::path& path);

/// Shortest text that parses back to the same double (at most 17 significant digits).
std::string format_double(double v);

/// RFC 4180 table with a mandatory header row.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  using Cell = std::variant<double, long long, std::string>;
  void add_row(std::vector<Cell> row);

  [[nodiscard]] const std::vector<std::string>& header() const { return header_; }
  [[nodiscard]] std::size_t rows() const { return rows_.size(); }
  [[nodiscard]] std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
};

/// 8-bit binary PGM of f, linearly mapped from [min, max] to [0, 255];
/// row 0 of the image is the top (largest y) row of the grid.
void write_pgm(const std::filesystem::path& path, const ScalarField& f);

}  // namespace afgas
