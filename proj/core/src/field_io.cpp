#include "afgas/field_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

namespace afgas {

namespace {

constexpr char kMagic[4] = {'A', 'F', 'D', '1'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 4 + 4 * 8 + 1 + 1;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int k = 0; k < 8; ++k) out.push_back(static_cast<std::uint8_t>(bits >> (8 * k)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(p[k]) << (8 * k);
  return v;
}

double get_f64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(p[k]) << (8 * k);
  return std::bit_cast<double>(v);
}

std::vector<std::uint8_t> header(const GridSpec& g, std::uint8_t kind, std::size_t values) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + 8 * values);
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put_u32(out, static_cast<std::uint32_t>(g.nx));
  put_u32(out, static_cast<std::uint32_t>(g.ny));
  put_f64(out, g.x0);
  put_f64(out, g.y0);
  put_f64(out, g.hx);
  put_f64(out, g.hy);
  out.push_back(static_cast<std::uint8_t>(g.bc));
  out.push_back(kind);
  return out;
}

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw FieldIoError("cannot open " + path.string() + " for writing");
  os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw FieldIoError("write failed: " + path.string());
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::vector<std::uint8_t> encode_afd(const ScalarField& f) {
  validate(f.grid);
  auto out = header(f.grid, 0, f.values.size());
  for (double v : f.values) put_f64(out, v);
  return out;
}

std::vector<std::uint8_t> encode_afd(const ComplexField& f) {
  validate(f.grid);
  auto out = header(f.grid, 1, 2 * f.values.size());
  for (const cplx& v : f.values) {
    put_f64(out, v.real());
    put_f64(out, v.imag());
  }
  return out;
}

std::variant<ScalarField, ComplexField> decode_afd(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw FieldIoError("not an AFD1 field dump");
  const std::uint8_t* p = bytes.data() + 4;
  GridSpec g;
  g.nx = static_cast<int>(get_u32(p));
  g.ny = static_cast<int>(get_u32(p + 4));
  g.x0 = get_f64(p + 8);
  g.y0 = get_f64(p + 16);
  g.hx = get_f64(p + 24);
  g.hy = get_f64(p + 32);
  const std::uint8_t bc = p[40], kind = p[41];
  if (bc > 2) throw FieldIoError("unknown boundary tag in field dump");
  if (kind > 1) throw FieldIoError("unknown value kind in field dump");
  g.bc = static_cast<Boundary>(bc);
  try {
    validate(g);
  } catch (const GridError& e) {
    throw FieldIoError(std::string("bad grid in field dump: ") + e.what());
  }
  const std::size_t count = g.size() * (kind == 1 ? 2 : 1);
  if (bytes.size() != kHeaderBytes + 8 * count) throw FieldIoError("field dump has the wrong length");
  const std::uint8_t* v = bytes.data() + kHeaderBytes;
  if (kind == 0) {
    ScalarField f(g);
    for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = get_f64(v + 8 * i);
    return f;
  }
  ComplexField f(g);
  for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = cplx(get_f64(v + 16 * i), get_f64(v + 16 * i + 8));
  return f;
}

void write_afd(const std::filesystem::path& path, const ScalarField& f) { write_bytes(path, encode_afd(f)); }
void write_afd(const std::filesystem::path& path, const ComplexField& f) { write_bytes(path, encode_afd(f)); }

std::variant<ScalarField, ComplexField> read_afd(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FieldIoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return decode_afd(bytes);
}

ComplexField read_afd_complex(const std::filesystem::path& path) {
  auto f = read_afd(path);
  if (auto* c = std::get_if<ComplexField>(&f)) return std::move(*c);
  const ScalarField& s = std::get<ScalarField>(f);
  ComplexField c(s.grid);
  for (std::size_t i = 0; i < s.values.size(); ++i) c.values[i] = s.values[i];
  return c;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw FieldIoError("CSV tables need a header");
}

void CsvTable::add_row(std::vector<Cell> row) {
  if (row.size() != header_.size()) throw FieldIoError("CSV row width does not match the header");
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) out += (i ? "," : "") + quote(header_[i]);
  out += "\r\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      if (const double* d = std::get_if<double>(&row[i])) out += format_double(*d);
      else if (const long long* n = std::get_if<long long>(&row[i])) out += std::to_string(*n);
      else out += quote(std::get<std::string>(row[i]));
    }
    out += "\r\n";
  }
  return out;
}

void CsvTable::write(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw FieldIoError("cannot open " + path.string() + " for writing");
  os << str();
  if (!os) throw FieldIoError("write failed: " + path.string());
}

void write_pgm(const std::filesystem::path& path, const ScalarField& f) {
  const GridSpec& g = f.grid;
  const auto [lo, hi] = std::minmax_element(f.values.begin(), f.values.end());
  const double span = *hi - *lo;
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw FieldIoError("cannot open " + path.string() + " for writing");
  os << "P5\n" << g.nx << ' ' << g.ny << "\n255\n";
  for (int iy = g.ny - 1; iy >= 0; --iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      const double t = span > 0.0 ? (f.values[g.index(ix, iy)] - *lo) / span : 0.0;
      os.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * t))));
    }
  if (!os) throw FieldIoError("write failed: " + path.string());
}

}  // namespace afgas
