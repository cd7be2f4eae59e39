#include "glrr/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cerrno>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace glrr::io {

namespace {

constexpr std::array<char, 4> kMatrixMagic{'G', 'M', 'A', 'T'};
constexpr std::array<char, 4> kStackMagic{'G', 'M', 'S', 'K'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                         static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
  os.write(bytes, 4);
}

void put_f64(std::ostream& os, double x) {
  std::uint64_t v = std::bit_cast<std::uint64_t>(x);
  char bytes[8];
  for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((v >> (8 * b)) & 0xFF);
  os.write(bytes, 8);
}

void read_exact(std::istream& is, char* dst, std::size_t n, const char* what) {
  is.read(dst, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(is.gcount()) != n) throw Error(ErrorKind::Format, std::string("truncated ") + what);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  read_exact(is, reinterpret_cast<char*>(b), 4, "header");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void expect_magic(std::istream& is, const std::array<char, 4>& magic) {
  char got[4];
  read_exact(is, got, 4, "magic");
  if (!std::equal(magic.begin(), magic.end(), got)) {
    throw Error(ErrorKind::Format, "bad magic, expected " + std::string(magic.data(), 4));
  }
  const auto version = get_u32(is);
  if (version != kVersion) throw Error(ErrorKind::Format, "unsupported version " + std::to_string(version));
}

std::uint32_t checked_u32(Eigen::Index v) {
  if (v < 0 || static_cast<unsigned long long>(v) > 0xFFFFFFFFull) {
    throw Error(ErrorKind::Shape, "dimension does not fit the container header");
  }
  return static_cast<std::uint32_t>(v);
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream os(path, mode | std::ios::trunc);
  if (!os) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing: " + std::strerror(errno));
  return os;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream is(path, mode);
  if (!is) throw Error(ErrorKind::Io, "cannot open " + path.string() + ": " + std::strerror(errno));
  return is;
}

void finish_out(std::ofstream& os, const std::filesystem::path& path) {
  os.flush();
  if (!os) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos
                                                                                        : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(const std::string& field) {
  double v = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end) throw Error(ErrorKind::Format, "not a number: '" + field + "'");
  return v;
}

int parse_int(const std::string& field) {
  int v = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end) throw Error(ErrorKind::Format, "not an integer: '" + field + "'");
  return v;
}

}  // namespace

void write_gmat(std::ostream& os, const Matrix& m) {
  os.write(kMatrixMagic.data(), 4);
  put_u32(os, kVersion);
  put_u32(os, checked_u32(m.rows()));
  put_u32(os, checked_u32(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) put_f64(os, m(r, c));
  }
}

Matrix read_gmat(std::istream& is) {
  expect_magic(is, kMatrixMagic);
  const auto rows = get_u32(is);
  const auto cols = get_u32(is);
  const std::size_t count = static_cast<std::size_t>(rows) * cols;
  if (count > (std::size_t{1} << 31)) throw Error(ErrorKind::Format, "implausible matrix size in header");
  std::vector<unsigned char> raw(count * 8);
  read_exact(is, reinterpret_cast<char*>(raw.data()), raw.size(), "matrix payload");
  Matrix m(rows, cols);
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::uint64_t v = 0;
    for (int b = 7; b >= 0; --b) v = (v << 8) | raw[idx * 8 + static_cast<std::size_t>(b)];
    m(static_cast<Eigen::Index>(idx / cols), static_cast<Eigen::Index>(idx % cols)) = std::bit_cast<double>(v);
  }
  return m;
}

void save_gmat(const std::filesystem::path& path, const Matrix& m) {
  auto os = open_out(path, std::ios::binary);
  write_gmat(os, m);
  finish_out(os, path);
}

Matrix load_gmat(const std::filesystem::path& path) {
  auto is = open_in(path, std::ios::binary);
  try {
    return read_gmat(is);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void write_gmat_stack(std::ostream& os, const std::vector<Matrix>& ms) {
  os.write(kStackMagic.data(), 4);
  put_u32(os, kVersion);
  put_u32(os, checked_u32(static_cast<Eigen::Index>(ms.size())));
  for (const auto& m : ms) write_gmat(os, m);
}

std::vector<Matrix> read_gmat_stack(std::istream& is) {
  expect_magic(is, kStackMagic);
  const auto count = get_u32(is);
  std::vector<Matrix> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) out.push_back(read_gmat(is));
  return out;
}

void save_gmat_stack(const std::filesystem::path& path, const std::vector<Matrix>& ms) {
  auto os = open_out(path, std::ios::binary);
  write_gmat_stack(os, ms);
  finish_out(os, path);
}

std::vector<Matrix> load_gmat_stack(const std::filesystem::path& path) {
  auto is = open_in(path, std::ios::binary);
  try {
    return read_gmat_stack(is);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void save_gram(const std::filesystem::path& path, const GramTensor& b) { save_gmat_stack(path, b.slices); }

GramTensor load_gram(const std::filesystem::path& path) {
  GramTensor b{load_gmat_stack(path)};
  try {
    b.check_shape();
  } catch (const Error& e) {
    throw Error(ErrorKind::Format, path.string() + ": " + e.what());
  }
  return b;
}

void write_csv_matrix(std::ostream& os, const Matrix& m) {
  os << std::setprecision(17);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) os << ',';
      os << m(r, c);
    }
    os << '\n';
  }
}

Matrix read_csv_matrix(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    std::vector<double> row;
    for (const auto& f : split_fields(line)) row.push_back(parse_double(f));
    if (!rows.empty() && row.size() != rows.front().size()) throw Error(ErrorKind::Format, "ragged CSV matrix");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return Matrix(0, 0);
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return m;
}

void save_csv_matrix(const std::filesystem::path& path, const Matrix& m) {
  auto os = open_out(path);
  write_csv_matrix(os, m);
  finish_out(os, path);
}

Matrix load_csv_matrix(const std::filesystem::path& path) {
  auto is = open_in(path);
  try {
    return read_csv_matrix(is);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

CsvTable load_csv_table(const std::filesystem::path& path) {
  auto is = open_in(path);
  CsvTable table;
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (header) {
      table.header = std::move(fields);
      header = false;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw Error(ErrorKind::Format, path.string() + ": row has " + std::to_string(fields.size()) +
                                         " fields, header has " + std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (header) throw Error(ErrorKind::Format, path.string() + ": empty CSV");
  return table;
}

void save_labels(const std::filesystem::path& path, const std::vector<int>& labels) {
  auto os = open_out(path);
  os << "index,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) os << i << ',' << labels[i] << '\n';
  finish_out(os, path);
}

std::vector<int> load_labels(const std::filesystem::path& path) {
  const CsvTable t = load_csv_table(path);
  const auto label_col = std::find(t.header.begin(), t.header.end(), "label");
  if (label_col == t.header.end()) throw Error(ErrorKind::Format, path.string() + ": no 'label' column");
  const auto col = static_cast<std::size_t>(label_col - t.header.begin());
  const bool indexed = !t.header.empty() && t.header.front() == "index";

  std::vector<int> labels(t.rows.size(), -1);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    std::size_t slot = r;
    if (indexed) {
      const int idx = parse_int(t.rows[r].front());
      if (idx < 0 || static_cast<std::size_t>(idx) >= labels.size() || labels[static_cast<std::size_t>(idx)] >= 0) {
        throw Error(ErrorKind::Format, path.string() + ": bad or repeated index " + t.rows[r].front());
      }
      slot = static_cast<std::size_t>(idx);
    }
    labels[slot] = parse_int(t.rows[r][col]);
    if (labels[slot] < 0) throw Error(ErrorKind::Format, path.string() + ": negative label");
  }
  return labels;
}

void save_text(const std::filesystem::path& path, const std::string& text) {
  auto os = open_out(path, std::ios::binary);
  os << text;
  finish_out(os, path);
}

std::string load_text(const std::filesystem::path& path) {
  auto is = open_in(path, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace glrr::io
