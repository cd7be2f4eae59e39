#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "glrr/gram.hpp"

namespace glrr::io {

/// GMAT container: "GMAT", u32 version (1), u32 rows, u32 cols, then
/// rows*cols little-endian f64 in row-major order.
void write_gmat(std::ostream& os, const Matrix& m);
Matrix read_gmat(std::istream& is);
void save_gmat(const std::filesystem::path& path, const Matrix& m);
Matrix load_gmat(const std::filesystem::path& path);

/// GMAT stack: "GMSK", u32 version (1), u32 count, then `count` GMAT records.
void write_gmat_stack(std::ostream& os, const std::vector<Matrix>& ms);
std::vector<Matrix> read_gmat_stack(std::istream& is);
void save_gmat_stack(const std::filesystem::path& path, const std::vector<Matrix>& ms);
std::vector<Matrix> load_gmat_stack(const std::filesystem::path& path);

void save_gram(const std::filesystem::path& path, const GramTensor& b);
GramTensor load_gram(const std::filesystem::path& path);

/// Headerless comma-separated matrix, 17 significant digits.
void write_csv_matrix(std::ostream& os, const Matrix& m);
Matrix read_csv_matrix(std::istream& is);
void save_csv_matrix(const std::filesystem::path& path, const Matrix& m);
Matrix load_csv_matrix(const std::filesystem::path& path);

/// Header row, then comma-separated records. Fields are trimmed; no quoting.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
CsvTable load_csv_table(const std::filesystem::path& path);

/// "index,label" CSV.
void save_labels(const std::filesystem::path& path, const std::vector<int>& labels);
std::vector<int> load_labels(const std::filesystem::path& path);

/// Whole-file text helpers; failures raise Io.
void save_text(const std::filesystem::path& path, const std::string& text);
std::string load_text(const std::filesystem::path& path);

}  // namespace glrr::io
