#include "glrr/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>

#include "glrr/io.hpp"

namespace glrr {

namespace fs = std::filesystem;

namespace {

std::uint32_t read_be32(std::istream& is, const fs::path& path) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (is.gcount() != 4) throw Error(ErrorKind::Format, path.string() + ": truncated IDX header");
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | b[3];
}

void put_be32(std::ostream& os, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v >> 24), static_cast<char>((v >> 16) & 0xFF),
                     static_cast<char>((v >> 8) & 0xFF), static_cast<char>(v & 0xFF)};
  os.write(b, 4);
}

std::map<std::string, int> read_group_labels(const fs::path& dir) {
  const fs::path path = dir / "labels.csv";
  if (!fs::exists(path)) throw Error(ErrorKind::MissingLabels, "no labels.csv in " + dir.string());
  const auto table = io::load_csv_table(path);
  if (table.header.size() < 2 || table.header[0] != "group_id" || table.header[1] != "label") {
    throw Error(ErrorKind::Format, path.string() + ": expected header group_id,label");
  }
  std::map<std::string, int> out;
  for (const auto& row : table.rows) {
    try {
      out[row[0]] = std::stoi(row[1]);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Format, path.string() + ": bad label '" + row[1] + "'");
    }
  }
  return out;
}

std::vector<fs::path> files_with_extension(const fs::path& dir, const std::string& ext) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ext) continue;
    if (entry.path().filename() == "labels.csv" || entry.path().filename() == "groups.csv") continue;
    out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ImageSetGroup> load_per_file(const fs::path& dir, DatasetFormat format) {
  const bool gmat = format == DatasetFormat::GmatDir;
  std::vector<ImageSetGroup> groups;
  for (const auto& path : files_with_extension(dir, gmat ? ".gmat" : ".csv")) {
    ImageSetGroup g;
    g.id = path.stem().string();
    g.samples = gmat ? io::load_gmat(path) : io::load_csv_matrix(path);
    g.source = path.string();
    groups.push_back(std::move(g));
  }
  return groups;
}

fs::path find_idx3(const fs::path& dir) {
  std::vector<fs::path> hits;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    const bool ubyte = name.size() >= 10 && name.compare(name.size() - 10, 10, "idx3-ubyte") == 0;
    if (entry.is_regular_file() && (ubyte || entry.path().extension() == ".idx3")) hits.push_back(entry.path());
  }
  if (hits.size() != 1) {
    throw Error(ErrorKind::Format, dir.string() + ": expected exactly one IDX3 image file, found " +
                                       std::to_string(hits.size()));
  }
  return hits.front();
}

std::vector<ImageSetGroup> load_idx_grouped(const fs::path& dir) {
  const Matrix images = read_idx3_images(find_idx3(dir));
  const fs::path manifest = dir / "groups.csv";
  if (!fs::exists(manifest)) throw Error(ErrorKind::Format, "no groups.csv in " + dir.string());
  const auto table = io::load_csv_table(manifest);
  if (table.header.size() < 2 || table.header[0] != "image_index" || table.header[1] != "group_id") {
    throw Error(ErrorKind::Format, manifest.string() + ": expected header image_index,group_id");
  }
  std::map<std::string, std::vector<Eigen::Index>> members;
  for (const auto& row : table.rows) {
    long idx = -1;
    try {
      idx = std::stol(row[0]);
    } catch (const std::exception&) {
    }
    if (idx < 0 || idx >= images.cols()) {
      throw Error(ErrorKind::Format, manifest.string() + ": image index '" + row[0] + "' out of range");
    }
    members[row[1]].push_back(idx);
  }
  std::vector<ImageSetGroup> groups;
  for (const auto& [id, cols] : members) {
    ImageSetGroup g;
    g.id = id;
    g.samples = images(Eigen::all, cols);
    g.source = (dir / "groups.csv").string();
    groups.push_back(std::move(g));
  }
  return groups;
}

}  // namespace

DatasetFormat parse_dataset_format(const std::string& name) {
  if (name == "gmat-dir") return DatasetFormat::GmatDir;
  if (name == "idx-grouped") return DatasetFormat::IdxGrouped;
  if (name == "csv-dir") return DatasetFormat::CsvDir;
  throw Error(ErrorKind::Validation, "unknown dataset format '" + name + "'");
}

std::string to_string(DatasetFormat f) {
  switch (f) {
    case DatasetFormat::GmatDir: return "gmat-dir";
    case DatasetFormat::IdxGrouped: return "idx-grouped";
    case DatasetFormat::CsvDir: return "csv-dir";
  }
  return "unknown";
}

std::vector<ImageSetGroup> load_dataset(const fs::path& dir, DatasetFormat format) {
  if (!fs::is_directory(dir)) throw Error(ErrorKind::Io, "dataset directory not found: " + dir.string());
  auto groups = format == DatasetFormat::IdxGrouped ? load_idx_grouped(dir) : load_per_file(dir, format);
  if (groups.empty()) throw Error(ErrorKind::Format, "no groups found in " + dir.string());

  const auto labels = read_group_labels(dir);
  const Eigen::Index d = groups.front().samples.rows();
  for (auto& g : groups) {
    if (g.samples.cols() < 1 || g.samples.rows() < 1) throw Error(ErrorKind::Format, "group " + g.id + " is empty");
    if (g.samples.rows() != d) {
      throw Error(ErrorKind::Format, "group " + g.id + " has d = " + std::to_string(g.samples.rows()) +
                                         ", expected " + std::to_string(d));
    }
    const auto it = labels.find(g.id);
    if (it == labels.end()) throw Error(ErrorKind::MissingLabels, "no label for group " + g.id);
    g.label = it->second;
  }
  return groups;
}

Matrix read_idx3_images(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::Io, "cannot open " + path.string());
  if (read_be32(is, path) != 0x00000803u) throw Error(ErrorKind::Format, path.string() + ": bad IDX3 magic");
  const auto count = read_be32(is, path);
  const auto rows = read_be32(is, path);
  const auto cols = read_be32(is, path);
  const std::size_t pixels = std::size_t{rows} * cols;
  if (pixels == 0 || std::size_t{count} * pixels > (std::size_t{1} << 32)) {
    throw Error(ErrorKind::Format, path.string() + ": implausible IDX3 shape");
  }
  std::vector<unsigned char> buf(pixels);
  Matrix out(static_cast<Eigen::Index>(pixels), static_cast<Eigen::Index>(count));
  for (std::uint32_t img = 0; img < count; ++img) {
    is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(pixels));
    if (static_cast<std::size_t>(is.gcount()) != pixels) throw Error(ErrorKind::Format, path.string() + ": truncated");
    for (std::size_t k = 0; k < pixels; ++k) out(static_cast<Eigen::Index>(k), img) = buf[k];
  }
  return out;
}

void write_idx3_images(const fs::path& path, const std::vector<std::vector<std::uint8_t>>& images, std::uint32_t rows,
                       std::uint32_t cols) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorKind::Io, "cannot write " + path.string());
  put_be32(os, 0x00000803u);
  put_be32(os, static_cast<std::uint32_t>(images.size()));
  put_be32(os, rows);
  put_be32(os, cols);
  for (const auto& img : images) {
    if (img.size() != std::size_t{rows} * cols) throw Error(ErrorKind::Shape, "image size does not match rows*cols");
    os.write(reinterpret_cast<const char*>(img.data()), static_cast<std::streamsize>(img.size()));
  }
  if (!os) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::vector<int> read_idx1_labels(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::Io, "cannot open " + path.string());
  if (read_be32(is, path) != 0x00000801u) throw Error(ErrorKind::Format, path.string() + ": bad IDX1 magic");
  const auto count = read_be32(is, path);
  std::vector<unsigned char> buf(count);
  is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(count));
  if (static_cast<std::size_t>(is.gcount()) != count) throw Error(ErrorKind::Format, path.string() + ": truncated");
  return {buf.begin(), buf.end()};
}

std::vector<ImageSetGroup> random_class_subgroups(const Matrix& images, const std::vector<int>& labels,
                                                  int groups_per_class, int group_size, std::uint64_t seed) {
  if (static_cast<std::size_t>(images.cols()) != labels.size()) {
    throw Error(ErrorKind::LengthMismatch, "image and label counts differ");
  }
  if (groups_per_class < 1 || group_size < 1) throw Error(ErrorKind::Validation, "group counts must be positive");
  std::map<int, std::vector<Eigen::Index>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(static_cast<Eigen::Index>(i));

  std::mt19937_64 rng(seed);
  std::vector<ImageSetGroup> groups;
  for (auto& [label, idx] : by_class) {
    const std::size_t need = static_cast<std::size_t>(groups_per_class) * static_cast<std::size_t>(group_size);
    if (idx.size() < need) {
      throw Error(ErrorKind::Validation, "class " + std::to_string(label) + " has only " +
                                             std::to_string(idx.size()) + " images");
    }
    std::shuffle(idx.begin(), idx.end(), rng);
    for (int g = 0; g < groups_per_class; ++g) {
      ImageSetGroup group;
      char id[32];
      std::snprintf(id, sizeof id, "c%02d_g%03d", label, g);
      group.id = id;
      group.label = label;
      const auto first = idx.begin() + static_cast<std::ptrdiff_t>(g) * group_size;
      group.samples = images(Eigen::all, std::vector<Eigen::Index>(first, first + group_size));
      group.source = "random-subgroup";
      groups.push_back(std::move(group));
    }
  }
  return groups;
}

}  // namespace glrr
