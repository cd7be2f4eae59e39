#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "glrr/manifold.hpp"

namespace glrr {

/// One image set: columns of `samples` are vectorized images.
struct ImageSetGroup {
  std::string id;
  int label = -1;
  Matrix samples;
  std::string source;
};

enum class DatasetFormat { GmatDir, IdxGrouped, CsvDir };

DatasetFormat parse_dataset_format(const std::string& name);
std::string to_string(DatasetFormat f);

/// Loads a directory of image sets, one group per file, sorted by group id.
/// Every layout needs a `labels.csv` (group_id,label).
///   gmat-dir     *.gmat files, each d x M; the file stem is the group id.
///   csv-dir      *.csv files (headerless matrices) other than labels.csv.
///   idx-grouped  one IDX3 image file (*idx3-ubyte or *.idx3) plus
///                `groups.csv` (image_index,group_id); pixel (r, c) of an
///                m x n image lands at vector index r*n + c.
/// Throws Format on bad magic/shape or mismatched d, MissingLabels when a
/// group has no label, Io when files are missing.
std::vector<ImageSetGroup> load_dataset(const std::filesystem::path& dir, DatasetFormat format);

/// Raw IDX3 (unsigned byte) images: `count` images of rows x cols, each
/// flattened row-major into one column of the result.
Matrix read_idx3_images(const std::filesystem::path& path);
void write_idx3_images(const std::filesystem::path& path, const std::vector<std::vector<std::uint8_t>>& images,
                       std::uint32_t rows, std::uint32_t cols);
std::vector<int> read_idx1_labels(const std::filesystem::path& path);

/// MNIST-style subgroups: for every class, `groups_per_class` groups of
/// `group_size` distinct images drawn at random with `seed`.
std::vector<ImageSetGroup> random_class_subgroups(const Matrix& images, const std::vector<int>& labels,
                                                  int groups_per_class, int group_size, std::uint64_t seed);

}  // namespace glrr
