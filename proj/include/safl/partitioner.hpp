#pragma once

// Non-i.i.d. device shards: Gaussian-drawn sizes and a random label subset per
// device.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "safl/types.hpp"

namespace safl {

struct PartitionSpec {
  Index n = 1;
  double mean_size = 1.0;
  double size_var = 0.0;
  int max_labels_per_device = 1;
  int min_labels_per_device = 1;
  // Devices [0, biased_devices) are forced to a single label.
  Index biased_devices = 0;
  double holdout_fraction = 0.2;
  std::uint64_t seed = 0;
  // Label universe; defaults to the labels present in the dataset. Labels of the
  // universe with no samples are rejected when drawn and the subset is redrawn.
  std::optional<std::vector<int>> label_universe;

  void validate(std::size_t total_labels) const;
};

struct Shard {
  DatasetXd train;
  DatasetXd holdout;
  std::vector<int> labels;

  Index size() const { return train.size() + holdout.size(); }
};

std::vector<Index> sample_sizes(const PartitionSpec& spec);

std::vector<Shard> partition(const DatasetXd& data, const PartitionSpec& spec);

// Integral class labels of a dataset; throws if a target is not a
// non-negative integer.
std::vector<int> labels_of(const DatasetXd& data);

// CSV with header f0,...,f{d-1},label and one sample per row.
DatasetXd read_dataset_csv(const std::filesystem::path& path);
void write_dataset_csv(const std::filesystem::path& path, const DatasetXd& data);

}  // namespace safl
