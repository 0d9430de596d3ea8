#include "safl/partitioner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "safl/rng.hpp"

namespace safl {

void PartitionSpec::validate(std::size_t total_labels) const {
  if (n < 1) throw std::invalid_argument("partition: n must be >= 1");
  if (!(mean_size > 0)) throw std::invalid_argument("partition: mean_size must be > 0");
  if (!(size_var >= 0)) throw std::invalid_argument("partition: size_var must be >= 0");
  if (max_labels_per_device < 1) throw std::invalid_argument("partition: max_labels_per_device must be >= 1");
  if (min_labels_per_device < 1 || min_labels_per_device > max_labels_per_device)
    throw std::invalid_argument("partition: min_labels_per_device must lie in [1, max_labels_per_device]");
  if (static_cast<std::size_t>(max_labels_per_device) > total_labels)
    throw std::invalid_argument("partition: max_labels_per_device exceeds the label count");
  if (biased_devices < 0 || biased_devices > n) throw std::invalid_argument("partition: biased_devices out of range");
  if (!(holdout_fraction >= 0 && holdout_fraction < 1))
    throw std::invalid_argument("partition: holdout_fraction must lie in [0, 1)");
}

std::vector<Index> sample_sizes(const PartitionSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("sample_sizes: n must be >= 1");
  Rng rng = make_stream(spec.seed, Stream::partition, 0);
  std::normal_distribution<double> normal(spec.mean_size, std::sqrt(spec.size_var));
  std::vector<Index> sizes(static_cast<std::size_t>(spec.n));
  for (auto& m : sizes) {
    const double x = spec.size_var > 0 ? normal(rng) : spec.mean_size;
    m = std::max<Index>(static_cast<Index>(std::floor(x)), 1);
  }
  return sizes;
}

std::vector<int> labels_of(const DatasetXd& data) {
  std::vector<int> out(static_cast<std::size_t>(data.size()));
  for (Index i = 0; i < data.size(); ++i) {
    const double y = data.targets(i);
    if (!(y >= 0) || std::floor(y) != y) throw std::invalid_argument("dataset label is not a non-negative integer");
    out[static_cast<std::size_t>(i)] = static_cast<int>(y);
  }
  return out;
}

std::vector<Shard> partition(const DatasetXd& data, const PartitionSpec& spec) {
  const auto labels = labels_of(data);
  std::map<int, std::vector<Index>> by_label;
  for (std::size_t i = 0; i < labels.size(); ++i) by_label[labels[i]].push_back(static_cast<Index>(i));

  std::vector<int> universe;
  if (spec.label_universe) {
    universe = *spec.label_universe;
  } else {
    for (const auto& [label, rows] : by_label) universe.push_back(label);
  }
  spec.validate(universe.size());
  if (by_label.empty()) throw std::invalid_argument("partition: empty dataset");

  const auto sizes = sample_sizes(spec);
  Rng rng = make_stream(spec.seed, Stream::partition, 1);
  std::vector<Shard> shards(static_cast<std::size_t>(spec.n));
  for (Index k = 0; k < spec.n; ++k) {
    const int hi = k < spec.biased_devices ? 1 : spec.max_labels_per_device;
    const int lo = k < spec.biased_devices ? 1 : spec.min_labels_per_device;
    std::vector<int> subset;
    for (int attempt = 0;; ++attempt) {
      if (attempt > 10000) throw std::runtime_error("partition: could not draw a label subset with samples");
      const int count = std::uniform_int_distribution<int>(lo, hi)(rng);
      std::vector<int> shuffled = universe;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      subset.assign(shuffled.begin(), shuffled.begin() + count);
      const bool all_present = std::all_of(subset.begin(), subset.end(),
                                           [&](int l) { return by_label.count(l) > 0; });
      if (all_present) break;
    }
    std::sort(subset.begin(), subset.end());

    std::vector<Index> pool;
    for (int l : subset) pool.insert(pool.end(), by_label[l].begin(), by_label[l].end());
    const Index m = sizes[static_cast<std::size_t>(k)];
    std::vector<Index> chosen;
    if (static_cast<Index>(pool.size()) >= m) {
      std::shuffle(pool.begin(), pool.end(), rng);
      chosen.assign(pool.begin(), pool.begin() + m);
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      for (Index i = 0; i < m; ++i) chosen.push_back(pool[pick(rng)]);
    }

    auto held = static_cast<Index>(std::floor(spec.holdout_fraction * static_cast<double>(m)));
    if (held >= m) held = m - 1;
    const std::vector<Index> hold_rows(chosen.begin(), chosen.begin() + held);
    const std::vector<Index> train_rows(chosen.begin() + held, chosen.end());
    auto& shard = shards[static_cast<std::size_t>(k)];
    shard.train = select_rows(data, train_rows);
    shard.holdout = select_rows(data, hold_rows);
    shard.labels = std::move(subset);
  }
  return shards;
}

DatasetXd read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open dataset " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("dataset " + path.string() + " has no header");
  const auto cols = static_cast<Index>(std::count(line.begin(), line.end(), ',') + 1);
  if (cols < 2) throw std::invalid_argument("dataset header needs at least one feature and a label");
  std::vector<double> values;
  Index rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    Index count = 0;
    while (std::getline(ss, cell, ',')) {
      std::size_t used = 0;
      values.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument("dataset: bad number '" + cell + "'");
      ++count;
    }
    if (count != cols)
      throw std::invalid_argument("dataset row " + std::to_string(rows + 1) + " has " + std::to_string(count) +
                                  " columns, expected " + std::to_string(cols));
    ++rows;
  }
  DatasetXd out;
  const Eigen::Map<const MatrixXd> all(values.data(), rows, cols);
  out.features = all.leftCols(cols - 1);
  out.targets = all.col(cols - 1);
  return out;
}

void write_dataset_csv(const std::filesystem::path& path, const DatasetXd& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write dataset " + path.string());
  for (Index j = 0; j < data.dim(); ++j) out << 'f' << j << ',';
  out << "label\n";
  out.precision(17);
  for (Index i = 0; i < data.size(); ++i) {
    for (Index j = 0; j < data.dim(); ++j) out << data.features(i, j) << ',';
    out << data.targets(i) << '\n';
  }
}

}  // namespace safl
