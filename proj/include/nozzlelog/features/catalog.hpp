#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "nozzlelog/core/types.hpp"

namespace nozzlelog::features {

/// One column of the feature table: either a time-based kernel applied to a
/// count channel (`ch<k>__<family>[__<params>]`) or a terminal-grid feature
/// (`spatial__<name>`).
struct CatalogEntry {
  std::string name;
  int channel;  // 0..4 for time-based entries, -1 for spatial ones
  std::function<double(const Eigen::ArrayXd&)> series_fn;     // time-based
  std::function<double(const NozzleGrid&)> grid_fn;           // spatial
};

/// Ordered, named feature columns. Order and names are stable across runs and
/// platforms; the header digest identifies the catalog in artifacts.
class FeatureCatalog {
public:
  /// 20 time-based families -> 50 columns per channel x 5 channels, plus 6
  /// spatial columns: 256 columns total.
  static FeatureCatalog default_catalog();

  const std::vector<CatalogEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::vector<std::string> column_names() const;

  /// FNV-1a digest of the comma-joined column names, as 16 hex chars.
  std::string digest() const;

  int column_index(const std::string& name) const;  // -1 if absent

  void add(CatalogEntry entry);

private:
  std::vector<CatalogEntry> entries_;
};

}  // namespace nozzlelog::features
