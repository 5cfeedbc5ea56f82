#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "nozzlelog/core/types.hpp"
#include "nozzlelog/features/catalog.hpp"

namespace nozzlelog::features {

/// Fixed-order numeric feature table, one row per printhead. Values are
/// finite or NaN (undefined feature).
struct FeatureMatrix {
  std::vector<std::string> head_ids;
  std::vector<std::string> columns;
  Eigen::MatrixXd values;  // head_ids.size() x columns.size()

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }

  int column_index(const std::string& name) const;
  int row_index(const std::string& head_id) const;

  /// Digest of the header (column names); identifies the catalog.
  std::string header_digest() const;
  /// Digest of the full serialized table; identifies the dataset.
  std::string content_digest() const;

  /// Row subset in the given order.
  FeatureMatrix select_rows(const std::vector<Eigen::Index>& idx) const;
};

/// One row per log, in input order. Time-based entries run on the
/// downsampled count series; spatial entries on the last downsampled grid.
/// Heads with fewer than 2 records get NaN where a feature is undefined.
FeatureMatrix extract_matrix(const std::vector<NozzleLog>& logs, const FeatureCatalog& catalog,
                             unsigned workers = 1);

/// CSV round-trip: header `head_id,<col>,...`, values at full precision,
/// NaN spelled "NaN".
void write_feature_matrix(const FeatureMatrix& m, const std::string& path);
FeatureMatrix read_feature_matrix(const std::string& path);

}  // namespace nozzlelog::features
