#pragma once

#include <iosfwd>
#include <string>

#include "nozzlelog/ml/ovr.hpp"

namespace nozzlelog::ml {

/// Versioned self-describing text artifact (params, seed, tree arrays,
/// weights). Reload reproduces bit-identical predictions; doubles are
/// written in shortest round-trip form.
void write_model(std::ostream& out, const OvrClassifier& model);
void write_model_file(const std::string& path, const OvrClassifier& model);

OvrClassifier read_model(std::istream& in);
OvrClassifier read_model_file(const std::string& path);

}  // namespace nozzlelog::ml
