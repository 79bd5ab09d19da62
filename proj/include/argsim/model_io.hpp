// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>

#include "argsim/ml.hpp"

namespace argsim::ml {

inline constexpr std::string_view kModelSchema = "argsim-model-v1";

/// Versioned JSON model document: kind, hyperparameters, standardizer
/// statistics, weights or support vectors, and the feature layout
/// fingerprint. Round-trips doubles exactly.
void save_model(std::ostream& out, const RegressionModel& model);
void save_model_file(const std::string& path, const RegressionModel& model);
RegressionModel load_model(std::istream& in);
RegressionModel load_model_file(const std::string& path);

}  // namespace argsim::ml
