#pragma once

#include <string>

#include <json.hpp>

#include "aptk/classify.hpp"
#include "aptk/convolution.hpp"

namespace aptk {

/// Deterministic (insertion-ordered) JSON rendering of reports; every numeric
/// claim carries its resolution and window.
nlohmann::ordered_json to_json(const ClassReport& report);
nlohmann::ordered_json to_json(const InvarianceReport& report);

/// Residual-curve CSV (columns: tau, M, residual) for plotting.
void write_residual_csv(const ClassReport& report, const std::string& path);

}  // namespace aptk
