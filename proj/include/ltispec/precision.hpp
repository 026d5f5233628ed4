#pragma once

#include <string>

namespace ltispec {

// Scalar used internally by the coefficient algorithms. Inputs and outputs
// are always double; only the intermediate arithmetic changes.
enum class Precision { Auto, Double, Quad, Mp100, Mp200, Mp400 };

// Mantissa bits of the tier (Auto reports 0).
int precision_bits(Precision p);

// Smallest tier with at least 8n + 40 mantissa bits (Double is never chosen).
Precision precision_for_dimension(int n);

// Next tier up; Mp400 maps to itself.
Precision next_precision(Precision p);

// Auto is resolved against the dimension, anything else passes through.
Precision resolve_precision(Precision p, int n);

std::string to_string(Precision p);
Precision parse_precision(const std::string& name);

}  // namespace ltispec
