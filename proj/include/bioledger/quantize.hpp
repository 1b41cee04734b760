#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bioledger/bytes.hpp"

namespace bioledger {

struct NonFiniteInput : std::invalid_argument {
    NonFiniteInput() : std::invalid_argument("feature values must be finite for quantization") {}
};

enum class TemplateEncoding {
    Int16Scaled,  // 2 bytes/element, affine [min,max] -> [0, 65535]
    Float32,      // 4 bytes/element, IEEE single precision
};

/// Byte-level template payload plus the parameters needed to invert it.
struct QuantizedTemplate {
    Bytes payload;
    TemplateEncoding encoding = TemplateEncoding::Int16Scaled;
    double scale = 1.0;   // int16 only
    double offset = 0.0;  // int16 only
    size_t count = 0;

    size_t bits_per_element() const { return encoding == TemplateEncoding::Int16Scaled ? 16 : 32; }
};

QuantizedTemplate quantize(const std::vector<double>& values, TemplateEncoding encoding);
std::vector<double> dequantize(const QuantizedTemplate& q);

}  // namespace bioledger
