#include "bioledger/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace bioledger {

QuantizedTemplate quantize(const std::vector<double>& values, TemplateEncoding encoding) {
    for (double v : values) {
        if (!std::isfinite(v)) throw NonFiniteInput();
    }

    QuantizedTemplate q;
    q.encoding = encoding;
    q.count = values.size();

    if (encoding == TemplateEncoding::Float32) {
        q.payload.resize(values.size() * 4);
        for (size_t i = 0; i < values.size(); ++i) {
            float f = static_cast<float>(values[i]);  // round to nearest
            std::memcpy(q.payload.data() + 4 * i, &f, 4);
        }
        return q;
    }

    if (values.empty()) return q;
    auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
    double lo = *min_it, hi = *max_it;
    if (lo == hi) {
        // constant vector: all codes zero, value carried by the offset
        q.scale = 1.0;
        q.offset = lo;
        q.payload.assign(values.size() * 2, 0);
        return q;
    }
    q.offset = lo;
    q.scale = (hi - lo) / 65535.0;
    q.payload.resize(values.size() * 2);
    for (size_t i = 0; i < values.size(); ++i) {
        double code = std::round((values[i] - q.offset) / q.scale);
        uint16_t c = static_cast<uint16_t>(std::clamp(code, 0.0, 65535.0));
        q.payload[2 * i] = static_cast<uint8_t>(c & 0xff);
        q.payload[2 * i + 1] = static_cast<uint8_t>(c >> 8);
    }
    return q;
}

std::vector<double> dequantize(const QuantizedTemplate& q) {
    std::vector<double> out(q.count);
    if (q.encoding == TemplateEncoding::Float32) {
        for (size_t i = 0; i < q.count; ++i) {
            float f;
            std::memcpy(&f, q.payload.data() + 4 * i, 4);
            out[i] = static_cast<double>(f);
        }
        return out;
    }
    for (size_t i = 0; i < q.count; ++i) {
        uint16_t c = static_cast<uint16_t>(q.payload[2 * i] | q.payload[2 * i + 1] << 8);
        out[i] = q.offset + q.scale * c;
    }
    return out;
}

}  // namespace bioledger
