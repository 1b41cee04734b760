#include "bioledger/decimal.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace bioledger {

namespace {

constexpr __int128 kMaxMantissa = (static_cast<__int128>(1) << 126);

__int128 abs128(__int128 v) { return v < 0 ? -v : v; }

std::string digits_of(__int128 v) {
    if (v == 0) return "0";
    std::string out;
    __int128 a = abs128(v);
    while (a > 0) {
        out.insert(out.begin(), static_cast<char>('0' + static_cast<int>(a % 10)));
        a /= 10;
    }
    return out;
}

__int128 checked_mul(__int128 a, __int128 b) {
    if (a == 0 || b == 0) return 0;
    __int128 r = a * b;
    if (abs128(r) >= kMaxMantissa || r / b != a) {
        throw std::overflow_error("decimal mantissa overflow");
    }
    return r;
}

__int128 pow10_128(int k) {
    __int128 p = 1;
    for (int i = 0; i < k; ++i) p = checked_mul(p, 10);
    return p;
}

}  // namespace

Decimal Decimal::from_u64(uint64_t integer) {
    return make(static_cast<__int128>(integer), 0);
}

Decimal Decimal::scaled(int64_t mantissa, int exponent) {
    return make(static_cast<__int128>(mantissa), exponent);
}

Decimal Decimal::make(__int128 mantissa, int exponent) {
    Decimal d;
    d.mantissa_ = mantissa;
    d.exponent_ = exponent;
    d.normalize();
    return d;
}

void Decimal::normalize() {
    if (mantissa_ == 0) {
        exponent_ = 0;
        return;
    }
    while (mantissa_ % 10 == 0) {
        mantissa_ /= 10;
        ++exponent_;
    }
}

Decimal Decimal::parse(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty decimal literal");
    size_t i = 0;
    bool negative = false;
    if (text[i] == '+' || text[i] == '-') {
        negative = text[i] == '-';
        ++i;
    }
    __int128 mantissa = 0;
    int exponent = 0;
    bool seen_digit = false;
    bool seen_point = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c == '.') {
            if (seen_point) throw std::invalid_argument("malformed decimal: " + text);
            seen_point = true;
            continue;
        }
        if (c < '0' || c > '9') throw std::invalid_argument("malformed decimal: " + text);
        mantissa = checked_mul(mantissa, 10) + (c - '0');
        if (seen_point) --exponent;
        seen_digit = true;
    }
    if (!seen_digit) throw std::invalid_argument("malformed decimal: " + text);
    if (negative) mantissa = -mantissa;
    return make(mantissa, exponent);
}

Decimal Decimal::operator*(const Decimal& rhs) const {
    return make(checked_mul(mantissa_, rhs.mantissa_), exponent_ + rhs.exponent_);
}

Decimal Decimal::operator+(const Decimal& rhs) const {
    int e = std::min(exponent_, rhs.exponent_);
    __int128 a = checked_mul(mantissa_, pow10_128(exponent_ - e));
    __int128 b = checked_mul(rhs.mantissa_, pow10_128(rhs.exponent_ - e));
    return make(a + b, e);
}

Decimal Decimal::operator-(const Decimal& rhs) const {
    Decimal neg = rhs;
    neg.mantissa_ = -neg.mantissa_;
    return *this + neg;
}

Decimal Decimal::shift10(int k) const {
    return make(mantissa_, exponent_ - k);
}

int Decimal::compare(const Decimal& rhs) const {
    Decimal diff = *this - rhs;
    if (diff.mantissa_ < 0) return -1;
    if (diff.mantissa_ > 0) return 1;
    return 0;
}

std::string Decimal::to_string() const {
    if (mantissa_ == 0) return "0";
    std::string digits = digits_of(mantissa_);
    std::string sign = mantissa_ < 0 ? "-" : "";
    if (exponent_ >= 0) {
        return sign + digits + std::string(static_cast<size_t>(exponent_), '0');
    }
    size_t frac = static_cast<size_t>(-exponent_);
    if (digits.size() <= frac) {
        return sign + "0." + std::string(frac - digits.size(), '0') + digits;
    }
    return sign + digits.substr(0, digits.size() - frac) + "." + digits.substr(digits.size() - frac);
}

std::string Decimal::to_fixed(int fraction_digits) const {
    // Round half away from zero at the requested precision, exactly.
    __int128 m = mantissa_;
    int e = exponent_;
    int target = -fraction_digits;
    while (e > target) {
        m = checked_mul(m, 10);
        --e;
    }
    while (e < target) {
        __int128 q = m / 10;
        __int128 r = m % 10;
        if (r >= 5) q += 1;
        if (r <= -5) q -= 1;
        m = q;
        ++e;
    }
    std::string sign = m < 0 ? "-" : "";
    std::string digits = digits_of(m);
    if (fraction_digits == 0) return sign + digits;
    size_t frac = static_cast<size_t>(fraction_digits);
    if (digits.size() <= frac) {
        return sign + "0." + std::string(frac - digits.size(), '0') + digits;
    }
    return sign + digits.substr(0, digits.size() - frac) + "." + digits.substr(digits.size() - frac);
}

double Decimal::to_double() const {
    return std::strtod(to_string().c_str(), nullptr);
}

}  // namespace bioledger
