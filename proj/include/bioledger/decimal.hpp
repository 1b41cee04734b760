#pragma once

#include <cstdint>
#include <string>

namespace bioledger {

/// Exact base-10 fixed-point number: mantissa * 10^exponent.
///
/// Fee tables must round-trip without binary-float drift, so every
/// arithmetic step here is integer-exact; overflow throws instead of
/// silently losing digits.
class Decimal {
  public:
    Decimal() : mantissa_(0), exponent_(0) {}
    explicit Decimal(int64_t integer) : mantissa_(integer), exponent_(0) { normalize(); }
    static Decimal from_u64(uint64_t integer);

    /// Parses "123", "-0.004", "1.25e-3" is not supported; plain decimal only.
    static Decimal parse(const std::string& text);

    static Decimal scaled(int64_t mantissa, int exponent);

    Decimal operator*(const Decimal& rhs) const;
    Decimal operator+(const Decimal& rhs) const;
    Decimal operator-(const Decimal& rhs) const;

    /// Exact division by a power of ten (10^k).
    Decimal shift10(int k) const;

    int compare(const Decimal& rhs) const;
    bool operator==(const Decimal& rhs) const { return compare(rhs) == 0; }
    bool operator<(const Decimal& rhs) const { return compare(rhs) < 0; }
    bool operator<=(const Decimal& rhs) const { return compare(rhs) <= 0; }

    bool is_zero() const { return mantissa_ == 0; }

    /// Shortest exact decimal representation ("0.01215872").
    std::string to_string() const;

    /// Fixed number of fraction digits, round-half-up ("0.0122" at 4).
    std::string to_fixed(int fraction_digits) const;

    double to_double() const;

  private:
    __int128 mantissa_;
    int exponent_;

    void normalize();
    static Decimal make(__int128 mantissa, int exponent);
};

}  // namespace bioledger
