#ifndef BITRAND_RATIONAL_HPP
#define BITRAND_RATIONAL_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bitrand {

using int128 = __int128;
using uint128 = unsigned __int128;

/// Exact rational on 128-bit integers, always stored normalized
/// (gcd(num, den) = 1, den > 0). Wide enough for every lattice this
/// library enumerates: numerators stay below 2^63 after reduction,
/// so cross-multiplied comparisons fit in 128 bits.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(int128 num, int128 den) : num_(num), den_(den) {
        if (den_ == 0) throw std::invalid_argument("Rational: zero denominator");
        normalize();
    }
    explicit Rational(int64_t v) : num_(v), den_(1) {}

    int128 num() const { return num_; }
    int128 den() const { return den_; }

    Rational operator+(const Rational& o) const { return {num_ * o.den_ + o.num_ * den_, den_ * o.den_}; }
    Rational operator-(const Rational& o) const { return {num_ * o.den_ - o.num_ * den_, den_ * o.den_}; }
    Rational operator*(const Rational& o) const { return {num_ * o.num_, den_ * o.den_}; }
    Rational operator/(const Rational& o) const {
        if (o.num_ == 0) throw std::domain_error("Rational: division by zero");
        return {num_ * o.den_, den_ * o.num_};
    }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const { return num_ * o.den_ < o.num_ * den_; }
    bool operator<=(const Rational& o) const { return num_ * o.den_ <= o.num_ * den_; }
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator>=(const Rational& o) const { return o <= *this; }

    Rational abs() const { return num_ < 0 ? Rational(-num_, den_) : *this; }

    double to_double() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    /// "num/den"; integers render without the "/1".
    std::string to_fraction_string() const {
        if (den_ == 1) return int128_to_string(num_);
        return int128_to_string(num_) + "/" + int128_to_string(den_);
    }

    /// Decimal rendering by long division, `digits` significant digits,
    /// round half away from zero.
    std::string to_decimal_string(int digits = 12) const;

    static std::string int128_to_string(int128 v);

private:
    void normalize() {
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        uint128 a = num_ < 0 ? static_cast<uint128>(-num_) : static_cast<uint128>(num_);
        uint128 b = static_cast<uint128>(den_);
        while (b != 0) { uint128 t = a % b; a = b; b = t; }
        if (a > 1) {
            num_ /= static_cast<int128>(a);
            den_ /= static_cast<int128>(a);
        }
        if (num_ == 0) den_ = 1;
    }

    int128 num_;
    int128 den_;
};

inline std::string Rational::int128_to_string(int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    uint128 u = neg ? static_cast<uint128>(-v) : static_cast<uint128>(v);
    std::string s;
    while (u != 0) { s.push_back(static_cast<char>('0' + int(u % 10))); u /= 10; }
    if (neg) s.push_back('-');
    return {s.rbegin(), s.rend()};
}

inline std::string Rational::to_decimal_string(int digits) const {
    if (num_ == 0) return "0";
    bool neg = num_ < 0;
    uint128 n = neg ? static_cast<uint128>(-num_) : static_cast<uint128>(num_);
    uint128 d = static_cast<uint128>(den_);

    // integer part
    uint128 ip = n / d;
    uint128 rem = n % d;
    std::string intpart = int128_to_string(static_cast<int128>(ip));

    int sig = 0;
    std::string frac;
    int exponent10 = 0;  // leading zeros after the point, when ip == 0
    if (ip != 0) {
        sig = static_cast<int>(intpart.size());
    } else {
        intpart = "0";
    }
    // one guard digit for rounding
    while (rem != 0 && sig < digits + 1) {
        rem *= 10;
        uint128 q = rem / d;
        rem %= d;
        char c = static_cast<char>('0' + int(q));
        if (sig == 0 && c == '0') {
            ++exponent10;
            frac.push_back(c);
            continue;
        }
        ++sig;
        frac.push_back(c);
    }
    std::string all = intpart + frac;  // digits, point position = intpart.size()
    size_t point = intpart.size();
    // round at `digits` significant digits
    // locate index of first significant digit
    size_t first_sig = all.find_first_not_of("0");
    if (first_sig == std::string::npos) return "0";
    size_t keep_end = first_sig + static_cast<size_t>(digits);
    if (keep_end < all.size()) {
        bool round_up = all[keep_end] >= '5';
        all.erase(keep_end);
        if (round_up) {
            size_t i = all.size();
            while (i > 0) {
                --i;
                if (all[i] == '9') all[i] = '0';
                else { ++all[i]; break; }
                if (i == 0) { all.insert(all.begin(), '1'); ++point; }
            }
        }
    }
    // pad so the point fits
    while (all.size() < point) all.push_back('0');
    std::string out = all.substr(0, point);
    std::string fpart = all.substr(point);
    while (!fpart.empty() && fpart.back() == '0') fpart.pop_back();
    if (out.empty()) out = "0";
    if (!fpart.empty()) out += "." + fpart;
    if (neg) out = "-" + out;
    return out;
}

}  // namespace bitrand

#endif
