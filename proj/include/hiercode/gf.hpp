#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hiercode {

// Field element of GF(2^theta): coefficient bitmask, bit k holds the X^k coefficient.
struct Elem {
    std::uint32_t value = 0;

    constexpr Elem() = default;
    constexpr explicit Elem(std::uint32_t v) : value(v) {}
    constexpr bool is_zero() const { return value == 0; }
    friend constexpr bool operator==(Elem a, Elem b) { return a.value == b.value; }
    friend constexpr bool operator!=(Elem a, Elem b) { return a.value != b.value; }
    friend constexpr bool operator<(Elem a, Elem b) { return a.value < b.value; }
};

class Field {
public:
    // Throws NonPrimitivePolynomial / InvalidParams.
    Field(unsigned theta, std::uint32_t poly);
    explicit Field(unsigned theta);

    static std::optional<std::uint32_t> default_poly(unsigned theta);

    unsigned theta() const { return theta_; }
    std::uint32_t poly() const { return poly_; }
    std::uint32_t size() const { return q_; }
    std::uint32_t order() const { return q_ - 1; }

    Elem zero() const { return Elem{0}; }
    Elem one() const { return Elem{1}; }
    Elem beta() const { return Elem{2 % q_}; }
    Elem beta_pow(long long k) const;
    bool contains(Elem a) const { return a.value < q_; }

    Elem add(Elem a, Elem b) const { return Elem{a.value ^ b.value}; }
    Elem sub(Elem a, Elem b) const { return add(a, b); }
    Elem mul(Elem a, Elem b) const;
    Elem div(Elem a, Elem b) const;
    Elem inv(Elem a) const;
    Elem pow(Elem a, long long e) const;
    // Discrete log base beta; a must be nonzero.
    std::uint32_t log(Elem a) const;

    // "0", "1" or "b^k".
    std::string to_power(Elem a) const;
    std::string to_hex(Elem a) const;
    // Constant term first, theta characters ("1100" for 1 + X).
    std::string to_bits(Elem a) const;
    // Accepts "0", "1", "b^k", "b", hex "0x..", or a decimal integer.
    Elem parse(const std::string& text) const;

private:
    unsigned theta_;
    std::uint32_t poly_;
    std::uint32_t q_;
    std::vector<std::uint32_t> exp_;  // length 2*(q-1)
    std::vector<std::uint32_t> log_;  // length q
};

using FieldPtr = std::shared_ptr<const Field>;

FieldPtr make_field(unsigned theta, std::optional<std::uint32_t> poly = std::nullopt);

}  // namespace hiercode
