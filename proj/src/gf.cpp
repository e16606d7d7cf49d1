#include "hiercode/gf.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdio>

#include "hiercode/error.hpp"

namespace hiercode {

namespace {

constexpr std::array<std::uint32_t, 17> kDefaultPolys = {
    0,       0,       0x7,     0xB,     0x13,    0x25,    0x43,    0x89,   0x11D,
    0x211,   0x409,   0x805,   0x1053,  0x201B,  0x4443,  0x8003,  0x1100B,
};

}  // namespace

std::optional<std::uint32_t> Field::default_poly(unsigned theta) {
    if (theta < 2 || theta > 16) return std::nullopt;
    return kDefaultPolys[theta];
}

Field::Field(unsigned theta) : Field(theta, default_poly(theta).value_or(0)) {}

Field::Field(unsigned theta, std::uint32_t poly) : theta_(theta), poly_(poly) {
    if (theta < 2 || theta > 16)
        throw Error(ErrorKind::InvalidParams, "theta must lie in [2,16], got " + std::to_string(theta));
    if (std::bit_width(poly) != theta + 1)
        throw Error(ErrorKind::InvalidParams, "polynomial degree must equal theta");
    q_ = 1u << theta;
    const std::uint32_t ord = q_ - 1;
    exp_.assign(2 * ord, 0);
    log_.assign(q_, 0);
    std::vector<bool> seen(q_, false);
    std::uint32_t x = 1;
    for (std::uint32_t k = 0; k < ord; ++k) {
        if (seen[x])
            throw Error(ErrorKind::NonPrimitivePolynomial,
                        "beta has multiplicative order " + std::to_string(k) + ", expected " +
                            std::to_string(ord));
        seen[x] = true;
        exp_[k] = x;
        log_[x] = k;
        x <<= 1;
        if (x & q_) x ^= poly;
    }
    if (x != 1)
        throw Error(ErrorKind::NonPrimitivePolynomial, "beta^(q-1) != 1; polynomial is reducible");
    for (std::uint32_t k = ord; k < 2 * ord; ++k) exp_[k] = exp_[k - ord];
}

Elem Field::beta_pow(long long k) const {
    const long long ord = order();
    long long e = k % ord;
    if (e < 0) e += ord;
    return Elem{exp_[static_cast<std::size_t>(e)]};
}

Elem Field::mul(Elem a, Elem b) const {
    if (a.is_zero() || b.is_zero()) return Elem{0};
    return Elem{exp_[log_[a.value] + log_[b.value]]};
}

Elem Field::inv(Elem a) const {
    if (a.is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero");
    return Elem{exp_[(order() - log_[a.value]) % order()]};
}

Elem Field::div(Elem a, Elem b) const { return mul(a, inv(b)); }

Elem Field::pow(Elem a, long long e) const {
    if (a.is_zero()) {
        if (e == 0) return one();
        if (e < 0) throw Error(ErrorKind::DivisionByZero, "negative power of zero");
        return zero();
    }
    const long long ord = order();
    long long k = (static_cast<long long>(log_[a.value]) * (e % ord)) % ord;
    return beta_pow(k);
}

std::uint32_t Field::log(Elem a) const {
    if (a.is_zero()) throw Error(ErrorKind::DivisionByZero, "log of zero");
    return log_[a.value];
}

std::string Field::to_power(Elem a) const {
    if (a.is_zero()) return "0";
    std::uint32_t k = log(a);
    if (k == 0) return "1";
    return "b^" + std::to_string(k);
}

std::string Field::to_hex(Elem a) const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%0*x", static_cast<int>((theta_ + 3) / 4), a.value);
    return buf;
}

std::string Field::to_bits(Elem a) const {
    std::string s(theta_, '0');
    for (unsigned k = 0; k < theta_; ++k)
        if (a.value >> k & 1u) s[k] = '1';
    return s;
}

Elem Field::parse(const std::string& text) const {
    auto fail = [&]() { return Error(ErrorKind::ParseError, "bad field element '" + text + "'"); };
    if (text.empty()) throw fail();
    auto parse_num = [&](const char* b, const char* e, int base) {
        long long v = 0;
        auto [ptr, ec] = std::from_chars(b, e, v, base);
        if (ec != std::errc() || ptr != e) throw fail();
        return v;
    };
    const char* b = text.data();
    const char* e = b + text.size();
    if (text == "b") return beta();
    if (text.size() > 2 && text[0] == 'b' && text[1] == '^') return beta_pow(parse_num(b + 2, e, 10));
    long long v;
    if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X'))
        v = parse_num(b + 2, e, 16);
    else
        v = parse_num(b, e, 10);
    if (v < 0 || v >= static_cast<long long>(q_)) throw fail();
    return Elem{static_cast<std::uint32_t>(v)};
}

FieldPtr make_field(unsigned theta, std::optional<std::uint32_t> poly) {
    if (poly) return std::make_shared<const Field>(theta, *poly);
    return std::make_shared<const Field>(theta);
}

}  // namespace hiercode
