#include "idsq/rational.hpp"

#include <charconv>
#include <cctype>
#include <system_error>

namespace idsq {

namespace {

bool is_integer_literal(std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

mpz_class parse_integer(std::string_view s) {
    if (!is_integer_literal(s)) throw InvalidInput("not an integer: '" + std::string(s) + "'");
    std::string str(s);
    if (str[0] == '+') str.erase(0, 1);
    return mpz_class(str, 10);
}

Rational parse_decimal(std::string_view s) {
    std::string_view mantissa = s;
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        mantissa = s.substr(0, e);
        std::string_view exp_text = s.substr(e + 1);
        if (!is_integer_literal(exp_text)) throw InvalidInput("bad exponent in '" + std::string(s) + "'");
        if (exp_text[0] == '+') exp_text.remove_prefix(1);
        auto [ptr, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
        if (ec != std::errc{} || exponent > 4096 || exponent < -4096)
            throw InvalidInput("exponent out of range in '" + std::string(s) + "'");
    }
    std::string digits;
    long frac_digits = 0;
    bool seen_point = false;
    for (std::size_t i = 0; i < mantissa.size(); ++i) {
        char ch = mantissa[i];
        if (ch == '.') {
            if (seen_point) throw InvalidInput("bad decimal '" + std::string(s) + "'");
            seen_point = true;
        } else if ((ch == '-' || ch == '+') && i == 0) {
            if (ch == '-') digits.push_back('-');
        } else if (std::isdigit(static_cast<unsigned char>(ch))) {
            digits.push_back(ch);
            if (seen_point) ++frac_digits;
        } else {
            throw InvalidInput("bad number '" + std::string(s) + "'");
        }
    }
    if (digits.empty() || digits == "-") throw InvalidInput("bad number '" + std::string(s) + "'");
    Rational q(parse_integer(digits));
    long shift = exponent - frac_digits;
    mpz_class ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    if (shift >= 0)
        q *= ten_pow;
    else
        q /= ten_pow;
    q.canonicalize();
    return q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw InvalidInput("empty number");
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        mpz_class num = parse_integer(text.substr(0, slash));
        std::string_view den_text = text.substr(slash + 1);
        if (!den_text.empty() && den_text[0] == '-') throw InvalidInput("sign must be on the numerator: '" + std::string(text) + "'");
        mpz_class den = parse_integer(den_text);
        if (den == 0) throw InvalidInput("zero denominator in '" + std::string(text) + "'");
        Rational q(num, den);
        q.canonicalize();
        return q;
    }
    if (is_integer_literal(text)) return Rational(parse_integer(text));
    return parse_decimal(text);
}

std::string to_string(const Rational& q) { return q.get_str(10); }

std::string shortest_decimal(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc{}) throw ComputationError("double formatting failed");
    std::string out(buf, ptr);
    // to_chars pads exponents to two digits ("1.3e-09"); drop the padding.
    if (auto e = out.find('e'); e != std::string::npos) {
        std::size_t digits = e + 1 + (out[e + 1] == '-' || out[e + 1] == '+');
        while (digits + 1 < out.size() && out[digits] == '0') out.erase(digits, 1);
    }
    return out;
}

mpz_class binomial(unsigned long n, unsigned long k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

Rational pow(const Rational& q, unsigned long e) {
    Rational r;
    mpz_pow_ui(mpq_numref(r.get_mpq_t()), q.get_num_mpz_t(), e);
    mpz_pow_ui(mpq_denref(r.get_mpq_t()), q.get_den_mpz_t(), e);
    return r;
}

}  // namespace idsq
