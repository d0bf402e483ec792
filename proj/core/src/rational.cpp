#include "mlc/rational.hpp"

#include <cctype>
#include <cmath>

namespace mlc {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

} // namespace

std::optional<Rat> rat_parse(std::string_view text) {
    if (text.empty()) return std::nullopt;
    bool neg = false;
    if (text[0] == '+' || text[0] == '-') {
        neg = text[0] == '-';
        text.remove_prefix(1);
    }
    if (text.empty()) return std::nullopt;

    auto slash = text.find('/');
    Rat value;
    if (slash != std::string_view::npos) {
        std::string_view num = text.substr(0, slash);
        std::string_view den = text.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) return std::nullopt;
        Int d{std::string(den)};
        if (d == 0) return std::nullopt;
        value = Rat(Int{std::string(num)}, d);
    } else {
        auto dot = text.find('.');
        if (dot == std::string_view::npos) {
            if (!all_digits(text)) return std::nullopt;
            value = Rat(Int{std::string(text)});
        } else {
            std::string_view whole = text.substr(0, dot);
            std::string_view frac = text.substr(dot + 1);
            if (whole.empty() && frac.empty()) return std::nullopt;
            if (!whole.empty() && !all_digits(whole)) return std::nullopt;
            if (!frac.empty() && !all_digits(frac)) return std::nullopt;
            Int num = whole.empty() ? Int(0) : Int{std::string(whole)};
            Int den(1);
            for (char c : frac) {
                num = num * 10 + (c - '0');
                den *= 10;
            }
            value = Rat(num, den);
        }
    }
    if (neg) value = -value;
    return value;
}

std::string rat_to_string(const Rat& r) {
    const Int num = boost::multiprecision::numerator(r);
    const Int den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

Rat rat_from_double(double x) {
    // cpp_rational's double constructor performs the exact dyadic conversion.
    return Rat(x);
}

Int rat_floor(const Rat& r) {
    Int num = boost::multiprecision::numerator(r);
    Int den = boost::multiprecision::denominator(r);
    Int q = num / den; // truncates toward zero
    if (num < 0 && q * den != num) q -= 1;
    return q;
}

} // namespace mlc
