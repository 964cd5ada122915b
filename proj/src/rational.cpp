#include "boxlab/rational.hpp"

#include <cctype>

#include "boxlab/error.hpp"

namespace boxlab {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NegativeEntry: return "NegativeEntry";
        case ErrorCode::NotNormalized: return "NotNormalized";
        case ErrorCode::BadWeights: return "BadWeights";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NotInHull: return "NotInHull";
        case ErrorCode::BadDimension: return "BadDimension";
        case ErrorCode::UnknownName: return "UnknownName";
        case ErrorCode::BadParameter: return "BadParameter";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

std::string to_string(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace {

bool is_integer_literal(std::string_view s, bool allow_sign) {
    if (s.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!is_integer_literal(num, true) || !is_integer_literal(den, false)) {
        throw Error(ErrorCode::ParseError, "not a rational literal: '" + std::string(text) + "'");
    }
    std::string num_str(num);
    if (num_str[0] == '+') num_str.erase(0, 1);
    mpz_class n(num_str, 10);
    mpz_class d{std::string(den), 10};
    if (d == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

std::string to_decimal(const Rational& q, int places) {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(places));
    Rational scaled = abs_value(q) * scale + Rational(1, 2);
    mpz_class rounded = scaled.get_num() / scaled.get_den();
    std::string digits = rounded.get_str();
    if (static_cast<int>(digits.size()) <= places) {
        digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
    }
    std::string out = sgn(q) < 0 && rounded != 0 ? "-" : "";
    out += digits.substr(0, digits.size() - static_cast<std::size_t>(places));
    if (places > 0) out += "." + digits.substr(digits.size() - static_cast<std::size_t>(places));
    return out;
}

double to_double(const Rational& q) { return q.get_d(); }

}  // namespace boxlab
