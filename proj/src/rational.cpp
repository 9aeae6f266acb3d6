#include <abelkit/rational.hpp>

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace abelkit
{

std::string to_string(const rational &q)
{
    const auto num = boost::multiprecision::numerator(q);
    const auto den = boost::multiprecision::denominator(q);
    if (den == 1) {
        return num.str();
    }
    return num.str() + "/" + den.str();
}

namespace
{

bool all_digits(std::string_view s)
{
    if (s.empty()) {
        return false;
    }
    for (const char c : s) {
        if (std::isdigit(static_cast<unsigned char>(c)) == 0) {
            return false;
        }
    }
    return true;
}

} // namespace

rational parse_rational(std::string_view text)
{
    bool negative = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }

    rational result;
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const auto num = text.substr(0, slash);
        const auto den = text.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) {
            throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
        }
        const integer d(std::string{den});
        if (d == 0) {
            throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        }
        result = rational(integer(std::string{num}), d);
    } else if (const auto dot = text.find('.'); dot != std::string_view::npos) {
        const auto ip = text.substr(0, dot);
        const auto fp = text.substr(dot + 1);
        if (!all_digits(ip) || !all_digits(fp)) {
            throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
        }
        integer scale = 1;
        for (std::size_t i = 0; i < fp.size(); ++i) {
            scale *= 10;
        }
        result = rational(integer(std::string{ip}) * scale + integer(std::string{fp}), scale);
    } else {
        if (!all_digits(text)) {
            throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
        }
        result = rational(integer(std::string{text}));
    }
    return negative ? rational(-result) : result;
}

} // namespace abelkit

namespace abelkit
{

std::optional<rational> snap_rational(double x, long max_den, double rel_tol)
{
    if (!std::isfinite(x)) {
        return std::nullopt;
    }
    // Convergents h/k of the continued fraction of x.
    integer h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double r = x;
    for (int i = 0; i < 64; ++i) {
        const double a = std::floor(r);
        const integer ai = static_cast<long long>(a);
        const integer h2 = ai * h1 + h0;
        const integer k2 = ai * k1 + k0;
        if (k2 > max_den) {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        const rational q(h1, k1);
        if (std::abs(to_double(q) - x) <= rel_tol * (1 + std::abs(x))) {
            return q;
        }
        const double frac = r - a;
        if (frac == 0 || std::abs(a) > 1e15) {
            break;
        }
        r = 1 / frac;
    }
    return std::nullopt;
}

} // namespace abelkit
