#ifndef ABELKIT_TEST_UTIL_HPP
#define ABELKIT_TEST_UTIL_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>

#include <abelkit/expr.hpp>
#include <abelkit/poly.hpp>

namespace abelkit::test
{

inline std::mt19937_64 &rng()
{
    static std::mt19937_64 r(20240917);
    return r;
}

inline double uniform(double a, double b)
{
    return std::uniform_real_distribution<double>(a, b)(rng());
}

inline int uniform_int(int a, int b)
{
    return std::uniform_int_distribution<int>(a, b)(rng());
}

inline rational random_rational(int range = 5, int max_den = 4)
{
    return rational(uniform_int(-range, range), uniform_int(1, max_den));
}

// Smooth expression in t, well defined for t in [0.1, 3] (and |t| in that
// range for most draws). Depth-limited so derivatives stay moderate.
inline expression random_expression(int depth)
{
    const auto t = expression::t();
    if (depth <= 0) {
        switch (uniform_int(0, 2)) {
            case 0:
                return expression(random_rational());
            default:
                return t;
        }
    }
    auto sub = [&] { return random_expression(depth - 1); };
    switch (uniform_int(0, 9)) {
        case 0:
            return sub() + sub();
        case 1:
            return sub() - sub();
        case 2:
            return sub() * sub();
        case 3:
            return sub() / (expression{2} + pow(sub(), rational{2}));
        case 4:
            return sin(sub());
        case 5:
            return cos(sub());
        case 6:
            return exp(sin(sub()));
        case 7:
            return ln(expression{1} + pow(sub(), rational{2}));
        case 8:
            return sqrt(expression{1} + pow(sub(), rational{2}));
        default:
            return pow(expression{1} + pow(sub(), rational{2}), rational(uniform_int(-5, 5), uniform_int(1, 3)));
    }
}

// Central difference derivative.
inline double central_diff(const std::function<double(double)> &f, double x, double h)
{
    return (f(x + h) - f(x - h)) / (2 * h);
}

// Five-point derivative, fourth order.
inline double five_point(const std::function<double(double)> &f, double x, double h)
{
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

inline poly_xy random_poly_xy(int max_deg, int nterms)
{
    poly_xy p;
    for (int i = 0; i < nterms; ++i) {
        const int dx = uniform_int(0, max_deg);
        const int dv = uniform_int(0, max_deg - dx);
        p.add_term({dx, dv}, random_rational());
    }
    return p;
}

// Smooth coefficient r0 + r1 t + r2 sin(t) with small rationals.
inline expression random_coeff()
{
    const auto t = expression::t();
    return expression(random_rational(3, 4)) + expression(random_rational(3, 4)) * t
           + expression(random_rational(2, 4)) * sin(t);
}

// Strictly positive smooth function: c (1 + r t^2) exp(s sin t).
inline expression random_positive()
{
    const auto t = expression::t();
    return expression(rational(uniform_int(1, 6), uniform_int(1, 3)))
           * (expression{1} + expression(rational(uniform_int(0, 4), 4)) * pow(t, rational{2}))
           * exp(expression(random_rational(1, 3)) * sin(t));
}

} // namespace abelkit::test

#endif
