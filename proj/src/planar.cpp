#include <abelkit/planar.hpp>

namespace abelkit
{

poly_xy divergence(const planar_vf &X)
{
    return d_dx(X.P) + d_dv(X.Q);
}

poly_xy apply_vf(const planar_vf &X, const poly_xy &D)
{
    return X.P * d_dx(D) + X.Q * d_dv(D);
}

ode_rhs to_ode_rhs(const planar_vf &X)
{
    return [X](double, std::span<const double> y, std::span<double> dy) {
        dy[0] = eval(X.P, y[0], y[1]);
        dy[1] = eval(X.Q, y[0], y[1]);
    };
}

phase_function to_expression(const poly_xy &p)
{
    const auto x = expression::var(variable::x);
    const auto v = expression::var(variable::v);
    phase_function sum;
    for (const auto &[m, c] : p.terms()) {
        sum = sum + expression(c) * pow(x, rational{m.x}) * pow(v, rational{m.v});
    }
    return sum;
}

std::optional<poly_xy> to_poly_xy(const expression &e)
{
    switch (e.kind()) {
        case node_kind::constant:
            return poly_xy(e.value());
        case node_kind::variable:
            if (e.var_id() == variable::x) {
                return xy::x();
            }
            if (e.var_id() == variable::v) {
                return xy::v();
            }
            return std::nullopt;
        case node_kind::negation: {
            auto a = to_poly_xy(e.arg());
            if (a) {
                *a = -*a;
            }
            return a;
        }
        case node_kind::sum:
        case node_kind::product: {
            const auto a = to_poly_xy(e.lhs());
            const auto b = to_poly_xy(e.rhs());
            if (!a || !b) {
                return std::nullopt;
            }
            return e.kind() == node_kind::sum ? *a + *b : *a * *b;
        }
        case node_kind::quotient: {
            const auto a = to_poly_xy(e.lhs());
            if (!a || !e.rhs().is_constant() || e.rhs().is_zero()) {
                return std::nullopt;
            }
            return rational(1 / e.rhs().value()) * *a;
        }
        case node_kind::power: {
            const auto &k = e.exponent();
            const auto a = to_poly_xy(e.arg());
            if (!a || !is_integer(k) || k < 0) {
                return std::nullopt;
            }
            return pow(*a, numerator(k).convert_to<unsigned>());
        }
        case node_kind::function:
            return std::nullopt;
    }
    return std::nullopt;
}

} // namespace abelkit
