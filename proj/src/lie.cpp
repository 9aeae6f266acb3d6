#include <abelkit/lie.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <abelkit/linalg.hpp>

namespace abelkit
{

namespace
{

// Columns are the coefficient vectors of the fields, rows the degrees.
rat_matrix coefficient_matrix(const std::vector<vf1d> &fields, int rows)
{
    rat_matrix m(static_cast<std::size_t>(rows), fields.size());
    for (std::size_t j = 0; j < fields.size(); ++j) {
        for (int i = 0; i <= fields[j].degree(); ++i) {
            m(static_cast<std::size_t>(i), j) = fields[j].coeff(i);
        }
    }
    return m;
}

} // namespace

vspan::vspan(std::vector<vf1d> basis) : m_basis(std::move(basis))
{
    int rows = 1;
    for (const auto &b : m_basis) {
        rows = std::max(rows, b.degree() + 1);
    }
    if (rank(coefficient_matrix(m_basis, rows)) != m_basis.size()) {
        throw precondition_error("span basis is linearly dependent");
    }
}

int vspan::max_degree() const noexcept
{
    int d = -1;
    for (const auto &b : m_basis) {
        d = std::max(d, b.degree());
    }
    return d;
}

vspan v_abel()
{
    return vspan({vf1d::monomial(0), vf1d::monomial(1), vf1d::monomial(2), vf1d::monomial(3)});
}

vspan v_riccati()
{
    return vspan({vf1d::monomial(0), vf1d::monomial(1), vf1d::monomial(2)});
}

vspan w_abel()
{
    return vspan({vf1d::monomial(0), vf1d::monomial(1)});
}

vf1d bracket_1d(const vf1d &f, const vf1d &g)
{
    return f * g.derivative() - g * f.derivative();
}

std::optional<std::vector<rational>> in_span(const vf1d &f, const vspan &span)
{
    const int rows = std::max(f.degree(), span.max_degree()) + 1;
    if (span.dim() == 0) {
        return f.is_zero() ? std::optional<std::vector<rational>>(std::vector<rational>{}) : std::nullopt;
    }
    std::vector<rational> rhs(static_cast<std::size_t>(std::max(rows, 1)));
    for (int i = 0; i <= f.degree(); ++i) {
        rhs[static_cast<std::size_t>(i)] = f.coeff(i);
    }
    return solve(coefficient_matrix(span.basis(), std::max(rows, 1)), rhs);
}

vspan normalizer_in_degree(const vspan &span, int max_deg)
{
    if (max_deg < span.max_degree()) {
        throw precondition_error("normalizer degree below the span's degree");
    }
    const std::size_t n = static_cast<std::size_t>(max_deg) + 1;
    const std::size_t m = span.dim();
    const auto &basis = span.basis();

    // Unknowns: f's coefficients, then for each basis element b_j the
    // coordinates of [f, b_j] in the span. [f, b_j] is linear in f.
    std::vector<std::vector<vf1d>> images(m);
    int top = span.max_degree();
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            images[j].push_back(bracket_1d(vf1d::monomial(static_cast<int>(k)), basis[j]));
            top = std::max(top, images[j].back().degree());
        }
    }
    const std::size_t rows_per = static_cast<std::size_t>(top) + 1;
    rat_matrix sys(m * rows_per, n + m * m);
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t r0 = j * rows_per;
        for (std::size_t k = 0; k < n; ++k) {
            const auto &img = images[j][k];
            for (int i = 0; i <= img.degree(); ++i) {
                sys(r0 + static_cast<std::size_t>(i), k) = img.coeff(i);
            }
        }
        for (std::size_t i = 0; i < m; ++i) {
            for (int d = 0; d <= basis[i].degree(); ++d) {
                sys(r0 + static_cast<std::size_t>(d), n + j * m + i) = -basis[i].coeff(d);
            }
        }
    }

    const auto null = nullspace(sys);
    rat_matrix proj(null.size(), n);
    for (std::size_t r = 0; r < null.size(); ++r) {
        for (std::size_t k = 0; k < n; ++k) {
            proj(r, k) = null[r][k];
        }
    }
    const auto red = rref(proj);
    std::vector<vf1d> out;
    for (std::size_t r = 0; r < red.pivots.size(); ++r) {
        std::vector<rational> c(n);
        for (std::size_t k = 0; k < n; ++k) {
            c[k] = red.reduced(r, k);
        }
        out.emplace_back(std::move(c));
    }
    return vspan(std::move(out));
}

std::pair<rational, rational> check_two_dim_subalgebra(const rational &mu)
{
    const vf1d y1({mu, rational{1}});
    const vf1d y2({rational(-2 * mu * mu * mu), rational{0}, rational(3 * mu), rational{1}});
    const auto coords = in_span(bracket_1d(y1, y2), vspan({y1, y2}));
    if (!coords) {
        throw closure_error("bracket leaves the two-dimensional span");
    }
    return {(*coords)[0], (*coords)[1]};
}

std::string to_string(const ext_real &x)
{
    if (x.infinite) {
        return "inf";
    }
    std::ostringstream os;
    os.precision(17);
    os << x.value;
    return os.str();
}

ext_real riccati_superposition(double x1, double x2, double x3, ext_real k)
{
    if (x1 == x2 || x1 == x3 || x2 == x3) {
        throw precondition_error("superposition needs pairwise distinct particular solutions");
    }
    if (k.infinite) {
        return {x1, false};
    }
    const double den = k.value * (x3 - x2) + (x1 - x3);
    if (den == 0) {
        return ext_real::inf();
    }
    return {(k.value * x1 * (x3 - x2) + x2 * (x1 - x3)) / den, false};
}

mat2 mat_mul(const mat2 &p, const mat2 &q)
{
    mat2 r{};
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            r[i][j] = p[i][0] * q[0][j] + p[i][1] * q[1][j];
        }
    }
    return r;
}

ext_real mobius_apply(const mat2 &m, ext_real x)
{
    const double a = m[0][0], b = m[0][1], c = m[1][0], d = m[1][1];
    if (std::abs(a * d - b * c - 1) > 1e-12) {
        throw precondition_error("matrix is not in SL(2, R)");
    }
    if (x.infinite) {
        return c == 0 ? ext_real::inf() : ext_real{a / c, false};
    }
    const double den = c * x.value + d;
    if (den == 0) {
        return ext_real::inf();
    }
    return {(a * x.value + b) / den, false};
}

mobius mobius_product(const mobius &p, const mobius &q)
{
    return {p.a * q.a + p.b * q.c, p.a * q.b + p.b * q.d, p.c * q.a + p.d * q.c, p.c * q.b + p.d * q.d};
}

mat2 eval(const mobius &m, double t)
{
    return {{{eval_scalar(m.a, t), eval_scalar(m.b, t)}, {eval_scalar(m.c, t), eval_scalar(m.d, t)}}};
}

abel_first_kind sl2_coefficient_action(const mobius &m, const abel_first_kind &eq, const sample_options &base)
{
    if (eq.degree() != 2) {
        throw precondition_error("SL(2, R) action needs a Riccati equation");
    }
    const auto opts = sampling_for(eq, base);
    if (!expr_equal_numeric(m.a * m.d - m.b * m.c, scalar_expr{1}, opts)) {
        throw precondition_error("curve leaves SL(2, R)");
    }
    const auto &[a, b, c, d] = m;
    const auto da = differentiate(a), db = differentiate(b), dc = differentiate(c), dd = differentiate(d);
    const auto c0 = eq.coeff(0), c1 = eq.coeff(1), c2 = eq.coeff(2);
    const scalar_expr two{2};
    auto out = eq;
    out.coeffs = {
        b * b * c2 - a * b * c1 + a * a * c0 + a * db - b * da,
        -two * b * d * c2 + (a * d + b * c) * c1 - two * a * c * c0 + d * da - a * dd + b * dc - c * db,
        d * d * c2 - d * c * c1 + c * c * c0 + c * dd - d * dc,
    };
    return out;
}

} // namespace abelkit
