#include <abelkit/abel.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace abelkit
{

namespace
{

abel_first_kind padded(const abel_first_kind &eq)
{
    if (eq.degree() > 3) {
        throw precondition_error("operation defined for degree <= 3 only");
    }
    abel_first_kind out = eq;
    out.coeffs.resize(4);
    return out;
}

bool identically_zero(const scalar_expr &e, const sample_options &opts)
{
    if (e.is_constant()) {
        return e.is_zero();
    }
    return is_zero_numeric(e, opts);
}

// A point where e vanishes: a sampled t with |e(t)| <= tol, or a sign change
// between neighbouring samples of one connected piece of the sampling domain
// (the default domain has two, t < 0 and t > 0), located by bisection.
std::optional<double> vanishing_point(const scalar_expr &e, const sample_options &opts)
{
    std::vector<std::pair<double, double>> vals;
    for (const double t : sample_points(opts, static_cast<std::size_t>(opts.samples))) {
        try {
            const double v = eval_scalar(e, t);
            if (std::abs(v) <= opts.tol) {
                return t;
            }
            vals.emplace_back(t, v);
        } catch (const domain_error &) {
        }
    }
    std::sort(vals.begin(), vals.end());
    for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
        const auto [ta, va] = vals[i];
        const auto [tb, vb] = vals[i + 1];
        if (!opts.domain && (ta < 0) != (tb < 0)) {
            continue;
        }
        if ((va > 0) != (vb > 0)) {
            // A pole rather than a zero may separate the samples.
            try {
                const double r = root_bracketed([&](double t) { return eval_scalar(e, t); }, ta, tb, 1e-12);
                if (std::abs(eval_scalar(e, r)) <= 1e-6) {
                    return r;
                }
            } catch (const domain_error &) {
            }
        }
    }
    return std::nullopt;
}

void require_proper(const abel_first_kind &eq, const sample_options &opts)
{
    if (identically_zero(eq.coeff(3), opts)) {
        throw precondition_error("not a proper Abel equation: A3 vanishes identically");
    }
    if (const auto t = vanishing_point(eq.coeff(3), opts)) {
        throw precondition_error("not a proper Abel equation: A3 vanishes at t = " + std::to_string(*t));
    }
}

} // namespace

abel_first_kind make_abel(scalar_expr a0, scalar_expr a1, scalar_expr a2, scalar_expr a3)
{
    return {{std::move(a0), std::move(a1), std::move(a2), std::move(a3)}, std::nullopt, false};
}

abel_first_kind make_riccati(scalar_expr c0, scalar_expr c1, scalar_expr c2)
{
    return {{std::move(c0), std::move(c1), std::move(c2)}, std::nullopt, false};
}

sample_options sampling_for(const abel_first_kind &eq, sample_options base)
{
    if (eq.domain && !base.domain) {
        base.domain = eq.domain;
    }
    return base;
}

double eval_rhs(const abel_first_kind &eq, double t, double x)
{
    double acc = 0;
    for (std::size_t i = eq.coeffs.size(); i-- > 0;) {
        acc = acc * x + eval_scalar(eq.coeffs[i], t);
    }
    return acc;
}

ode_rhs to_ode_rhs(const abel_first_kind &eq)
{
    return [eq](double t, std::span<const double> y, std::span<double> dy) { dy[0] = eval_rhs(eq, t, y[0]); };
}

abel_first_kind second_to_first(const abel_second_kind &eq)
{
    const auto &f = eq.f;
    const auto &[b0, b1, b2, b3] = eq.b;
    const scalar_expr three{3};
    const scalar_expr two{2};
    abel_first_kind out;
    out.coeffs = {
        -b3,
        three * b3 * f - b2,
        -differentiate(f) - three * b3 * pow(f, 2) + two * f * b2 - b1,
        pow(f, 3) * b3 - pow(f, 2) * b2 + f * b1 - b0,
    };
    out.domain = eq.domain;
    return out;
}

abel_first_kind lienard_to_abel(const expression &fx, const expression &gx)
{
    const auto t = expression::t();
    abel_first_kind out;
    out.coeffs = {scalar_expr{}, scalar_expr{}, substitute(fx, variable::x, t), substitute(gx, variable::x, t)};
    out.lienard = true;
    return out;
}

abel_first_kind gauge_transform(const abel_first_kind &eq, const gauge &g, const sample_options &base)
{
    const auto opts = sampling_for(eq, base);
    if (const auto t = vanishing_point(g.alpha, opts)) {
        throw precondition_error("gauge alpha vanishes at t = " + std::to_string(*t));
    }
    const auto e = padded(eq);
    const auto &a0 = e.coeffs[0];
    const auto &a1 = e.coeffs[1];
    const auto &a2 = e.coeffs[2];
    const auto &a3 = e.coeffs[3];
    const auto &al = g.alpha;
    const auto &be = g.beta;
    const scalar_expr two{2};
    const scalar_expr three{3};

    abel_first_kind out = e;
    out.coeffs = {
        (a3 * pow(be, 3) + a2 * pow(be, 2) + a1 * be + a0 - differentiate(be)) / al,
        three * a3 * pow(be, 2) + two * a2 * be + a1 - differentiate(al) / al,
        al * (three * a3 * be + a2),
        a3 * pow(al, 2),
    };
    return out;
}

gauge gauge_compose(const gauge &g2, const gauge &g1)
{
    // x = a1 (a2 x2 + b2) + b1
    return {g1.alpha * g2.alpha, g1.alpha * g2.beta + g1.beta};
}

gauge gauge_invert(const gauge &g)
{
    return {expression{1} / g.alpha, -g.beta / g.alpha};
}

shift_result canonical_shift(const abel_first_kind &eq, const sample_options &base)
{
    const auto opts = sampling_for(eq, base);
    auto e = padded(eq);
    require_proper(e, opts);
    if (identically_zero(e.coeffs[2], opts)) {
        e.coeffs[2] = scalar_expr{};
        return {e, gauge::identity()};
    }
    const gauge g{scalar_expr{1}, -e.coeffs[2] / (scalar_expr{3} * e.coeffs[3])};
    auto out = gauge_transform(e, g, opts);
    if (!is_zero_numeric(out.coeffs[2], opts)) {
        throw accuracy_error("shifted quadratic coefficient is not numerically zero", 0);
    }
    out.coeffs[2] = scalar_expr{};
    return {out, g};
}

canonical_result canonical_form(const abel_first_kind &eq, const sample_options &base)
{
    const auto opts = sampling_for(eq, base);
    auto [shifted, g1] = canonical_shift(eq, opts);
    if (identically_zero(shifted.coeffs[0], opts)) {
        shifted.coeffs[0] = scalar_expr{};
        return {canonical_kind::first, shifted, {g1}};
    }
    if (const auto t = vanishing_point(shifted.coeffs[0], opts)) {
        throw mixed_type_error("constant term vanishes at t = " + std::to_string(*t) + " but not identically", *t);
    }
    const gauge g2{shifted.coeffs[0], scalar_expr{}};
    auto out = gauge_transform(shifted, g2, opts);
    if (!expr_equal_numeric(out.coeffs[0], scalar_expr{1}, opts)) {
        throw accuracy_error("scaled constant term is not numerically one", 0);
    }
    out.coeffs[0] = scalar_expr{1};
    out.coeffs[2] = scalar_expr{};
    return {canonical_kind::second, out, {g1, g2}};
}

const char *name(phi5_variant v) noexcept
{
    switch (v) {
        case phi5_variant::as_printed:
            return "printed";
        case phi5_variant::times_phi3:
            return "timesphi3";
        case phi5_variant::corrected:
            return "corrected";
    }
    return "?";
}

std::optional<phi5_variant> parse_phi5_variant(std::string_view s)
{
    for (const auto v : {phi5_variant::as_printed, phi5_variant::times_phi3, phi5_variant::corrected}) {
        if (s == name(v)) {
            return v;
        }
    }
    return std::nullopt;
}

liouville_invariants liouville(const abel_first_kind &eq, phi5_variant variant)
{
    const auto e = padded(eq);
    const auto &a0 = e.coeffs[0];
    const auto &a1 = e.coeffs[1];
    const auto &a2 = e.coeffs[2];
    const auto &a3 = e.coeffs[3];
    const auto da2 = differentiate(a2);
    const auto da3 = differentiate(a3);
    const scalar_expr three{3};

    const auto tail = three * a0 * pow(a3, 2) - a1 * a2 * a3 + scalar_expr(rational(2, 9)) * pow(a2, 3);
    scalar_expr phi3, phi5;
    if (variant == phi5_variant::corrected) {
        phi3 = a3 * da2 - a2 * da3 + tail;
        phi5 = a3 * differentiate(phi3) - three * (da3 + a1 * a3 - scalar_expr(rational(1, 3)) * pow(a2, 2)) * phi3;
    } else {
        phi3 = a2 * da3 - da2 * a3 + tail;
        const auto bracket = da3 + scalar_expr(rational(1, 3)) * pow(a2, 2) - a1 * a3;
        phi5 = variant == phi5_variant::as_printed ? a3 * differentiate(phi3) - three * bracket
                                                   : a3 * differentiate(phi3) - three * bracket * phi3;
    }
    std::optional<scalar_expr> quotient;
    if (!phi5.is_zero()) {
        quotient = pow(phi3, 5) / pow(phi5, 3);
    }
    return {phi3, phi5, quotient, variant};
}

const char *name(abel_class c) noexcept
{
    switch (c) {
        case abel_class::riccati:
            return "Riccati";
        case abel_class::bernoulli:
            return "Bernoulli";
        case abel_class::separable:
            return "Separable";
        case abel_class::solvable_two_dim:
            return "SolvableTwoDim";
        case abel_class::generic:
            return "Generic";
    }
    return "?";
}

namespace
{

double snapped(double v)
{
    const auto q = snap_rational(v);
    return q ? to_double(*q) : v;
}

std::optional<double> constant_ratio(const scalar_expr &num, const scalar_expr &den, const sample_options &opts)
{
    try {
        return constant_value_numeric(num / den, opts);
    } catch (const indeterminate_error &) {
        return std::nullopt;
    }
}

} // namespace

classification classify(const abel_first_kind &eq, const sample_options &base)
{
    const auto opts = sampling_for(eq, base);
    const auto e = padded(eq);
    const auto &a = e.coeffs;
    classification out;

    if (identically_zero(a[3], opts)) {
        out.kind = abel_class::riccati;
        return out;
    }
    const bool a0_zero = identically_zero(a[0], opts);
    const bool a2_zero = identically_zero(a[2], opts);
    if (a0_zero && a2_zero) {
        out.kind = abel_class::bernoulli;
        return out;
    }

    std::array<double, 4> c{0, 0, 0, 1};
    bool separable = true;
    for (std::size_t i = 0; i < 3 && separable; ++i) {
        if (identically_zero(a[i], opts)) {
            continue;
        }
        const auto r = constant_ratio(a[i], a[3], opts);
        if (r) {
            c[i] = snapped(*r);
        } else {
            separable = false;
        }
    }
    if (separable) {
        out.kind = abel_class::separable;
        out.h = a[3];
        out.c = c;
        return out;
    }

    if (const auto mu = constant_ratio(a[2], scalar_expr{3} * a[3], opts)) {
        const double m = snapped(*mu);
        const scalar_expr me{rational(m)};
        const auto target = me * a[1] - scalar_expr{2} * pow(me, 3) * a[3];
        bool match = false;
        try {
            match = expr_equal_numeric(a[0], target, opts);
        } catch (const indeterminate_error &) {
        }
        if (match) {
            out.kind = abel_class::solvable_two_dim;
            out.mu = m;
            return out;
        }
    }
    out.kind = abel_class::generic;
    return out;
}

// ---------------------------------------------------------------------------

quadrature_solution::quadrature_solution(double t0, double t_end, std::function<double(double)> eval,
                                         trajectory_status status, std::pair<double, double> bracket)
    : m_t0(t0), m_t_end(t_end), m_eval(std::make_shared<const std::function<double(double)>>(std::move(eval))),
      m_status(status), m_bracket(bracket)
{
}

double quadrature_solution::operator()(double t) const
{
    if (t < m_t0 || t > m_t_end) {
        throw std::out_of_range("solution evaluated outside [" + std::to_string(m_t0) + ", " + std::to_string(m_t_end)
                                + "]");
    }
    return (*m_eval)(t);
}

namespace
{

std::vector<double> panel_nodes(double t0, double tf, std::size_t panels)
{
    if (!(tf > t0)) {
        throw std::invalid_argument("solver requires tf > t0");
    }
    return linspace(t0, tf, std::max<std::size_t>(panels, 1) + 1);
}

std::size_t panel_of(const std::vector<double> &nodes, double t)
{
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
    const auto k = static_cast<std::size_t>(it - nodes.begin());
    return k == 0 ? 0 : std::min(k - 1, nodes.size() - 2);
}

// Cumulative integral of f from nodes[0], exact at nodes and refined inside
// a panel by one more quadrature.
struct cumulative {
    std::vector<double> nodes;
    std::vector<double> values;
    std::function<double(double)> f;
    double tol;

    cumulative(std::vector<double> n, std::function<double(double)> fn, double tolerance)
        : nodes(std::move(n)), values(nodes.size(), 0.0), f(std::move(fn)), tol(tolerance)
    {
        for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
            values[k + 1] = values[k] + quad_adaptive(f, nodes[k], nodes[k + 1], tol);
        }
    }

    double operator()(double t) const
    {
        const auto k = panel_of(nodes, t);
        return values[k] + quad_adaptive(f, nodes[k], t, tol);
    }
};

// x' = c0 + c1 x, x(t0) = x0.
std::function<double(double)> linear_solution(const scalar_expr &c0, const scalar_expr &c1, double x0,
                                              const std::vector<double> &nodes, double tol)
{
    const bool no_c1 = c1.is_zero();
    const bool no_c0 = c0.is_zero();
    auto I = std::make_shared<cumulative>(
        nodes, [c1](double s) { return eval_scalar(c1, s); }, tol * 1e-2);
    std::shared_ptr<cumulative> J;
    if (!no_c0) {
        J = std::make_shared<cumulative>(
            nodes,
            [c0, I, no_c1](double s) { return (no_c1 ? 1.0 : std::exp(-(*I)(s))) * eval_scalar(c0, s); }, tol);
    }
    return [I, J, x0, no_c1](double t) {
        const double j = J ? (*J)(t) : 0.0;
        return (no_c1 ? 1.0 : std::exp((*I)(t))) * (x0 + j);
    };
}

} // namespace

quadrature_solution solve_linear(const scalar_expr &c0, const scalar_expr &c1, double t0, double x0, double tf,
                                 const solver_options &so)
{
    const auto nodes = panel_nodes(t0, tf, so.panels);
    return {t0, tf, linear_solution(c0, c1, x0, nodes, so.quad_tol)};
}

quadrature_solution solve_bernoulli(const abel_first_kind &eq, double t0, double x0, double tf,
                                    const solver_options &so, const sample_options &base)
{
    const auto opts = sampling_for(eq, base);
    const auto e = padded(eq);
    if (!identically_zero(e.coeffs[0], opts) || !identically_zero(e.coeffs[2], opts)) {
        throw precondition_error("Bernoulli solver requires A0 = A2 = 0");
    }
    if (x0 == 0) {
        throw precondition_error("Bernoulli solver requires x0 != 0");
    }
    const auto nodes = panel_nodes(t0, tf, so.panels);
    const scalar_expr m2{-2};
    const auto u = linear_solution(m2 * e.coeffs[3], m2 * e.coeffs[1], 1 / (x0 * x0), nodes, so.quad_tol);
    const double sign = x0 > 0 ? 1.0 : -1.0;
    auto x = [u, sign](double t) {
        const double v = u(t);
        if (!(v > 0)) {
            throw domain_error("Bernoulli solution past its blow-up");
        }
        return sign / std::sqrt(v);
    };
    for (std::size_t k = 1; k < nodes.size(); ++k) {
        if (u(nodes[k]) <= 0) {
            const double r = root_bracketed(u, nodes[k - 1], nodes[k], 1e-13);
            const double d = 1e-10 * (1 + std::abs(r));
            return {t0, nodes[k - 1], x, trajectory_status::blow_up, {r - d, r + d}};
        }
    }
    return {t0, tf, x};
}

namespace
{

// Real roots of a polynomial of degree <= 3 given low-to-high.
std::vector<double> real_roots(const std::array<double, 4> &c)
{
    int n = 3;
    while (n > 0 && c[static_cast<std::size_t>(n)] == 0) {
        --n;
    }
    const auto p = [&](double x) { return ((c[3] * x + c[2]) * x + c[1]) * x + c[0]; };
    if (n == 0) {
        return {};
    }
    double bound = 1;
    for (int i = 0; i < n; ++i) {
        bound = std::max(bound, 1 + std::abs(c[static_cast<std::size_t>(i)] / c[static_cast<std::size_t>(n)]));
    }
    // Monotone pieces split at critical points.
    std::vector<double> cuts{-bound};
    if (n >= 2) {
        const double a = 3 * c[3], b = 2 * c[2], cc = c[1];
        if (a == 0) {
            cuts.push_back(-cc / b);
        } else {
            const double disc = b * b - 4 * a * cc;
            if (disc >= 0) {
                const double s = std::sqrt(disc);
                cuts.push_back((-b - s) / (2 * a));
                cuts.push_back((-b + s) / (2 * a));
            }
        }
    }
    cuts.push_back(bound);
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = std::clamp(cuts[i], -bound, bound);
        const double hi = std::clamp(cuts[i + 1], -bound, bound);
        if (!(hi > lo)) {
            continue;
        }
        const double plo = p(lo), phi = p(hi);
        if (plo == 0) {
            roots.push_back(lo);
        } else if ((plo > 0) != (phi > 0) && phi != 0) {
            roots.push_back(root_bracketed(p, lo, hi, 1e-15));
        }
    }
    if (p(bound) == 0) {
        roots.push_back(bound);
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

// G(x) = int_{x0}^{x} dxi / p(xi) along one direction from x0, in a compact
// parameter s in [0, 1): towards a root r as x = x0 + s (r - x0), towards
// infinity as x = x0 +- s / (1 - s).
struct separable_branch {
    std::array<double, 4> c;
    int degree;
    double x0;
    double dir;
    std::optional<double> barrier;
    double tol;
    // G at s_k = 1 - 2^-k.
    std::vector<double> g_nodes;
    std::vector<double> s_nodes;
    // Finite limit of G at the end of the branch (escape to infinity).
    std::optional<double> g_limit;

    double p(double x) const
    {
        return ((c[3] * x + c[2]) * x + c[1]) * x + c[0];
    }

    double x_of(double s) const
    {
        if (barrier) {
            return x0 + s * (*barrier - x0);
        }
        return x0 + dir * s / (1 - s);
    }

    // p(x) / (x - barrier) by synthetic division.
    std::array<double, 3> deflated{};

    double integrand(double s) const
    {
        if (barrier) {
            // x - r = (1 - s)(x0 - r) exactly; dividing it out avoids cancellation near r.
            const double x = x_of(s);
            const double q = (deflated[2] * x + deflated[1]) * x + deflated[0];
            return -1 / ((1 - s) * q);
        }
        // 1 / (p(x) (1 - s)^2) written in w = 1 - s so that s = 1 is finite.
        const double w = 1 - s;
        const double xw = x0 * w + dir * (1 - w);
        double q = 0;
        for (int i = 0; i <= degree; ++i) {
            q += c[static_cast<std::size_t>(i)] * std::pow(xw, i) * std::pow(w, 2 - i);
        }
        return dir / q;
    }

    separable_branch(const std::array<double, 4> &coeffs, double start, double direction,
                     std::optional<double> stop, double tolerance)
        : c(coeffs), x0(start), dir(direction), barrier(stop), tol(tolerance)
    {
        degree = 3;
        while (degree > 0 && c[static_cast<std::size_t>(degree)] == 0) {
            --degree;
        }
        if (barrier) {
            double carry = 0;
            for (int i = 3; i >= 1; --i) {
                carry = c[static_cast<std::size_t>(i)] + carry * *barrier;
                deflated[static_cast<std::size_t>(i - 1)] = carry;
            }
        }
        const auto f = [this](double s) { return integrand(s); };
        s_nodes.push_back(0);
        g_nodes.push_back(0);
        double last = 1;
        for (int k = 1; k <= 52; ++k) {
            const double s = 1 - std::ldexp(1.0, -k);
            last = quad_adaptive(f, s_nodes.back(), s, seg_tol(last));
            g_nodes.push_back(g_nodes.back() + last);
            s_nodes.push_back(s);
        }
        if (!barrier && degree >= 2) {
            g_limit = g_nodes.back() + quad_adaptive(f, s_nodes.back(), 1.0, seg_tol(last));
        }
    }

    // Segment integrals grow without bound towards a root; the tolerance
    // follows the previous segment's size.
    double seg_tol(double previous) const
    {
        return tol * std::max(1.0, 2 * std::abs(previous));
    }

    // Solves G(x) = target, |target| below the branch limit.
    double invert(double target) const
    {
        const auto f = [this](double s) { return integrand(s); };
        const double mag = std::abs(target);
        std::size_t k = 1;
        while (k < g_nodes.size() && std::abs(g_nodes[k]) < mag) {
            ++k;
        }
        if (k == g_nodes.size()) {
            if (!g_limit) {
                throw domain_error("separable inversion left the representable range");
            }
            const double s_lo = s_nodes.back();
            const double g_lo = g_nodes.back();
            const double s = root_bracketed(
                [&](double z) { return g_lo + quad_adaptive(f, s_lo, z, seg_tol(g_lo)) - target; }, s_lo, 1.0, 1e-17);
            return x_of(s);
        }
        const double s_lo = s_nodes[k - 1];
        const double g_lo = g_nodes[k - 1];
        const double s = root_bracketed(
            [&](double z) { return g_lo + quad_adaptive(f, s_lo, z, seg_tol(g_nodes[k] - g_lo)) - target; }, s_lo,
            s_nodes[k], 1e-17);
        return x_of(s);
    }
};

} // namespace

quadrature_solution solve_separable(const scalar_expr &h, const std::array<double, 4> &c, double t0, double x0,
                                    double tf, const solver_options &so)
{
    const auto nodes = panel_nodes(t0, tf, so.panels);
    const double p0 = ((c[3] * x0 + c[2]) * x0 + c[1]) * x0 + c[0];
    double scale = 0;
    for (const double ci : c) {
        scale = std::max(scale, std::abs(ci));
    }
    if (std::abs(p0) <= 1e-14 * scale * (1 + std::abs(x0) * std::abs(x0) * std::abs(x0))) {
        return {t0, tf, [x0](double) { return x0; }};
    }

    std::optional<double> lower, upper;
    for (const double r : real_roots(c)) {
        if (r < x0) {
            lower = r;
        } else if (r > x0 && !upper) {
            upper = r;
        }
    }
    const double tol = so.quad_tol;
    auto up = std::make_shared<const separable_branch>(c, x0, 1.0, upper, tol);
    auto down = std::make_shared<const separable_branch>(c, x0, -1.0, lower, tol);
    auto H = std::make_shared<const cumulative>(
        nodes, [h](double s) { return eval_scalar(h, s); }, tol);

    // G is increasing in x where p > 0, so the sign of H / p(x0) picks the branch.
    const double sp = p0 > 0 ? 1.0 : -1.0;
    auto branch_for = [up, down, sp](double target) { return target * sp >= 0 ? up : down; };
    auto beyond = [branch_for](double target) {
        const auto b = branch_for(target);
        return b->g_limit && std::abs(target) >= std::abs(*b->g_limit);
    };
    auto x = [H, branch_for, beyond, x0](double t) {
        const double target = (*H)(t);
        if (target == 0) {
            return x0;
        }
        if (beyond(target)) {
            throw domain_error("separable solution past its blow-up");
        }
        return branch_for(target)->invert(target);
    };

    for (std::size_t k = 1; k < nodes.size(); ++k) {
        const double target = H->values[k];
        if (beyond(target)) {
            const double limit = std::abs(*branch_for(target)->g_limit);
            const double r = root_bracketed([&](double t) { return std::abs((*H)(t)) - limit; }, nodes[k - 1],
                                            nodes[k], 1e-13);
            const double d = 1e-10 * (1 + std::abs(r));
            return {t0, nodes[k - 1], x, trajectory_status::blow_up, {r - d, r + d}};
        }
    }
    return {t0, tf, x};
}

quadrature_solution solve_separable(const abel_first_kind &eq, double t0, double x0, double tf,
                                    const solver_options &so, const sample_options &base)
{
    const auto cls = classify(eq, base);
    if (cls.kind != abel_class::separable) {
        throw precondition_error(std::string("equation is not separable (class ") + name(cls.kind) + ")");
    }
    return solve_separable(cls.h, cls.c, t0, x0, tf, so);
}

double solution_residual(const quadrature_solution &sol, const scalar_rhs &rhs, std::size_t n)
{
    const double a = sol.t0(), b = sol.t_end();
    const double len = b - a;
    const double h_max = std::min(1e-3, len / (4.0 * static_cast<double>(n + 1)));
    const auto stencil = [&sol](double t, double h) {
        return (-sol(t + 2 * h) + 8 * sol(t + h) - 8 * sol(t - h) + sol(t - 2 * h)) / (12 * h);
    };
    double worst = 0;
    std::size_t used = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        const double t = a + len * static_cast<double>(i) / static_cast<double>(n + 1);
        try {
            // Halve the step until two stencils agree; steep stretches near an
            // escape need a step matched to their own scale.
            double h = h_max;
            double d = stencil(t, h);
            for (;;) {
                const double half = stencil(t, h / 2);
                const bool settled = std::abs(half - d) <= 1e-9 * (1 + std::abs(half));
                d = half;
                h /= 2;
                if (settled || h < 1e-6) {
                    break;
                }
            }
            worst = std::max(worst, std::abs(d - rhs(t, sol(t))));
            ++used;
        } catch (const domain_error &) {
        }
    }
    if (used == 0u) {
        throw precondition_error("no admissible residual point");
    }
    return worst;
}

} // namespace abelkit
