#include <abelkit/numerics.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include <abelkit/errors.hpp>

namespace abelkit
{

trajectory::trajectory(std::size_t dim, double t0, std::span<const double> y0, std::span<const double> f0)
    : m_dim(dim)
{
    push(t0, y0, f0);
}

std::span<const double> trajectory::state(std::size_t i) const
{
    return {m_states.data() + i * m_dim, m_dim};
}

std::span<const double> trajectory::slope(std::size_t i) const
{
    return {m_slopes.data() + i * m_dim, m_dim};
}

void trajectory::push(double t, std::span<const double> y, std::span<const double> f)
{
    m_times.push_back(t);
    m_states.insert(m_states.end(), y.begin(), y.end());
    m_slopes.insert(m_slopes.end(), f.begin(), f.end());
}

void trajectory::finish(trajectory_status s, std::pair<double, double> bracket)
{
    m_status = s;
    m_bracket = bracket;
}

std::size_t trajectory::locate(double t) const
{
    if (t < m_times.front() || t > m_times.back()) {
        throw std::out_of_range("dense output requested outside [" + std::to_string(m_times.front()) + ", "
                                + std::to_string(m_times.back()) + "]");
    }
    const auto it = std::upper_bound(m_times.begin(), m_times.end(), t);
    const auto idx = static_cast<std::size_t>(it - m_times.begin());
    return idx == 0 ? 0 : std::min(idx - 1, m_times.size() - 2);
}

double trajectory::at(double t, std::size_t c) const
{
    if (m_times.size() == 1u) {
        if (t != m_times.front()) {
            throw std::out_of_range("dense output requested outside a single-point trajectory");
        }
        return state(0)[c];
    }
    const auto i = locate(t);
    const double t0 = m_times[i];
    const double h = m_times[i + 1] - t0;
    const double s = (t - t0) / h;
    // Cubic Hermite basis.
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return h00 * state(i)[c] + h10 * h * slope(i)[c] + h01 * state(i + 1)[c] + h11 * h * slope(i + 1)[c];
}

std::vector<double> trajectory::at(double t) const
{
    std::vector<double> out(m_dim);
    for (std::size_t c = 0; c < m_dim; ++c) {
        out[c] = at(t, c);
    }
    return out;
}

namespace
{

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

struct dopri_stepper {
    const ode_rhs &rhs;
    std::size_t n;
    std::array<std::vector<double>, 7> k;
    std::vector<double> tmp, ynew, err;

    dopri_stepper(const ode_rhs &f, std::size_t dim) : rhs(f), n(dim), tmp(dim), ynew(dim), err(dim)
    {
        for (auto &v : k) {
            v.resize(dim);
        }
    }

    // k[0] must hold f(t, y). Fills ynew, err and k[6] = f(t+h, ynew).
    void step(double t, std::span<const double> y, double h)
    {
        auto stage = [&](double ct, std::initializer_list<std::pair<double, int>> coeffs, int out) {
            for (std::size_t i = 0; i < n; ++i) {
                double s = 0;
                for (const auto &[a, j] : coeffs) {
                    s += a * k[static_cast<std::size_t>(j)][i];
                }
                tmp[i] = y[i] + h * s;
            }
            rhs(t + ct * h, tmp, k[static_cast<std::size_t>(out)]);
        };
        stage(c2, {{a21, 0}}, 1);
        stage(c3, {{a31, 0}, {a32, 1}}, 2);
        stage(c4, {{a41, 0}, {a42, 1}, {a43, 2}}, 3);
        stage(c5, {{a51, 0}, {a52, 1}, {a53, 2}, {a54, 3}}, 4);
        stage(1.0, {{a61, 0}, {a62, 1}, {a63, 2}, {a64, 3}, {a65, 4}}, 5);
        for (std::size_t i = 0; i < n; ++i) {
            ynew[i] = y[i]
                      + h * (a71 * k[0][i] + a73 * k[2][i] + a74 * k[3][i] + a75 * k[4][i] + a76 * k[5][i]);
        }
        rhs(t + h, ynew, k[6]);
        for (std::size_t i = 0; i < n; ++i) {
            err[i] = h
                     * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] + e6 * k[5][i]
                        + e7 * k[6][i]);
        }
    }
};

double rms_error(std::span<const double> err, std::span<const double> y0, std::span<const double> y1,
                 const ode_options &opt)
{
    double s = 0;
    for (std::size_t i = 0; i < err.size(); ++i) {
        const double sc = opt.atol + opt.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double r = err[i] / sc;
        s += r * r;
    }
    const double e = std::sqrt(s / static_cast<double>(err.size()));
    return std::isfinite(e) ? e : std::numeric_limits<double>::infinity();
}

double initial_step(const ode_rhs &rhs, double t0, std::span<const double> y0, std::span<const double> f0,
                    double span, const ode_options &opt)
{
    const std::size_t n = y0.size();
    double d0 = 0, d1 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sc = opt.atol + opt.rtol * std::abs(y0[i]);
        d0 += (y0[i] / sc) * (y0[i] / sc);
        d1 += (f0[i] / sc) * (f0[i] / sc);
    }
    d0 = std::sqrt(d0 / static_cast<double>(n));
    d1 = std::sqrt(d1 / static_cast<double>(n));
    double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min(h, span);
    std::vector<double> y1(n), f1(n);
    for (std::size_t i = 0; i < n; ++i) {
        y1[i] = y0[i] + h * f0[i];
    }
    try {
        rhs(t0 + h, y1, f1);
    } catch (const domain_error &) {
        return h * 1e-3;
    }
    double d2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sc = opt.atol + opt.rtol * std::abs(y0[i]);
        d2 += ((f1[i] - f0[i]) / sc) * ((f1[i] - f0[i]) / sc);
    }
    d2 = std::sqrt(d2 / static_cast<double>(n)) / h;
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / dm, 0.2);
    return std::min({100 * h, h1, span});
}

bool all_finite(std::span<const double> v)
{
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Bracket for the escape time of a blown-up state. Power-law growth
// x' ~ c x^p with p >= 2 escapes within 2|x|/|x'| of the current time. The
// numerical solution lags the true one by an amount that grows near the
// singularity, so the lower end backs off to the last step where the state was
// smaller by a factor sqrt(rtol).
std::pair<double, double> escape_bracket(const trajectory &tr, std::span<const double> y, std::span<const double> f,
                                         double t, double h, double rtol)
{
    std::size_t k = 0;
    for (std::size_t i = 1; i < y.size(); ++i) {
        if (std::abs(y[i]) > std::abs(y[k])) {
            k = i;
        }
    }
    double reach = std::abs(h);
    if (f[k] != 0 && std::isfinite(f[k]) && std::isfinite(y[k])) {
        reach = std::max(reach, 2 * std::abs(y[k]) / std::abs(f[k]));
    }
    const double cut = std::sqrt(rtol) * std::abs(y[k]);
    double lo = tr.t_begin();
    for (std::size_t i = tr.size(); i-- > 0;) {
        if (std::abs(tr.state(i)[k]) <= cut) {
            lo = tr.times()[i];
            break;
        }
    }
    return {std::min(lo, t), t + reach};
}

} // namespace

trajectory integrate_ode(const ode_rhs &rhs, double t0, std::vector<double> y0, double tf, const ode_options &opt)
{
    if (!(tf > t0)) {
        throw std::invalid_argument("integrate_ode requires tf > t0");
    }
    if (!(opt.rtol > 0) || !(opt.atol > 0)) {
        throw std::invalid_argument("integrate_ode requires positive tolerances");
    }
    const std::size_t n = y0.size();
    std::vector<double> y = std::move(y0);
    dopri_stepper st(rhs, n);
    try {
        rhs(t0, y, st.k[0]);
    } catch (const domain_error &) {
        trajectory tr(n, t0, y, std::vector<double>(n, std::numeric_limits<double>::quiet_NaN()));
        tr.finish(trajectory_status::domain_error, {t0, t0});
        return tr;
    }
    trajectory tr(n, t0, y, st.k[0]);

    constexpr double expo1 = 0.17, beta = 0.04, safe = 0.9, facmin = 0.2, facmax = 10.0;
    double facold = 1e-4;
    double t = t0;
    double h = opt.h0 > 0 ? opt.h0 : initial_step(rhs, t0, y, st.k[0], tf - t0, opt);
    int domain_retries = 0;
    double last_domain_hit = std::numeric_limits<double>::quiet_NaN();

    for (std::size_t steps = 0; steps < opt.max_steps; ++steps) {
        if (opt.h_max > 0) {
            h = std::min(h, opt.h_max);
        }
        // Stretch a step that would leave only a sliver before tf.
        if (t + h > tf || tf - (t + h) < 1e-6 * h) {
            h = tf - t;
        }
        if (h < 1e-13 * std::max(1.0, std::abs(t))) {
            // Creeping up to a domain boundary looks like step underflow too.
            if (std::abs(t - last_domain_hit) <= 1e-8 * std::max(1.0, std::abs(t))) {
                tr.finish(trajectory_status::domain_error, {t, t});
                return tr;
            }
            tr.finish(trajectory_status::blow_up, escape_bracket(tr, y, st.k[0], t, h, opt.rtol));
            return tr;
        }
        double err = 0;
        try {
            st.step(t, y, h);
            err = all_finite(st.ynew) ? rms_error(st.err, y, st.ynew, opt) : std::numeric_limits<double>::infinity();
            domain_retries = 0;
        } catch (const domain_error &) {
            last_domain_hit = t;
            // Stages may leave the domain while the solution does not; shrink
            // a few times before reporting.
            if (++domain_retries > 20) {
                tr.finish(trajectory_status::domain_error, {t, t});
                return tr;
            }
            h *= 0.5;
            continue;
        }

        if (err <= 1.0) {
            t = (h == tf - t) ? tf : t + h;
            y = st.ynew;
            std::swap(st.k[0], st.k[6]);
            tr.push(t, y, st.k[0]);
            const bool escaped = std::any_of(y.begin(), y.end(),
                                             [&](double v) { return std::abs(v) > opt.blowup_magnitude; });
            if (escaped) {
                tr.finish(trajectory_status::blow_up, escape_bracket(tr, y, st.k[0], t, h, opt.rtol));
                return tr;
            }
            if (t >= tf) {
                tr.finish(trajectory_status::completed, {tf, tf});
                return tr;
            }
            double fac = std::pow(err, expo1) / std::pow(facold, beta);
            fac = std::clamp(fac / safe, 1.0 / facmax, 1.0 / facmin);
            facold = std::max(err, 1e-4);
            h /= fac;
        } else {
            const double fac = std::isfinite(err) ? std::min(1.0 / facmin, std::pow(err, expo1) / safe) : 1.0 / facmin;
            h /= fac;
        }
    }
    tr.finish(trajectory_status::blow_up, escape_bracket(tr, y, st.k[0], t, h, opt.rtol));
    return tr;
}

trajectory integrate_fixed(const ode_rhs &rhs, double t0, std::vector<double> y0, double tf, std::size_t nsteps)
{
    if (nsteps == 0u || !(tf > t0)) {
        throw std::invalid_argument("integrate_fixed requires tf > t0 and at least one step");
    }
    const std::size_t n = y0.size();
    std::vector<double> y = std::move(y0);
    dopri_stepper st(rhs, n);
    rhs(t0, y, st.k[0]);
    trajectory tr(n, t0, y, st.k[0]);
    const double h = (tf - t0) / static_cast<double>(nsteps);
    for (std::size_t i = 0; i < nsteps; ++i) {
        const double t = t0 + static_cast<double>(i) * h;
        st.step(t, y, h);
        y = st.ynew;
        std::swap(st.k[0], st.k[6]);
        tr.push(i + 1 == nsteps ? tf : t + h, y, st.k[0]);
    }
    tr.finish(trajectory_status::completed, {tf, tf});
    return tr;
}

// ---------------------------------------------------------------------------

namespace
{

struct simpson_state {
    const std::function<double(double)> &f;
    int max_depth;
    bool depth_hit = false;
    long budget = 4'000'000;
};

double simpson_rec(simpson_state &s, double a, double b, double fa, double fm, double fb, double whole, double tol,
                   int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = s.f(lm);
    const double frm = s.f(rm);
    const double left = (m - a) / 6 * (fa + 4 * flm + fm);
    const double right = (b - m) / 6 * (fm + 4 * frm + fb);
    const double delta = left + right - whole;
    // Below rounding level further refinement only chases noise.
    const double floor = 64 * std::numeric_limits<double>::epsilon() * (std::abs(left) + std::abs(right));
    if (std::abs(delta) <= std::max(15 * tol, floor) || m <= a || b <= m) {
        return left + right + delta / 15;
    }
    s.budget -= 2;
    if (depth >= s.max_depth || s.budget <= 0) {
        s.depth_hit = true;
        return left + right + delta / 15;
    }
    return simpson_rec(s, a, m, fa, flm, fm, left, tol / 2, depth + 1)
           + simpson_rec(s, m, b, fm, frm, fb, right, tol / 2, depth + 1);
}

} // namespace

double quad_adaptive(const std::function<double(double)> &f, double a, double b, double tol, int max_depth)
{
    if (a == b) {
        return 0;
    }
    if (a > b) {
        return -quad_adaptive(f, b, a, tol, max_depth);
    }
    simpson_state s{f, max_depth};
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6 * (fa + 4 * fm + fb);
    const double r = simpson_rec(s, a, b, fa, fm, fb, whole, tol, 0);
    if (s.depth_hit) {
        throw accuracy_error("adaptive quadrature reached its depth or evaluation cap", r);
    }
    if (!std::isfinite(r)) {
        throw accuracy_error("adaptive quadrature produced a non-finite value", r);
    }
    return r;
}

double root_bracketed(const std::function<double(double)> &f, double lo, double hi, double tol)
{
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (fa == 0) {
        return a;
    }
    if (fb == 0) {
        return b;
    }
    if ((fa > 0) == (fb > 0)) {
        throw precondition_error("root_bracketed: no sign change on the bracket");
    }
    double c = a, fc = fa, d = b - a, e = d;
    for (int iter = 0; iter < 200; ++iter) {
        if ((fb > 0) == (fc > 0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0) {
            return b;
        }
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2 * xm * s;
                q = 1 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2 * xm * q * (q - r) - (b - a) * (r - 1));
                q = (q - 1) * (r - 1) * (s - 1);
            }
            if (p > 0) {
                q = -q;
            }
            p = std::abs(p);
            if (2 * p < std::min(3 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol1 ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
    }
    return b;
}

// ---------------------------------------------------------------------------

void write_csv(std::ostream &os, const trajectory &tr, const std::vector<double> &dense_times)
{
    os << "t";
    if (tr.dim() == 1u) {
        os << ",x";
    } else if (tr.dim() == 2u) {
        os << ",x,v";
    } else {
        for (std::size_t i = 0; i < tr.dim(); ++i) {
            os << ",y" << i;
        }
    }
    os << '\n';
    auto row = [&](double t, std::span<const double> y) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", t);
        os << buf;
        for (const double v : y) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            os << ',' << buf;
        }
        os << '\n';
    };
    std::vector<double> extra;
    for (const double t : dense_times) {
        if (t >= tr.t_begin() && t <= tr.t_end()) {
            extra.push_back(t);
        }
    }
    std::sort(extra.begin(), extra.end());
    std::size_t j = 0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const double ti = tr.times()[i];
        while (j < extra.size() && extra[j] < ti) {
            row(extra[j], tr.at(extra[j]));
            ++j;
        }
        while (j < extra.size() && extra[j] == ti) {
            ++j;
        }
        row(ti, tr.state(i));
    }
}

// ---------------------------------------------------------------------------

std::vector<double> linspace(double a, double b, std::size_t n)
{
    std::vector<double> out(n);
    if (n == 1u) {
        out[0] = a;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    out.back() = b;
    return out;
}

double superposition_residual(const scalar_rhs &rhs, const std::vector<scalar_solution> &solutions,
                              const std::function<double(std::span<const double>)> &rule,
                              const std::vector<double> &grid)
{
    double worst = 0;
    bool any = false;
    std::vector<double> xs(solutions.size());
    for (const double t : grid) {
        try {
            for (std::size_t i = 0; i < solutions.size(); ++i) {
                xs[i] = solutions[i](t);
            }
            const double x = rule(xs);
            double dx = 0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                const double hx = 1e-5 * (1 + std::abs(xs[i]));
                auto at = [&](double s) {
                    auto y = xs;
                    y[i] += s * hx;
                    return rule(y);
                };
                const double dphi = (at(-2) - 8 * at(-1) + 8 * at(1) - at(2)) / (12 * hx);
                dx += dphi * rhs(t, xs[i]);
            }
            const double r = std::abs(dx - rhs(t, x)) / (1 + std::abs(dx));
            if (!std::isfinite(r)) {
                continue;
            }
            worst = std::max(worst, r);
            any = true;
        } catch (const domain_error &) {
            continue;
        } catch (const std::out_of_range &) {
            continue;
        }
    }
    if (!any) {
        throw precondition_error("superposition_residual: no admissible grid point");
    }
    return worst;
}

double conservation_residual(const std::function<double(std::span<const double>)> &energy, const trajectory &tr)
{
    const double e0 = energy(tr.state(0));
    double worst = 0;
    for (std::size_t i = 1; i < tr.size(); ++i) {
        worst = std::max(worst, std::abs(energy(tr.state(i)) - e0));
    }
    return worst;
}

double darboux_growth_residual(const std::function<double(std::span<const double>)> &D,
                               const std::function<double(std::span<const double>)> &cofactor,
                               const trajectory &tr, double max_substep)
{
    const double d0 = D(tr.state(0));
    double integral = 0;
    double worst = 0;
    double f_prev = cofactor(tr.state(0));
    for (std::size_t i = 1; i < tr.size(); ++i) {
        const double ta = tr.times()[i - 1];
        const double tb = tr.times()[i];
        const auto m = static_cast<std::size_t>(std::ceil((tb - ta) / max_substep));
        const double dt = (tb - ta) / static_cast<double>(std::max<std::size_t>(m, 1));
        for (std::size_t j = 1; j <= std::max<std::size_t>(m, 1); ++j) {
            const double t = (j == std::max<std::size_t>(m, 1)) ? tb : ta + static_cast<double>(j) * dt;
            const double f = (j == std::max<std::size_t>(m, 1)) ? cofactor(tr.state(i)) : cofactor(tr.at(t));
            integral += 0.5 * dt * (f_prev + f);
            f_prev = f;
        }
        const double predicted = d0 * std::exp(integral);
        const double actual = D(tr.state(i));
        const double scale = std::max(std::abs(actual), std::numeric_limits<double>::min());
        worst = std::max(worst, std::abs(actual - predicted) / scale);
    }
    return worst;
}

double solution_map_residual(const std::function<std::vector<double>(double, std::span<const double>)> &map,
                             const trajectory &src, const trajectory &dst, const std::vector<double> &grid)
{
    const double lo = std::max(src.t_begin(), dst.t_begin());
    const double hi = std::min(src.t_end(), dst.t_end());
    if (!(hi > lo)) {
        throw precondition_error("solution_map_residual: empty common window");
    }
    double worst = 0;
    bool any = false;
    for (const double t : grid) {
        if (t < lo || t > hi) {
            continue;
        }
        try {
            const auto mapped = map(t, src.at(t));
            const auto target = dst.at(t);
            for (std::size_t c = 0; c < target.size(); ++c) {
                worst = std::max(worst, std::abs(mapped[c] - target[c]));
            }
            any = true;
        } catch (const domain_error &) {
            continue;
        }
    }
    if (!any) {
        throw precondition_error("solution_map_residual: no admissible grid point in the common window");
    }
    return worst;
}

} // namespace abelkit
