#include <abelkit/lagrangian.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include <abelkit/errors.hpp>
#include <abelkit/planar.hpp>

namespace abelkit
{

void validate(const power_form &f)
{
    if (f.a == 0) {
        throw precondition_error("power form needs a nonzero coefficient of v");
    }
    if (degree_v(f.b) > 0) {
        throw precondition_error("power form base must be a v + b(x)");
    }
}

phase_function to_expression(const power_form &f)
{
    validate(f);
    const auto base = expression(f.a) * expression::var(variable::v) + to_expression(f.b);
    return expression(f.c) * pow(base, f.rho);
}

double eval(const power_form &f, double x, double v)
{
    validate(f);
    const double a = f.a.convert_to<double>();
    return f.c.convert_to<double>() * real_pow(a * v + eval(f.b, x, v), f.rho);
}

power_form d_dv(const power_form &f)
{
    validate(f);
    auto r = f;
    r.c = f.c * f.a * f.rho;
    r.rho = f.rho - 1;
    return r;
}

power_form lagrangian_from_multiplier(const power_form &R)
{
    validate(R);
    if (R.rho == -1 || R.rho == -2) {
        throw precondition_error("multiplier exponent -1 or -2 gives a logarithmic Lagrangian");
    }
    auto L = R;
    L.c = R.c / (R.a * R.a * (R.rho + 1) * (R.rho + 2));
    L.rho = R.rho + 2;
    return L;
}

phase_function energy(const phase_function &L)
{
    const auto v = expression::var(variable::v);
    return v * differentiate(L, variable::v) - L;
}

phase_function energy(const power_form &L)
{
    return energy(to_expression(L));
}

phase_points samples_away_from(const std::vector<poly_xy> &bases, std::size_t n, std::uint64_t seed, double w,
                               double margin)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-w, w);
    phase_points out;
    for (std::size_t tries = 0; out.size() < n; ++tries) {
        if (tries > 1000 * (n + 1)) {
            throw precondition_error("no sample points away from the zero sets");
        }
        const double x = d(rng);
        const double v = d(rng);
        if (std::all_of(bases.begin(), bases.end(), [&](const poly_xy &b) { return std::abs(eval(b, x, v)) >= margin; })) {
            out.push_back({x, v});
        }
    }
    return out;
}

power_energy energy_exact(const power_form &L)
{
    validate(L);
    auto base = L;
    base.rho = L.rho - 1;
    return {base, L.a * (L.rho - 1) * xy::v() - L.b};
}

phase_function to_expression(const power_energy &E)
{
    return to_expression(E.base) * to_expression(E.factor);
}

namespace
{

constexpr double guard = 1e-6;

template <typename F>
double max_over(const phase_points &pts, F &&f)
{
    double worst = 0;
    for (const auto &[x, v] : pts) {
        try {
            worst = std::max(worst, std::abs(f(point{0, x, v})));
        } catch (const domain_error &) {
        }
    }
    return worst;
}

} // namespace

double helmholtz_residual_1d(const phase_function &g, const poly_xy &F, const phase_points &pts)
{
    const auto gx = differentiate(g, variable::x);
    const auto gv = differentiate(g, variable::v);
    const auto Fv = d_dv(F);
    return max_over(pts, [&](const point &p) {
        const double f = eval(F, p.x, p.v);
        return p.v * eval(gx, p, guard) + f * eval(gv, p, guard) + eval(g, p, guard) * eval(Fv, p.x, p.v);
    });
}

double euler_lagrange_residual(const phase_function &L, const poly_xy &F, const phase_points &pts)
{
    const auto Lx = differentiate(L, variable::x);
    const auto Lv = differentiate(L, variable::v);
    const auto Lvv = differentiate(Lv, variable::v);
    const auto Lxv = differentiate(Lv, variable::x);
    return max_over(pts, [&](const point &p) {
        return eval(Lvv, p, guard) * eval(F, p.x, p.v) + eval(Lxv, p, guard) * p.v - eval(Lx, p, guard);
    });
}

} // namespace abelkit
