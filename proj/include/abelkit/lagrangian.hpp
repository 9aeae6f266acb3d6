#ifndef ABELKIT_LAGRANGIAN_HPP
#define ABELKIT_LAGRANGIAN_HPP

#include <array>
#include <cstdint>
#include <vector>

#include <abelkit/expr.hpp>
#include <abelkit/poly.hpp>

namespace abelkit
{

// c (a v + b(x))^rho with a != 0 and b free of v.
struct power_form {
    rational c{1};
    rational a{1};
    poly_xy b;
    rational rho;

    friend bool operator==(const power_form &, const power_form &) = default;
};

// Throws precondition_error unless a != 0 and b does not involve v.
void validate(const power_form &);

phase_function to_expression(const power_form &);
double eval(const power_form &, double x, double v);

// Exact v-derivative, again a power form (zero scale when rho = 0).
power_form d_dv(const power_form &);

// L with d^2L/dv^2 = R, both v-integration functions set to zero:
// c / (a^2 (rho+1)(rho+2)) (a v + b)^(rho+2). Throws precondition_error for
// rho = -1 or -2.
power_form lagrangian_from_multiplier(const power_form &R);

// v dL/dv - L.
phase_function energy(const phase_function &L);
phase_function energy(const power_form &L);

// Energy of a power form as base * factor, exactly:
// c (a v + b)^(rho-1) * (a (rho-1) v - b).
struct power_energy {
    power_form base;
    poly_xy factor;
};

power_energy energy_exact(const power_form &L);
phase_function to_expression(const power_energy &);

using phase_points = std::vector<std::array<double, 2>>;

// n seeded points of [-w, w]^2 where every base has magnitude at least margin.
// Throws precondition_error when rejection sampling keeps failing.
phase_points samples_away_from(const std::vector<poly_xy> &bases, std::size_t n, std::uint64_t seed = default_seed,
                               double w = 1, double margin = 0.25);

// max |v g_x + F g_v + g F_v| over the points.
double helmholtz_residual_1d(const phase_function &g, const poly_xy &F, const phase_points &);

// max |L_vv F + L_xv v - L_x| over the points.
double euler_lagrange_residual(const phase_function &L, const poly_xy &F, const phase_points &);

} // namespace abelkit

#endif
