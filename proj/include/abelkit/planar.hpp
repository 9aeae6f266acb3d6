#ifndef ABELKIT_PLANAR_HPP
#define ABELKIT_PLANAR_HPP

#include <optional>

#include <abelkit/expr.hpp>
#include <abelkit/numerics.hpp>
#include <abelkit/poly.hpp>

namespace abelkit
{

// X = P d/dx + Q d/dv.
struct planar_vf {
    poly_xy P;
    poly_xy Q;

    friend bool operator==(const planar_vf &, const planar_vf &) = default;
};

poly_xy divergence(const planar_vf &);

// P dD/dx + Q dD/dv.
poly_xy apply_vf(const planar_vf &, const poly_xy &D);

ode_rhs to_ode_rhs(const planar_vf &);

// The polynomial as a phase function of (x, v).
phase_function to_expression(const poly_xy &);

// Exact polynomial for an expression built from x, v and rationals with sums,
// products, constant quotients and non-negative integer powers.
std::optional<poly_xy> to_poly_xy(const expression &);

} // namespace abelkit

#endif
