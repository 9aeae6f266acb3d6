#ifndef ABELKIT_HIERARCHY_HPP
#define ABELKIT_HIERARCHY_HPP

#include <span>
#include <string>
#include <vector>

#include <abelkit/expr.hpp>
#include <abelkit/planar.hpp>
#include <abelkit/poly.hpp>

namespace abelkit
{

// Polynomial in the jet variables u_0 = x, u_1, ..., u_order; variable j of
// the underlying mpoly is u_j.
struct jet_poly {
    mpoly p;
    int order = 0;

    friend bool operator==(const jet_poly &, const jet_poly &) = default;
};

jet_poly jet_x();
jet_poly jet_constant(const rational &);
jet_poly jet_variable(int j);

jet_poly operator+(const jet_poly &, const jet_poly &);
jet_poly operator*(const rational &, const jet_poly &);
jet_poly operator*(const jet_poly &, const jet_poly &);

// d/dt along jets: u_j -> u_{j+1}. Raises the order by one.
jet_poly total_derivative(const jet_poly &);

// d/dt + x^2.
jet_poly abel_operator(const jet_poly &);

// e.g. "u2 + 4*x^2*u1 + x^5", highest jet variable first.
std::string to_string(const jet_poly &);

// u holds u_0 .. u_order.
double eval(const jet_poly &, std::span<const double> u);

struct hierarchy_term {
    scalar_expr coeff;
    jet_poly jet;
};

// sum_j p_j D_A^{n-j} x + p_{n+1}; terms[j] carries p_j, the last term the
// constant jet 1.
struct hierarchy_equation {
    int order = 0;
    std::vector<hierarchy_term> terms;
};

// Requires p.size() == n + 2 and n >= 1.
hierarchy_equation build_hierarchy_equation(const std::vector<scalar_expr> &p, int n);

// The left-hand side as one jet polynomial. Requires every coefficient to be a
// rational constant.
jet_poly combined_jet(const hierarchy_equation &);

// Order 2 with constant coefficients and nonzero leading coefficient:
// P = v, Q = F(x, v) from u_2 = F(u_0, u_1).
planar_vf to_planar_vf(const hierarchy_equation &);
// Same for a jet polynomial linear in u_2 with constant coefficient, order <= 2.
planar_vf to_planar_vf(const jet_poly &);

} // namespace abelkit

#endif
