#ifndef ABELKIT_DARBOUX_HPP
#define ABELKIT_DARBOUX_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <abelkit/errors.hpp>
#include <abelkit/expr.hpp>
#include <abelkit/planar.hpp>

namespace abelkit
{

// X D = cofactor * D.
struct darboux_pair {
    poly_xy D;
    poly_xy cofactor;

    friend bool operator==(const darboux_pair &, const darboux_pair &) = default;
};

bool is_darboux_pair(const planar_vf &, const poly_xy &D, const poly_xy &f);

// Exact quotient num / den, or nullopt when den does not divide num.
std::optional<poly_xy> divide_exact(const poly_xy &num, const poly_xy &den);

// All D = v + b(x) with deg b <= max_bdeg and rational coefficients such that
// X D = f D for a polynomial f. Coefficients of b that stay unconstrained are
// set to zero. Sorted by deg b, then by the coefficients of b from the leading
// one down, larger first.
std::vector<darboux_pair> find_darboux_vlinear(const planar_vf &, int max_bdeg);

class no_multiplier_error : public precondition_error
{
public:
    using precondition_error::precondition_error;
};

struct jm_solution {
    std::vector<rational> nu;
    // Indices of exponents left free in the linear system and set to zero.
    std::vector<std::size_t> free;
};

// sum nu_i f_i = -div X. A single pair is tried first, in input order; then the
// whole system with free exponents at zero. Throws no_multiplier_error when
// inconsistent.
jm_solution jm_exponents(const std::vector<darboux_pair> &, const planar_vf &);

// R = prod base_i^exponent_i.
struct multiplier_product {
    std::vector<std::pair<poly_xy, rational>> factors;
};

// Drops zero exponents and merges equal bases.
multiplier_product build_multiplier(const std::vector<darboux_pair> &, const std::vector<rational> &nu);

// R(x, v); throws domain_error on a vanishing base or an even root of a
// negative one.
double eval(const multiplier_product &, double x, double v);

// R as a phase function.
phase_function to_phase_function(const multiplier_product &);

// max |R (sum nu_i f_i + div X)| over the points, with f_i = X(base_i) / base_i
// exactly. Points where R is undefined or a base is below 1e-6 in magnitude are
// skipped. Throws precondition_error when a base is not a Darboux polynomial of X.
double jm_residual(const multiplier_product &, const planar_vf &, const std::vector<std::array<double, 2>> &points);

// Uniform points in [-w, w]^2.
std::vector<std::array<double, 2>> phase_samples(std::size_t n, std::uint64_t seed = default_seed, double w = 2);

} // namespace abelkit

#endif
