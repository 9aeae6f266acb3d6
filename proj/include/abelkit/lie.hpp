#ifndef ABELKIT_LIE_HPP
#define ABELKIT_LIE_HPP

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <abelkit/abel.hpp>
#include <abelkit/poly.hpp>

namespace abelkit
{

// Linearly independent polynomial fields; construction checks the rank.
class vspan
{
public:
    vspan() = default;
    explicit vspan(std::vector<vf1d> basis);

    [[nodiscard]] const std::vector<vf1d> &basis() const noexcept
    {
        return m_basis;
    }
    [[nodiscard]] std::size_t dim() const noexcept
    {
        return m_basis.size();
    }
    [[nodiscard]] int max_degree() const noexcept;

private:
    std::vector<vf1d> m_basis;
};

// <d, x d, x^2 d, x^3 d>
vspan v_abel();
// <d, x d, x^2 d>
vspan v_riccati();
// <d, x d>
vspan w_abel();

vf1d bracket_1d(const vf1d &f, const vf1d &g);

std::optional<std::vector<rational>> in_span(const vf1d &, const vspan &);

// Fields f of degree <= max_deg with [f, b] in span for every basis element b,
// returned in reduced echelon form (lowest degree first).
vspan normalizer_in_degree(const vspan &, int max_deg);

class closure_error : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

// Y1 = (mu + x) d, Y2 = (x^3 + 3 mu x^2 - 2 mu^3) d; returns (a, b) with
// [Y1, Y2] = a Y1 + b Y2.
std::pair<rational, rational> check_two_dim_subalgebra(const rational &mu);

// Point of R u {inf}.
struct ext_real {
    double value = 0;
    bool infinite = false;

    static ext_real inf() noexcept
    {
        return {0, true};
    }
    friend bool operator==(const ext_real &a, const ext_real &b) noexcept
    {
        return a.infinite == b.infinite && (a.infinite || a.value == b.value);
    }
};

std::string to_string(const ext_real &);

// (k x1 (x3 - x2) + x2 (x1 - x3)) / (k (x3 - x2) + (x1 - x3)); k = inf gives x1.
// A vanishing denominator yields inf.
ext_real riccati_superposition(double x1, double x2, double x3, ext_real k);

// Row-major {{a, b}, {c, d}}.
using mat2 = std::array<std::array<double, 2>, 2>;

mat2 mat_mul(const mat2 &, const mat2 &);

// x -> (a x + b) / (c x + d) on the extended line. Requires det = 1 within 1e-12.
ext_real mobius_apply(const mat2 &, ext_real x);

// Curve t -> {{a, b}, {c, d}} in SL(2, R).
struct mobius {
    scalar_expr a{1};
    scalar_expr b{};
    scalar_expr c{};
    scalar_expr d{1};
};

mobius mobius_product(const mobius &, const mobius &);
mat2 eval(const mobius &, double t);

// Riccati coefficients after xbar = (a x + b) / (c x + d). Requires degree 2
// and a d - b c = 1 at every sampled point.
abel_first_kind sl2_coefficient_action(const mobius &, const abel_first_kind &riccati, const sample_options & = {});

} // namespace abelkit

#endif
