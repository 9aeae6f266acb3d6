#ifndef ABELKIT_ABEL_HPP
#define ABELKIT_ABEL_HPP

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <abelkit/errors.hpp>
#include <abelkit/expr.hpp>
#include <abelkit/numerics.hpp>

namespace abelkit
{

// x' = A0 + A1 x + ... + An x^n.
struct abel_first_kind {
    std::vector<scalar_expr> coeffs;
    // Working interval for sampling decisions; absent means the default
    // |t| in [0.1, 3] distribution.
    std::optional<interval> domain;
    // Set by lienard_to_abel: the independent variable is the Liénard space
    // variable, relabeled t.
    bool lienard = false;

    [[nodiscard]] int degree() const noexcept
    {
        return static_cast<int>(coeffs.size()) - 1;
    }
    // Coefficient i, zero beyond the stored degree.
    [[nodiscard]] scalar_expr coeff(std::size_t i) const
    {
        return i < coeffs.size() ? coeffs[i] : scalar_expr{};
    }
};

abel_first_kind make_abel(scalar_expr a0, scalar_expr a1, scalar_expr a2, scalar_expr a3);
abel_first_kind make_riccati(scalar_expr c0, scalar_expr c1, scalar_expr c2);

// (y + f) y' = B0 + B1 y + B2 y^2 + B3 y^3.
struct abel_second_kind {
    scalar_expr f;
    std::array<scalar_expr, 4> b;
    std::optional<interval> domain;
};

// Acts by substituting x = alpha * xbar + beta; solutions map as
// xbar = (x - beta) / alpha.
struct gauge {
    scalar_expr alpha{1};
    scalar_expr beta{};

    static gauge identity()
    {
        return {};
    }
};

// Sampling options restricted to the equation's working interval.
sample_options sampling_for(const abel_first_kind &, sample_options base = {});

double eval_rhs(const abel_first_kind &, double t, double x);
ode_rhs to_ode_rhs(const abel_first_kind &);

abel_first_kind second_to_first(const abel_second_kind &);

// Liénard data f(x), g(x) parsed over x. Returns u' = f u^2 + g u^3 with x
// relabeled t.
abel_first_kind lienard_to_abel(const expression &fx, const expression &gx);

// Requires degree 3. Throws precondition_error when alpha is numerically zero
// at a sampled point.
abel_first_kind gauge_transform(const abel_first_kind &, const gauge &, const sample_options & = {});

// Applying g1 then g2 equals applying gauge_compose(g2, g1).
gauge gauge_compose(const gauge &g2, const gauge &g1);
gauge gauge_invert(const gauge &);

struct shift_result {
    abel_first_kind eq;
    gauge g;
};

// Removes the quadratic term with alpha = 1, beta = -A2/(3 A3). Throws
// precondition_error when A3 vanishes at a sampled point.
shift_result canonical_shift(const abel_first_kind &, const sample_options & = {});

// A0 vanishes at a sampled point without vanishing identically.
class mixed_type_error : public precondition_error
{
public:
    mixed_type_error(const std::string &msg, double t) : precondition_error(msg), m_t(t)
    {
    }
    [[nodiscard]] double where() const noexcept
    {
        return m_t;
    }

private:
    double m_t;
};

enum class canonical_kind { first, second };

struct canonical_result {
    canonical_kind kind;
    abel_first_kind eq;
    // Gauges in application order.
    std::vector<gauge> gauges;
};

canonical_result canonical_form(const abel_first_kind &, const sample_options & = {});

// as_printed and times_phi3 reproduce the published formulas; corrected uses
// the relative invariant Phi3 = A3 A2' - A2 A3' + 3 A0 A3^2 - A1 A2 A3 + 2/9 A2^3
// and Phi5 = A3 Phi3' - 3 (A3' + A1 A3 - A2^2/3) Phi3, of gauge weights 3 and 5.
enum class phi5_variant { as_printed, times_phi3, corrected };

inline constexpr phi5_variant default_phi5_variant = phi5_variant::corrected;

const char *name(phi5_variant) noexcept;
std::optional<phi5_variant> parse_phi5_variant(std::string_view);

struct liouville_invariants {
    scalar_expr phi3;
    scalar_expr phi5;
    // Absent when Phi5 is the constant zero.
    std::optional<scalar_expr> quotient;
    phi5_variant variant;
};

liouville_invariants liouville(const abel_first_kind &, phi5_variant = default_phi5_variant);

enum class abel_class { riccati, bernoulli, separable, solvable_two_dim, generic };

const char *name(abel_class) noexcept;

struct classification {
    abel_class kind = abel_class::generic;
    // Separable: x' = h(t) (c0 + c1 x + c2 x^2 + c3 x^3) with h = A3 when A3 is
    // not identically zero.
    scalar_expr h;
    std::array<double, 4> c{};
    // SolvableTwoDim.
    double mu = 0;
};

classification classify(const abel_first_kind &, const sample_options & = {});

// Solution object backed by quadrature on a fixed panel grid over [t0, tf].
// Evaluation is read-only and thread-safe.
class quadrature_solution
{
public:
    quadrature_solution(double t0, double t_end, std::function<double(double)> eval,
                        trajectory_status status = trajectory_status::completed,
                        std::pair<double, double> bracket = {0, 0});

    // Throws std::out_of_range outside [t0, t_end].
    double operator()(double t) const;

    [[nodiscard]] double t0() const noexcept
    {
        return m_t0;
    }
    [[nodiscard]] double t_end() const noexcept
    {
        return m_t_end;
    }
    [[nodiscard]] trajectory_status status() const noexcept
    {
        return m_status;
    }
    [[nodiscard]] std::pair<double, double> bracket() const noexcept
    {
        return m_bracket;
    }

private:
    double m_t0;
    double m_t_end;
    std::shared_ptr<const std::function<double(double)>> m_eval;
    trajectory_status m_status;
    std::pair<double, double> m_bracket;
};

struct solver_options {
    std::size_t panels = 64;
    double quad_tol = 1e-13;
};

// x' = c0 + c1 x by the integrating factor. Requires tf > t0.
quadrature_solution solve_linear(const scalar_expr &c0, const scalar_expr &c1, double t0, double x0, double tf,
                                 const solver_options & = {});

// Requires A0 = A2 = 0 and x0 != 0. u = 1/x^2 solves u' = -2 A1 u - 2 A3; a
// zero of u is a blow-up of x.
quadrature_solution solve_bernoulli(const abel_first_kind &, double t0, double x0, double tf,
                                    const solver_options & = {}, const sample_options & = {});

// x' = h(t) p(x) with p(x) = c0 + c1 x + c2 x^2 + c3 x^3.
quadrature_solution solve_separable(const scalar_expr &h, const std::array<double, 4> &c, double t0, double x0,
                                    double tf, const solver_options & = {});
quadrature_solution solve_separable(const abel_first_kind &, double t0, double x0, double tf,
                                    const solver_options & = {}, const sample_options & = {});

// max |x'(t) - rhs(t, x(t))| over n interior points of the solution's
// interval, x' by a five-point stencil whose step is halved until successive
// estimates agree. Points where the rhs is undefined are skipped.
double solution_residual(const quadrature_solution &, const scalar_rhs &rhs, std::size_t n = 100);

} // namespace abelkit

#endif
