#ifndef ABELKIT_EXPR_HPP
#define ABELKIT_EXPR_HPP

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <abelkit/rational.hpp>

namespace abelkit
{

// Independent variable t, and the phase-space coordinates (x, v) used by
// Lagrangians, energies and multipliers.
enum class variable : std::uint8_t { t, x, v };

enum class func_kind : std::uint8_t { sin, cos, tan, exp, ln, sqrt };

enum class node_kind : std::uint8_t { constant, variable, sum, product, quotient, power, function, negation };

const char *name(variable v) noexcept;
const char *name(func_kind f) noexcept;

// Immutable expression tree. Copies share structure; all builders perform
// constant folding and zero/one elimination, nothing more.
class expression
{
public:
    struct node;

    expression();
    expression(const rational &);
    expression(int);

    static expression var(variable);
    static expression t()
    {
        return var(variable::t);
    }

    [[nodiscard]] node_kind kind() const noexcept;
    // Valid for constant nodes only.
    [[nodiscard]] const rational &value() const;
    // Valid for variable nodes only.
    [[nodiscard]] variable var_id() const;
    // Valid for function nodes only.
    [[nodiscard]] func_kind func() const;
    // Valid for power nodes only.
    [[nodiscard]] const rational &exponent() const;
    // Children: sum/product/quotient have two, power/function/negation one.
    [[nodiscard]] const expression &lhs() const;
    [[nodiscard]] const expression &rhs() const;
    [[nodiscard]] const expression &arg() const;

    [[nodiscard]] bool is_constant() const noexcept
    {
        return kind() == node_kind::constant;
    }
    [[nodiscard]] bool is_zero() const noexcept;
    [[nodiscard]] bool is_one() const noexcept;

    friend expression operator+(const expression &, const expression &);
    friend expression operator-(const expression &, const expression &);
    friend expression operator*(const expression &, const expression &);
    friend expression operator/(const expression &, const expression &);
    friend expression operator-(const expression &);
    friend expression pow(const expression &, const rational &);
    friend expression apply(func_kind, const expression &);

private:
    explicit expression(std::shared_ptr<const node>);
    std::shared_ptr<const node> m_node;
};

expression sin(const expression &);
expression cos(const expression &);
expression tan(const expression &);
expression exp(const expression &);
expression ln(const expression &);
expression sqrt(const expression &);

// base^e for rational e; odd denominators admit negative bases. Throws
// domain_error otherwise and for zero to a negative power.
double real_pow(double base, const rational &e);

// Functions of t (coefficients A_i(t), gauges, ...).
using scalar_expr = expression;
// Functions of (x, v) (Lagrangians, energies, multipliers).
using phase_function = expression;

// Evaluation point. Unused coordinates are ignored.
struct point {
    double t = 0;
    double x = 0;
    double v = 0;
};

// Throws domain_error on ln of non-positive, division by zero, sqrt of
// negative, even roots of negatives or non-finite results. When guard > 0,
// any quotient denominator or negative-power base smaller than guard in
// magnitude is also a domain error (used to keep residual grids off poles).
double eval(const expression &, const point &, double guard = 0);

inline double eval_scalar(const expression &e, double t)
{
    return eval(e, point{t, 0, 0});
}

expression differentiate(const expression &, variable = variable::t);

// Replaces every occurrence of var by the given expression.
expression substitute(const expression &, variable, const expression &);

bool depends_on(const expression &, variable);

// Grammar-conforming text; parse(to_string(e)) evaluates identically to e.
std::string to_string(const expression &);

// Parses the expression grammar. By default only t is a valid identifier;
// pass a different set to parse phase functions (x, v) or Liénard data (x).
expression parse_expression(std::string_view, std::initializer_list<variable> vars = {variable::t});

inline expression parse_scalar(std::string_view text)
{
    return parse_expression(text, {variable::t});
}

inline constexpr std::uint64_t default_seed = 0xABE1;

struct interval {
    double lo;
    double hi;
};

// Seeded sampling of t used by every numeric identity decision. Without an
// explicit interval, points are drawn with |t| uniform in [0.1, 3] and a random
// sign; draws hitting a domain error are retried.
struct sample_options {
    std::uint64_t seed = default_seed;
    int samples = 32;
    double tol = 1e-9;
    std::optional<interval> domain;
};

// Deterministic stream of candidate sample points (may include points where a
// given expression is undefined; callers skip those).
std::vector<double> sample_points(const sample_options &, std::size_t count);

// |a - b| <= tol * (1 + max(|a|, |b|)) at every admissible sampled t.
// Throws indeterminate_error when no drawn point is admissible.
bool expr_equal_numeric(const expression &a, const expression &b, const sample_options & = {});
bool expr_equal_numeric(const expression &a, const expression &b, int samples, double tol);

inline bool is_zero_numeric(const expression &e, const sample_options &opts = {})
{
    return expr_equal_numeric(e, expression{}, opts);
}

// Numerically constant on the sampled points: compares against the value at
// the first admissible point. Returns that value when constant.
std::optional<double> constant_value_numeric(const expression &, const sample_options & = {});

} // namespace abelkit

#endif
