#ifndef ABELKIT_POLY_HPP
#define ABELKIT_POLY_HPP

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <abelkit/rational.hpp>

namespace abelkit
{

// Sparse polynomial with exact rational coefficients. Zero coefficients are
// never stored. Monomial must be totally ordered, default-construct to the
// unit monomial, and provide monomial_mul().
template <typename Monomial>
class sparse_poly
{
public:
    using monomial_type = Monomial;
    using term_map = std::map<Monomial, rational>;

    sparse_poly() = default;
    sparse_poly(const rational &c)
    {
        add_term(Monomial{}, c);
    }
    sparse_poly(int c) : sparse_poly(rational{c}) {}

    static sparse_poly term(const Monomial &m, const rational &c)
    {
        sparse_poly p;
        p.add_term(m, c);
        return p;
    }

    [[nodiscard]] const term_map &terms() const noexcept
    {
        return m_terms;
    }
    [[nodiscard]] bool is_zero() const noexcept
    {
        return m_terms.empty();
    }
    [[nodiscard]] std::size_t size() const noexcept
    {
        return m_terms.size();
    }
    [[nodiscard]] rational coeff(const Monomial &m) const
    {
        const auto it = m_terms.find(m);
        return it == m_terms.end() ? rational{0} : it->second;
    }

    void add_term(const Monomial &m, const rational &c)
    {
        if (c == 0) {
            return;
        }
        auto [it, inserted] = m_terms.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) {
                m_terms.erase(it);
            }
        }
    }

    sparse_poly &operator+=(const sparse_poly &o)
    {
        for (const auto &[m, c] : o.m_terms) {
            add_term(m, c);
        }
        return *this;
    }
    sparse_poly &operator-=(const sparse_poly &o)
    {
        for (const auto &[m, c] : o.m_terms) {
            add_term(m, rational(-c));
        }
        return *this;
    }

    friend sparse_poly operator+(sparse_poly a, const sparse_poly &b)
    {
        a += b;
        return a;
    }
    friend sparse_poly operator-(sparse_poly a, const sparse_poly &b)
    {
        a -= b;
        return a;
    }
    friend sparse_poly operator-(const sparse_poly &a)
    {
        sparse_poly r;
        for (const auto &[m, c] : a.m_terms) {
            r.m_terms.emplace(m, -c);
        }
        return r;
    }
    friend sparse_poly operator*(const sparse_poly &a, const sparse_poly &b)
    {
        sparse_poly r;
        for (const auto &[ma, ca] : a.m_terms) {
            for (const auto &[mb, cb] : b.m_terms) {
                r.add_term(monomial_mul(ma, mb), rational(ca * cb));
            }
        }
        return r;
    }
    friend sparse_poly operator*(const rational &s, const sparse_poly &a)
    {
        sparse_poly r;
        if (s == 0) {
            return r;
        }
        for (const auto &[m, c] : a.m_terms) {
            r.m_terms.emplace(m, c * s);
        }
        return r;
    }
    friend bool operator==(const sparse_poly &, const sparse_poly &) = default;

private:
    term_map m_terms;
};

template <typename Monomial>
sparse_poly<Monomial> pow(const sparse_poly<Monomial> &p, unsigned n)
{
    sparse_poly<Monomial> r{1};
    for (unsigned i = 0; i < n; ++i) {
        r = r * p;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Polynomials in the phase variables (x, v).

struct xy_monomial {
    int x = 0;
    int v = 0;
    friend auto operator<=>(const xy_monomial &, const xy_monomial &) = default;
};

inline xy_monomial monomial_mul(const xy_monomial &a, const xy_monomial &b)
{
    return {a.x + b.x, a.v + b.v};
}

using poly_xy = sparse_poly<xy_monomial>;

namespace xy
{

inline poly_xy x(int power = 1)
{
    return poly_xy::term({power, 0}, rational{1});
}
inline poly_xy v(int power = 1)
{
    return poly_xy::term({0, power}, rational{1});
}

} // namespace xy

poly_xy d_dx(const poly_xy &);
poly_xy d_dv(const poly_xy &);
double eval(const poly_xy &, double x, double v);
// Total degree; -1 for the zero polynomial.
int degree(const poly_xy &);
int degree_x(const poly_xy &);
int degree_v(const poly_xy &);
// Human-readable form, e.g. "v + x^3" (not the expression grammar).
std::string to_string(const poly_xy &);

// ---------------------------------------------------------------------------
// General multivariate polynomials over indexed variables. Exponent vectors
// carry no trailing zeros so that equal monomials compare equal regardless of
// how many variables were in scope when they were built.

struct exponents {
    std::vector<int> e;

    [[nodiscard]] int operator[](std::size_t i) const noexcept
    {
        return i < e.size() ? e[i] : 0;
    }
    void set(std::size_t i, int power);
    [[nodiscard]] int total() const noexcept;

    friend auto operator<=>(const exponents &, const exponents &) = default;
};

exponents monomial_mul(const exponents &, const exponents &);

using mpoly = sparse_poly<exponents>;

mpoly mvar(std::size_t index, int power = 1);
mpoly partial(const mpoly &, std::size_t index);
int max_degree(const mpoly &, std::size_t index);
// Substitutes variable index by a constant.
mpoly substitute(const mpoly &, std::size_t index, const rational &value);
// Coefficient of var^power, as a polynomial in the remaining variables.
mpoly coefficient_of(const mpoly &, std::size_t index, int power);
double eval(const mpoly &, const std::vector<double> &values);
bool is_constant(const mpoly &);
// Highest variable index with a nonzero exponent, -1 for constants.
int highest_variable(const mpoly &);

// Phase polynomials embed as variables 0 (x) and 1 (v).
mpoly to_mpoly(const poly_xy &);
// Throws std::invalid_argument if variables other than 0 and 1 remain.
poly_xy to_poly_xy(const mpoly &);

// ---------------------------------------------------------------------------
// One-dimensional polynomial vector field f(x) d/dx, stored densely by degree.

class vf1d
{
public:
    vf1d() = default;
    explicit vf1d(std::vector<rational> coeffs);

    // x^n d/dx
    static vf1d monomial(int n, const rational &c = rational{1});

    [[nodiscard]] const std::vector<rational> &coeffs() const noexcept
    {
        return m_coeffs;
    }
    [[nodiscard]] bool is_zero() const noexcept
    {
        return m_coeffs.empty();
    }
    // -1 for the zero field.
    [[nodiscard]] int degree() const noexcept
    {
        return static_cast<int>(m_coeffs.size()) - 1;
    }
    [[nodiscard]] rational coeff(int n) const;

    [[nodiscard]] vf1d derivative() const;
    [[nodiscard]] double eval(double x) const;

    friend vf1d operator+(const vf1d &, const vf1d &);
    friend vf1d operator-(const vf1d &, const vf1d &);
    friend vf1d operator*(const vf1d &, const vf1d &);
    friend vf1d operator*(const rational &, const vf1d &);
    friend bool operator==(const vf1d &, const vf1d &) = default;

private:
    void trim();
    std::vector<rational> m_coeffs;
};

// e.g. "(3 + x^2) d/dx"
std::string to_string(const vf1d &);

} // namespace abelkit

#endif
