#include <abelkit/poly.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace abelkit
{

poly_xy d_dx(const poly_xy &p)
{
    poly_xy r;
    for (const auto &[m, c] : p.terms()) {
        if (m.x > 0) {
            r.add_term({m.x - 1, m.v}, rational(c * m.x));
        }
    }
    return r;
}

poly_xy d_dv(const poly_xy &p)
{
    poly_xy r;
    for (const auto &[m, c] : p.terms()) {
        if (m.v > 0) {
            r.add_term({m.x, m.v - 1}, rational(c * m.v));
        }
    }
    return r;
}

double eval(const poly_xy &p, double x, double v)
{
    double s = 0;
    for (const auto &[m, c] : p.terms()) {
        s += to_double(c) * std::pow(x, m.x) * std::pow(v, m.v);
    }
    return s;
}

int degree(const poly_xy &p)
{
    int d = -1;
    for (const auto &[m, c] : p.terms()) {
        d = std::max(d, m.x + m.v);
    }
    return d;
}

int degree_x(const poly_xy &p)
{
    int d = -1;
    for (const auto &[m, c] : p.terms()) {
        d = std::max(d, m.x);
    }
    return d;
}

int degree_v(const poly_xy &p)
{
    int d = -1;
    for (const auto &[m, c] : p.terms()) {
        d = std::max(d, m.v);
    }
    return d;
}

namespace
{

std::string power_str(const char *var, int n)
{
    if (n == 1) {
        return var;
    }
    return std::string(var) + "^" + std::to_string(n);
}

// Joins "coeff*monomial" terms with signs, highest-ordered terms first.
template <typename Range, typename MonoFmt>
std::string join_terms(const Range &terms, MonoFmt mono)
{
    if (terms.empty()) {
        return "0";
    }
    std::string out;
    bool first = true;
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
        const auto &[m, c] = *it;
        const std::string ms = mono(m);
        rational mag = c < 0 ? rational(-c) : c;
        if (first) {
            out += c < 0 ? "-" : "";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        first = false;
        if (ms.empty()) {
            out += to_string(mag);
        } else if (mag == 1) {
            out += ms;
        } else {
            out += to_string(mag) + "*" + ms;
        }
    }
    return out;
}

} // namespace

std::string to_string(const poly_xy &p)
{
    return join_terms(p.terms(), [](const xy_monomial &m) {
        std::string s;
        if (m.x > 0) {
            s += power_str("x", m.x);
        }
        if (m.v > 0) {
            s += (s.empty() ? "" : "*") + power_str("v", m.v);
        }
        return s;
    });
}

// ---------------------------------------------------------------------------

void exponents::set(std::size_t i, int power)
{
    if (i >= e.size()) {
        if (power == 0) {
            return;
        }
        e.resize(i + 1, 0);
    }
    e[i] = power;
    while (!e.empty() && e.back() == 0) {
        e.pop_back();
    }
}

int exponents::total() const noexcept
{
    int s = 0;
    for (const int k : e) {
        s += k;
    }
    return s;
}

exponents monomial_mul(const exponents &a, const exponents &b)
{
    exponents r;
    r.e.resize(std::max(a.e.size(), b.e.size()), 0);
    for (std::size_t i = 0; i < r.e.size(); ++i) {
        r.e[i] = a[i] + b[i];
    }
    return r;
}

mpoly mvar(std::size_t index, int power)
{
    exponents m;
    m.set(index, power);
    return mpoly::term(m, rational{1});
}

mpoly partial(const mpoly &p, std::size_t index)
{
    mpoly r;
    for (const auto &[m, c] : p.terms()) {
        const int k = m[index];
        if (k > 0) {
            auto m2 = m;
            m2.set(index, k - 1);
            r.add_term(m2, rational(c * k));
        }
    }
    return r;
}

int max_degree(const mpoly &p, std::size_t index)
{
    int d = p.is_zero() ? -1 : 0;
    for (const auto &[m, c] : p.terms()) {
        d = std::max(d, m[index]);
    }
    return d;
}

mpoly substitute(const mpoly &p, std::size_t index, const rational &value)
{
    mpoly r;
    for (const auto &[m, c] : p.terms()) {
        const int k = m[index];
        auto m2 = m;
        m2.set(index, 0);
        rational f{1};
        for (int i = 0; i < k; ++i) {
            f *= value;
        }
        r.add_term(m2, rational(c * f));
    }
    return r;
}

mpoly coefficient_of(const mpoly &p, std::size_t index, int power)
{
    mpoly r;
    for (const auto &[m, c] : p.terms()) {
        if (m[index] == power) {
            auto m2 = m;
            m2.set(index, 0);
            r.add_term(m2, c);
        }
    }
    return r;
}

double eval(const mpoly &p, const std::vector<double> &values)
{
    double s = 0;
    for (const auto &[m, c] : p.terms()) {
        double term = to_double(c);
        for (std::size_t i = 0; i < m.e.size(); ++i) {
            if (m.e[i] != 0) {
                if (i >= values.size()) {
                    throw std::out_of_range("mpoly evaluation: missing variable value");
                }
                term *= std::pow(values[i], m.e[i]);
            }
        }
        s += term;
    }
    return s;
}

bool is_constant(const mpoly &p)
{
    return p.is_zero() || (p.size() == 1u && p.terms().begin()->first.e.empty());
}

int highest_variable(const mpoly &p)
{
    int h = -1;
    for (const auto &[m, c] : p.terms()) {
        h = std::max(h, static_cast<int>(m.e.size()) - 1);
    }
    return h;
}

mpoly to_mpoly(const poly_xy &p)
{
    mpoly r;
    for (const auto &[m, c] : p.terms()) {
        exponents e;
        e.set(0, m.x);
        e.set(1, m.v);
        r.add_term(e, c);
    }
    return r;
}

poly_xy to_poly_xy(const mpoly &p)
{
    poly_xy r;
    for (const auto &[m, c] : p.terms()) {
        if (m.e.size() > 2u) {
            throw std::invalid_argument("polynomial depends on variables other than x and v");
        }
        r.add_term({m[0], m[1]}, c);
    }
    return r;
}

// ---------------------------------------------------------------------------

vf1d::vf1d(std::vector<rational> coeffs) : m_coeffs(std::move(coeffs))
{
    trim();
}

vf1d vf1d::monomial(int n, const rational &c)
{
    std::vector<rational> v(static_cast<std::size_t>(n) + 1u);
    v.back() = c;
    return vf1d(std::move(v));
}

void vf1d::trim()
{
    while (!m_coeffs.empty() && m_coeffs.back() == 0) {
        m_coeffs.pop_back();
    }
}

rational vf1d::coeff(int n) const
{
    if (n < 0 || n > degree()) {
        return rational{0};
    }
    return m_coeffs[static_cast<std::size_t>(n)];
}

vf1d vf1d::derivative() const
{
    if (m_coeffs.size() <= 1u) {
        return {};
    }
    std::vector<rational> d(m_coeffs.size() - 1u);
    for (std::size_t i = 1; i < m_coeffs.size(); ++i) {
        d[i - 1] = m_coeffs[i] * static_cast<long>(i);
    }
    return vf1d(std::move(d));
}

double vf1d::eval(double x) const
{
    double s = 0;
    for (auto it = m_coeffs.rbegin(); it != m_coeffs.rend(); ++it) {
        s = s * x + to_double(*it);
    }
    return s;
}

vf1d operator+(const vf1d &a, const vf1d &b)
{
    std::vector<rational> r(std::max(a.m_coeffs.size(), b.m_coeffs.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
    }
    return vf1d(std::move(r));
}

vf1d operator-(const vf1d &a, const vf1d &b)
{
    return a + rational{-1} * b;
}

vf1d operator*(const vf1d &a, const vf1d &b)
{
    if (a.is_zero() || b.is_zero()) {
        return {};
    }
    std::vector<rational> r(a.m_coeffs.size() + b.m_coeffs.size() - 1u);
    for (std::size_t i = 0; i < a.m_coeffs.size(); ++i) {
        for (std::size_t j = 0; j < b.m_coeffs.size(); ++j) {
            r[i + j] += a.m_coeffs[i] * b.m_coeffs[j];
        }
    }
    return vf1d(std::move(r));
}

vf1d operator*(const rational &s, const vf1d &a)
{
    std::vector<rational> r(a.m_coeffs);
    for (auto &c : r) {
        c *= s;
    }
    return vf1d(std::move(r));
}

std::string to_string(const vf1d &f)
{
    std::map<int, rational> terms;
    for (int i = 0; i <= f.degree(); ++i) {
        if (f.coeff(i) != 0) {
            terms.emplace(i, f.coeff(i));
        }
    }
    const auto body = join_terms(terms, [](int n) { return n == 0 ? std::string{} : power_str("x", n); });
    return "(" + body + ") d/dx";
}

} // namespace abelkit
