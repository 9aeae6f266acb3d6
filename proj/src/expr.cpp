#include <abelkit/expr.hpp>

#include <algorithm>
#include <cassert>
#include <cctype>
#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

#include <abelkit/errors.hpp>

namespace abelkit
{

struct expression::node {
    node_kind kind{};
    rational value;     // constant
    rational power;     // power exponent
    variable var{};     // variable
    func_kind func{};   // function
    std::vector<expression> children;
};

const char *name(variable v) noexcept
{
    switch (v) {
        case variable::t:
            return "t";
        case variable::x:
            return "x";
        case variable::v:
            return "v";
    }
    return "?";
}

const char *name(func_kind f) noexcept
{
    switch (f) {
        case func_kind::sin:
            return "sin";
        case func_kind::cos:
            return "cos";
        case func_kind::tan:
            return "tan";
        case func_kind::exp:
            return "exp";
        case func_kind::ln:
            return "ln";
        case func_kind::sqrt:
            return "sqrt";
    }
    return "?";
}

namespace
{

std::shared_ptr<expression::node> make_node(node_kind k)
{
    auto n = std::make_shared<expression::node>();
    n->kind = k;
    return n;
}

} // namespace

expression::expression(std::shared_ptr<const node> n) : m_node(std::move(n)) {}

expression::expression() : expression(rational{0}) {}

expression::expression(int n) : expression(rational{n}) {}

expression::expression(const rational &q)
{
    auto n = make_node(node_kind::constant);
    n->value = q;
    m_node = std::move(n);
}

expression expression::var(variable v)
{
    auto n = make_node(node_kind::variable);
    n->var = v;
    return expression(std::shared_ptr<const node>(std::move(n)));
}

node_kind expression::kind() const noexcept
{
    return m_node->kind;
}

const rational &expression::value() const
{
    assert(kind() == node_kind::constant);
    return m_node->value;
}

variable expression::var_id() const
{
    assert(kind() == node_kind::variable);
    return m_node->var;
}

func_kind expression::func() const
{
    assert(kind() == node_kind::function);
    return m_node->func;
}

const rational &expression::exponent() const
{
    assert(kind() == node_kind::power);
    return m_node->power;
}

const expression &expression::lhs() const
{
    assert(m_node->children.size() == 2u);
    return m_node->children[0];
}

const expression &expression::rhs() const
{
    assert(m_node->children.size() == 2u);
    return m_node->children[1];
}

const expression &expression::arg() const
{
    assert(m_node->children.size() == 1u);
    return m_node->children[0];
}

bool expression::is_zero() const noexcept
{
    return is_constant() && m_node->value == 0;
}

bool expression::is_one() const noexcept
{
    return is_constant() && m_node->value == 1;
}

namespace
{

// Integer power of a rational, exact.
rational rational_ipow(const rational &base, long e)
{
    rational r{1};
    rational b = e < 0 ? rational(1 / base) : base;
    auto n = static_cast<unsigned long>(e < 0 ? -e : e);
    while (n != 0u) {
        if ((n & 1u) != 0u) {
            r *= b;
        }
        b *= b;
        n >>= 1u;
    }
    return r;
}

} // namespace

expression operator+(const expression &a, const expression &b)
{
    if (a.is_constant() && b.is_constant()) {
        return expression(rational(a.value() + b.value()));
    }
    if (a.is_zero()) {
        return b;
    }
    if (b.is_zero()) {
        return a;
    }
    auto n = make_node(node_kind::sum);
    n->children = {a, b};
    return expression(std::shared_ptr<const expression::node>(std::move(n)));
}

expression operator-(const expression &a)
{
    if (a.is_constant()) {
        return expression(rational(-a.value()));
    }
    if (a.kind() == node_kind::negation) {
        return a.arg();
    }
    auto n = make_node(node_kind::negation);
    n->children = {a};
    return expression(std::shared_ptr<const expression::node>(std::move(n)));
}

expression operator-(const expression &a, const expression &b)
{
    return a + (-b);
}

expression operator*(const expression &a, const expression &b)
{
    if (a.is_constant() && b.is_constant()) {
        return expression(rational(a.value() * b.value()));
    }
    if (a.is_zero() || b.is_zero()) {
        return expression{};
    }
    if (a.is_one()) {
        return b;
    }
    if (b.is_one()) {
        return a;
    }
    if (a.is_constant() && a.value() == -1) {
        return -b;
    }
    if (b.is_constant() && b.value() == -1) {
        return -a;
    }
    auto n = make_node(node_kind::product);
    n->children = {a, b};
    return expression(std::shared_ptr<const expression::node>(std::move(n)));
}

expression operator/(const expression &a, const expression &b)
{
    if (b.is_zero()) {
        throw domain_error("quotient with a zero denominator");
    }
    if (a.is_constant() && b.is_constant()) {
        return expression(rational(a.value() / b.value()));
    }
    if (a.is_zero()) {
        return expression{};
    }
    if (b.is_one()) {
        return a;
    }
    auto n = make_node(node_kind::quotient);
    n->children = {a, b};
    return expression(std::shared_ptr<const expression::node>(std::move(n)));
}

expression pow(const expression &base, const rational &e)
{
    if (e == 0) {
        return expression{1};
    }
    if (e == 1) {
        return base;
    }
    if (base.is_constant()) {
        if (is_integer(e)) {
            if (base.value() == 0 && e < 0) {
                throw domain_error("zero raised to a negative power");
            }
            return expression(rational_ipow(base.value(), numerator(e).convert_to<long>()));
        }
        if (base.value() == 0 && e > 0) {
            return expression{};
        }
        if (base.value() == 1) {
            return expression{1};
        }
    }
    if (base.kind() == node_kind::power) {
        // Integer outer exponents fold; the result agrees wherever the
        // original is defined ((b^(1/2))^2 -> b only widens the domain).
        if (is_integer(e)) {
            return pow(base.arg(), rational(base.exponent() * e));
        }
    }
    auto n = make_node(node_kind::power);
    n->power = e;
    n->children = {base};
    return expression(std::shared_ptr<const expression::node>(std::move(n)));
}

expression apply(func_kind f, const expression &arg)
{
    if (arg.is_zero()) {
        switch (f) {
            case func_kind::sin:
            case func_kind::tan:
            case func_kind::sqrt:
                return expression{};
            case func_kind::cos:
            case func_kind::exp:
                return expression{1};
            case func_kind::ln:
                break;
        }
    }
    if (f == func_kind::ln && arg.is_one()) {
        return expression{};
    }
    auto n = make_node(node_kind::function);
    n->func = f;
    n->children = {arg};
    return expression(std::shared_ptr<const expression::node>(std::move(n)));
}

expression sin(const expression &e)
{
    return apply(func_kind::sin, e);
}
expression cos(const expression &e)
{
    return apply(func_kind::cos, e);
}
expression tan(const expression &e)
{
    return apply(func_kind::tan, e);
}
expression exp(const expression &e)
{
    return apply(func_kind::exp, e);
}
expression ln(const expression &e)
{
    return apply(func_kind::ln, e);
}
expression sqrt(const expression &e)
{
    return apply(func_kind::sqrt, e);
}

// ---------------------------------------------------------------------------
// Evaluation

double real_pow(double base, const rational &e)
{
    if (is_integer(e)) {
        const auto n = numerator(e).convert_to<long>();
        if (base == 0 && n < 0) {
            throw domain_error("zero raised to a negative power");
        }
        return std::pow(base, static_cast<double>(n));
    }
    if (base == 0) {
        if (e < 0) {
            throw domain_error("zero raised to a negative power");
        }
        return 0;
    }
    if (base > 0) {
        return std::pow(base, to_double(e));
    }
    const auto q = denominator(e);
    if (q % 2 == 0) {
        throw domain_error("even root of a negative number");
    }
    const auto p = numerator(e);
    const double mag = std::pow(-base, to_double(e));
    return (p % 2 == 0) ? mag : -mag;
}

namespace
{

double eval_impl(const expression &e, const point &pt, double guard)
{
    switch (e.kind()) {
        case node_kind::constant:
            return to_double(e.value());
        case node_kind::variable:
            switch (e.var_id()) {
                case variable::t:
                    return pt.t;
                case variable::x:
                    return pt.x;
                case variable::v:
                    return pt.v;
            }
            break;
        case node_kind::sum:
            return eval_impl(e.lhs(), pt, guard) + eval_impl(e.rhs(), pt, guard);
        case node_kind::product:
            return eval_impl(e.lhs(), pt, guard) * eval_impl(e.rhs(), pt, guard);
        case node_kind::quotient: {
            const double den = eval_impl(e.rhs(), pt, guard);
            if (den == 0 || std::abs(den) < guard) {
                throw domain_error("division by zero");
            }
            return eval_impl(e.lhs(), pt, guard) / den;
        }
        case node_kind::negation:
            return -eval_impl(e.arg(), pt, guard);
        case node_kind::power: {
            const double b = eval_impl(e.arg(), pt, guard);
            if (e.exponent() < 0 && std::abs(b) < guard) {
                throw domain_error("negative power of a near-zero base");
            }
            return real_pow(b, e.exponent());
        }
        case node_kind::function: {
            const double a = eval_impl(e.arg(), pt, guard);
            switch (e.func()) {
                case func_kind::sin:
                    return std::sin(a);
                case func_kind::cos:
                    return std::cos(a);
                case func_kind::tan:
                    return std::tan(a);
                case func_kind::exp:
                    return std::exp(a);
                case func_kind::ln:
                    if (a <= 0) {
                        throw domain_error("ln of a non-positive number");
                    }
                    return std::log(a);
                case func_kind::sqrt:
                    if (a < 0) {
                        throw domain_error("sqrt of a negative number");
                    }
                    return std::sqrt(a);
            }
            break;
        }
    }
    throw std::logic_error("corrupt expression node");
}

} // namespace

double eval(const expression &e, const point &pt, double guard)
{
    const double r = eval_impl(e, pt, guard);
    if (!std::isfinite(r)) {
        throw domain_error("non-finite value");
    }
    return r;
}

// ---------------------------------------------------------------------------
// Differentiation

expression differentiate(const expression &e, variable wrt)
{
    switch (e.kind()) {
        case node_kind::constant:
            return expression{};
        case node_kind::variable:
            return expression{e.var_id() == wrt ? 1 : 0};
        case node_kind::sum:
            return differentiate(e.lhs(), wrt) + differentiate(e.rhs(), wrt);
        case node_kind::product:
            return differentiate(e.lhs(), wrt) * e.rhs() + e.lhs() * differentiate(e.rhs(), wrt);
        case node_kind::quotient: {
            const auto &u = e.lhs();
            const auto &w = e.rhs();
            return (differentiate(u, wrt) * w - u * differentiate(w, wrt)) / pow(w, rational{2});
        }
        case node_kind::negation:
            return -differentiate(e.arg(), wrt);
        case node_kind::power: {
            const auto &r = e.exponent();
            return expression(r) * pow(e.arg(), rational(r - 1)) * differentiate(e.arg(), wrt);
        }
        case node_kind::function: {
            const auto &u = e.arg();
            const auto du = differentiate(u, wrt);
            if (du.is_zero()) {
                return expression{};
            }
            switch (e.func()) {
                case func_kind::sin:
                    return cos(u) * du;
                case func_kind::cos:
                    return -(sin(u) * du);
                case func_kind::tan:
                    return du / pow(cos(u), rational{2});
                case func_kind::exp:
                    return e * du;
                case func_kind::ln:
                    return du / u;
                case func_kind::sqrt:
                    return du / (expression{2} * e);
            }
            break;
        }
    }
    throw std::logic_error("corrupt expression node");
}

expression substitute(const expression &e, variable var, const expression &with)
{
    switch (e.kind()) {
        case node_kind::constant:
            return e;
        case node_kind::variable:
            return e.var_id() == var ? with : e;
        case node_kind::sum:
            return substitute(e.lhs(), var, with) + substitute(e.rhs(), var, with);
        case node_kind::product:
            return substitute(e.lhs(), var, with) * substitute(e.rhs(), var, with);
        case node_kind::quotient:
            return substitute(e.lhs(), var, with) / substitute(e.rhs(), var, with);
        case node_kind::negation:
            return -substitute(e.arg(), var, with);
        case node_kind::power:
            return pow(substitute(e.arg(), var, with), e.exponent());
        case node_kind::function:
            return apply(e.func(), substitute(e.arg(), var, with));
    }
    throw std::logic_error("corrupt expression node");
}

bool depends_on(const expression &e, variable var)
{
    switch (e.kind()) {
        case node_kind::constant:
            return false;
        case node_kind::variable:
            return e.var_id() == var;
        case node_kind::sum:
        case node_kind::product:
        case node_kind::quotient:
            return depends_on(e.lhs(), var) || depends_on(e.rhs(), var);
        case node_kind::negation:
        case node_kind::power:
        case node_kind::function:
            return depends_on(e.arg(), var);
    }
    return false;
}

// ---------------------------------------------------------------------------
// Printing

namespace
{

// Binding strength of the printed form.
int precedence(const expression &e)
{
    switch (e.kind()) {
        case node_kind::sum:
            return 1;
        case node_kind::product:
        case node_kind::quotient:
            return 2;
        case node_kind::negation:
            return 3;
        case node_kind::power:
            return 4;
        case node_kind::constant:
            return (e.value() >= 0 && is_integer(e.value())) ? 5 : 0;
        case node_kind::variable:
        case node_kind::function:
            return 5;
    }
    return 0;
}

std::string print(const expression &e, bool top);

std::string wrap_if(const expression &e, bool cond)
{
    auto s = print(e, false);
    return cond ? "(" + s + ")" : s;
}

std::string print(const expression &e, bool top)
{
    switch (e.kind()) {
        case node_kind::constant: {
            auto s = to_string(e.value());
            return (top || precedence(e) == 5) ? s : "(" + s + ")";
        }
        case node_kind::variable:
            return name(e.var_id());
        case node_kind::sum: {
            const auto &r = e.rhs();
            if (r.kind() == node_kind::negation) {
                return wrap_if(e.lhs(), precedence(e.lhs()) < 1) + " - " + wrap_if(r.arg(), precedence(r.arg()) <= 1);
            }
            if (r.is_constant() && r.value() < 0) {
                return wrap_if(e.lhs(), precedence(e.lhs()) < 1) + " - " + to_string(rational(-r.value()));
            }
            return wrap_if(e.lhs(), precedence(e.lhs()) < 1) + " + " + wrap_if(r, precedence(r) <= 1);
        }
        case node_kind::product:
            return wrap_if(e.lhs(), precedence(e.lhs()) < 2) + "*" + wrap_if(e.rhs(), precedence(e.rhs()) <= 2);
        case node_kind::quotient:
            // The left operand is always atomic so that a trailing integer
            // exponent cannot absorb the slash ("t^2/3" reads as t^(2/3)).
            return wrap_if(e.lhs(), precedence(e.lhs()) < 5) + "/" + wrap_if(e.rhs(), precedence(e.rhs()) < 4);
        case node_kind::negation:
            return "-" + wrap_if(e.arg(), precedence(e.arg()) < 5);
        case node_kind::power:
            return wrap_if(e.arg(), precedence(e.arg()) < 5) + "^" + to_string(e.exponent());
        case node_kind::function:
            return std::string(name(e.func())) + "(" + print(e.arg(), true) + ")";
    }
    throw std::logic_error("corrupt expression node");
}

} // namespace

std::string to_string(const expression &e)
{
    return print(e, true);
}

// ---------------------------------------------------------------------------
// Parsing

namespace
{

class parser
{
public:
    parser(std::string_view text, std::initializer_list<variable> vars) : m_text(text), m_vars(vars) {}

    expression run()
    {
        auto e = parse_expr();
        skip_ws();
        if (m_pos != m_text.size()) {
            fail("unexpected '" + std::string(1, m_text[m_pos]) + "'");
        }
        return e;
    }

private:
    [[noreturn]] void fail(const std::string &msg) const
    {
        throw parse_error("syntax error: " + msg, m_pos);
    }

    void skip_ws()
    {
        while (m_pos < m_text.size() && std::isspace(static_cast<unsigned char>(m_text[m_pos])) != 0) {
            ++m_pos;
        }
    }

    bool accept(char c)
    {
        skip_ws();
        if (m_pos < m_text.size() && m_text[m_pos] == c) {
            ++m_pos;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) {
            fail(std::string("expected '") + c + "'");
        }
    }

    std::string_view digits()
    {
        skip_ws();
        const auto start = m_pos;
        while (m_pos < m_text.size() && std::isdigit(static_cast<unsigned char>(m_text[m_pos])) != 0) {
            ++m_pos;
        }
        if (start == m_pos) {
            fail("expected digits");
        }
        return m_text.substr(start, m_pos - start);
    }

    expression parse_expr()
    {
        auto e = parse_term();
        while (true) {
            if (accept('+')) {
                e = e + parse_term();
            } else if (accept('-')) {
                e = e - parse_term();
            } else {
                return e;
            }
        }
    }

    expression parse_term()
    {
        auto e = parse_factor();
        while (true) {
            if (accept('*')) {
                e = e * parse_factor();
            } else if (accept('/')) {
                const auto at = m_pos;
                auto d = parse_factor();
                if (d.is_zero()) {
                    throw parse_error("syntax error: division by literal zero", at);
                }
                e = e / d;
            } else {
                return e;
            }
        }
    }

    // signed_rational, optionally parenthesized.
    rational parse_exponent()
    {
        const bool paren = accept('(');
        const bool neg = accept('-');
        std::string s(digits());
        skip_ws();
        if (m_pos < m_text.size() && m_text[m_pos] == '/') {
            ++m_pos;
            const auto at = m_pos;
            const auto den = digits();
            if (den.find_first_not_of('0') == std::string_view::npos) {
                throw parse_error("syntax error: zero exponent denominator", at);
            }
            s += "/";
            s += den;
        }
        if (paren) {
            expect(')');
        }
        auto q = parse_rational(s);
        return neg ? rational(-q) : q;
    }

    expression parse_factor()
    {
        auto b = parse_base();
        if (accept('^')) {
            b = pow(b, parse_exponent());
        }
        return b;
    }

    expression parse_base()
    {
        skip_ws();
        if (m_pos >= m_text.size()) {
            fail("unexpected end of input");
        }
        const char c = m_text[m_pos];
        if (c == '-') {
            ++m_pos;
            return -parse_base();
        }
        if (c == '(') {
            ++m_pos;
            auto e = parse_expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
            std::string s(digits());
            if (m_pos < m_text.size() && m_text[m_pos] == '.') {
                ++m_pos;
                s += ".";
                s += digits();
            }
            return expression(parse_rational(s));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) != 0) {
            const auto start = m_pos;
            while (m_pos < m_text.size() && std::isalnum(static_cast<unsigned char>(m_text[m_pos])) != 0) {
                ++m_pos;
            }
            const auto ident = m_text.substr(start, m_pos - start);
            for (const auto v : m_vars) {
                if (ident == name(v)) {
                    return expression::var(v);
                }
            }
            for (const auto f : {func_kind::sin, func_kind::cos, func_kind::tan, func_kind::exp, func_kind::ln,
                                 func_kind::sqrt}) {
                if (ident == name(f)) {
                    expect('(');
                    auto a = parse_expr();
                    expect(')');
                    return apply(f, a);
                }
            }
            skip_ws();
            if (m_pos < m_text.size() && m_text[m_pos] == '(') {
                throw parse_error("unknown function '" + std::string(ident) + "'", start);
            }
            throw parse_error("unknown identifier '" + std::string(ident) + "'", start);
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view m_text;
    std::vector<variable> m_vars;
    std::size_t m_pos = 0;
};

} // namespace

expression parse_expression(std::string_view text, std::initializer_list<variable> vars)
{
    return parser(text, vars).run();
}

// ---------------------------------------------------------------------------
// Numeric identity testing

std::vector<double> sample_points(const sample_options &opts, std::size_t count)
{
    std::mt19937_64 rng(opts.seed);
    std::vector<double> out;
    out.reserve(count);
    if (opts.domain) {
        std::uniform_real_distribution<double> dist(opts.domain->lo, opts.domain->hi);
        for (std::size_t i = 0; i < count; ++i) {
            out.push_back(dist(rng));
        }
    } else {
        std::uniform_real_distribution<double> mag(0.1, 3.0);
        std::bernoulli_distribution sign(0.5);
        for (std::size_t i = 0; i < count; ++i) {
            const double m = mag(rng);
            out.push_back(sign(rng) ? m : -m);
        }
    }
    return out;
}

namespace
{

constexpr int retry_factor = 8;

} // namespace

bool expr_equal_numeric(const expression &a, const expression &b, const sample_options &opts)
{
    if (opts.samples < 8) {
        throw std::invalid_argument("expr_equal_numeric needs at least 8 samples");
    }
    const auto pts = sample_points(opts, static_cast<std::size_t>(opts.samples) * retry_factor);
    int used = 0;
    for (const double t : pts) {
        if (used == opts.samples) {
            break;
        }
        double va = 0;
        double vb = 0;
        try {
            va = eval_scalar(a, t);
            vb = eval_scalar(b, t);
        } catch (const domain_error &) {
            continue;
        }
        ++used;
        if (std::abs(va - vb) > opts.tol * (1 + std::max(std::abs(va), std::abs(vb)))) {
            return false;
        }
    }
    if (used == 0) {
        throw indeterminate_error("no admissible sample point for numeric comparison");
    }
    return true;
}

bool expr_equal_numeric(const expression &a, const expression &b, int samples, double tol)
{
    sample_options opts;
    opts.samples = samples;
    opts.tol = tol;
    return expr_equal_numeric(a, b, opts);
}

std::optional<double> constant_value_numeric(const expression &e, const sample_options &opts)
{
    const auto pts = sample_points(opts, static_cast<std::size_t>(opts.samples) * retry_factor);
    std::optional<double> ref;
    int used = 0;
    for (const double t : pts) {
        if (used == opts.samples) {
            break;
        }
        double val = 0;
        try {
            val = eval_scalar(e, t);
        } catch (const domain_error &) {
            continue;
        }
        ++used;
        if (!ref) {
            ref = val;
        } else if (std::abs(val - *ref) > opts.tol * (1 + std::max(std::abs(val), std::abs(*ref)))) {
            return std::nullopt;
        }
    }
    if (used == 0) {
        throw indeterminate_error("no admissible sample point for constancy test");
    }
    return ref;
}

} // namespace abelkit
