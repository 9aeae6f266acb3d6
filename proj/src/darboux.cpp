#include <abelkit/darboux.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include <abelkit/linalg.hpp>

namespace abelkit
{

bool is_darboux_pair(const planar_vf &X, const poly_xy &D, const poly_xy &f)
{
    return (apply_vf(X, D) - f * D).is_zero();
}

namespace
{

// Leading term in lex order with v above x.
std::pair<xy_monomial, rational> leading(const poly_xy &p)
{
    auto best = p.terms().begin();
    for (auto it = p.terms().begin(); it != p.terms().end(); ++it) {
        const auto &m = it->first;
        const auto &b = best->first;
        if (m.v > b.v || (m.v == b.v && m.x > b.x)) {
            best = it;
        }
    }
    return *best;
}

} // namespace

std::optional<poly_xy> divide_exact(const poly_xy &num, const poly_xy &den)
{
    if (den.is_zero()) {
        throw domain_error("division by the zero polynomial");
    }
    const auto [dm, dc] = leading(den);
    poly_xy q;
    poly_xy r = num;
    while (!r.is_zero()) {
        const auto [rm, rc] = leading(r);
        if (rm.x < dm.x || rm.v < dm.v) {
            return std::nullopt;
        }
        const auto t = poly_xy::term({rm.x - dm.x, rm.v - dm.v}, rational(rc / dc));
        q += t;
        r -= t * den;
    }
    return q;
}

namespace
{

// Polynomial in x with coefficients in the unknowns beta_k (mpoly variable k).
using xpoly = std::vector<mpoly>;

xpoly xmul(const xpoly &a, const xpoly &b)
{
    if (a.empty() || b.empty()) {
        return {};
    }
    xpoly r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            r[i + j] += a[i] * b[j];
        }
    }
    return r;
}

void xadd(xpoly &a, const xpoly &b)
{
    if (a.size() < b.size()) {
        a.resize(b.size());
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
        a[i] += b[i];
    }
}

xpoly xderiv(const xpoly &a)
{
    xpoly r;
    for (std::size_t i = 1; i < a.size(); ++i) {
        r.push_back(rational(static_cast<long>(i)) * a[i]);
    }
    return r;
}

// p(x, v) with v replaced by s(x).
xpoly compose_v(const poly_xy &p, const xpoly &s)
{
    std::map<int, xpoly> powers{{0, xpoly{mpoly(1)}}};
    xpoly out;
    for (const auto &[m, c] : p.terms()) {
        while (powers.rbegin()->first < m.v) {
            const auto [k, last] = *powers.rbegin();
            powers.emplace(k + 1, xmul(last, s));
        }
        xpoly mono(static_cast<std::size_t>(m.x) + 1);
        mono.back() = mpoly(c);
        xadd(out, xmul(mono, powers.at(m.v)));
    }
    return out;
}

integer to_int(const rational &q)
{
    return numerator(q);
}

std::vector<long long> divisors(const integer &n)
{
    integer a = n < 0 ? integer(-n) : n;
    if (a > integer(1'000'000'000'000LL)) {
        throw precondition_error("coefficients too large for the rational root search");
    }
    const auto v = a.convert_to<long long>();
    std::vector<long long> out;
    for (long long d = 1; d * d <= v; ++d) {
        if (v % d == 0) {
            out.push_back(d);
            if (d != v / d) {
                out.push_back(v / d);
            }
        }
    }
    return out;
}

rational horner(const std::vector<rational> &c, const rational &x)
{
    rational s{0};
    for (std::size_t i = c.size(); i-- > 0;) {
        s = s * x + c[i];
    }
    return s;
}

// Rational roots of sum c_i y^i, low to high, not identically zero.
std::vector<rational> rational_roots(std::vector<rational> c)
{
    while (!c.empty() && c.back() == 0) {
        c.pop_back();
    }
    std::vector<rational> roots;
    if (c.size() <= 1) {
        return roots;
    }
    if (c.front() == 0) {
        roots.emplace_back(0);
        while (c.front() == 0) {
            c.erase(c.begin());
        }
        if (c.size() <= 1) {
            return roots;
        }
    }
    integer l{1};
    for (const auto &ci : c) {
        l = boost::multiprecision::lcm(l, denominator(ci));
    }
    std::vector<integer> a;
    for (const auto &ci : c) {
        a.push_back(to_int(ci * l));
    }
    for (const long long p : divisors(a.front())) {
        for (const long long q : divisors(a.back())) {
            for (const long long s : {1LL, -1LL}) {
                const rational cand(s * p, q);
                if (horner(c, cand) == 0 && std::find(roots.begin(), roots.end(), cand) == roots.end()) {
                    roots.push_back(cand);
                }
            }
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

// Unknowns present in p.
std::vector<std::size_t> unknowns(const mpoly &p)
{
    std::vector<std::size_t> out;
    for (const auto &[m, c] : p.terms()) {
        for (std::size_t i = 0; i < m.e.size(); ++i) {
            if (m.e[i] != 0 && std::find(out.begin(), out.end(), i) == out.end()) {
                out.push_back(i);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Solves the equations by substitution: an equation in a single unknown is
// solved for its rational roots and each root is a branch; when none is left,
// the lowest unknown still present is fixed at zero.
void back_substitute(std::vector<mpoly> eqs, std::vector<std::optional<rational>> assigned,
                     std::vector<std::vector<rational>> &out)
{
    for (std::size_t k = 0; k < assigned.size(); ++k) {
        if (assigned[k]) {
            for (auto &e : eqs) {
                e = substitute(e, k, *assigned[k]);
            }
        }
    }
    std::erase_if(eqs, [](const mpoly &e) { return e.is_zero(); });
    for (const auto &e : eqs) {
        if (is_constant(e)) {
            return;
        }
    }
    if (eqs.empty()) {
        std::vector<rational> sol;
        for (const auto &a : assigned) {
            sol.push_back(a.value_or(rational{0}));
        }
        out.push_back(std::move(sol));
        return;
    }
    for (const auto &e : eqs) {
        const auto vars = unknowns(e);
        if (vars.size() == 1u) {
            const auto k = vars.front();
            std::vector<rational> c(static_cast<std::size_t>(max_degree(e, k)) + 1);
            for (const auto &[m, coef] : e.terms()) {
                c[static_cast<std::size_t>(m[k])] += coef;
            }
            for (const auto &r : rational_roots(c)) {
                auto next = assigned;
                next[k] = r;
                back_substitute(eqs, next, out);
            }
            return;
        }
    }
    auto next = assigned;
    next[unknowns(eqs.front()).front()] = rational{0};
    back_substitute(eqs, next, out);
}

} // namespace

std::vector<darboux_pair> find_darboux_vlinear(const planar_vf &X, int max_bdeg)
{
    if (max_bdeg < 1) {
        throw precondition_error("max_bdeg must be at least 1");
    }
    const auto n = static_cast<std::size_t>(max_bdeg) + 1;
    xpoly b(n);
    for (std::size_t k = 0; k < n; ++k) {
        b[k] = mvar(k);
    }
    xpoly minus_b;
    for (const auto &bk : b) {
        minus_b.push_back(-bk);
    }
    // Remainder of X(v + b) on division by v + b: (P b' + Q) at v = -b.
    auto rem = xmul(compose_v(X.P, minus_b), xderiv(b));
    xadd(rem, compose_v(X.Q, minus_b));

    std::vector<mpoly> eqs;
    for (std::size_t m = rem.size(); m-- > 0;) {
        if (!rem[m].is_zero()) {
            eqs.push_back(rem[m]);
        }
    }
    std::vector<std::vector<rational>> sols;
    back_substitute(eqs, std::vector<std::optional<rational>>(n), sols);

    std::vector<std::pair<std::vector<rational>, darboux_pair>> found;
    for (const auto &beta : sols) {
        poly_xy D = xy::v();
        for (std::size_t k = 0; k < n; ++k) {
            D += poly_xy::term({static_cast<int>(k), 0}, beta[k]);
        }
        const auto f = divide_exact(apply_vf(X, D), D);
        if (!f || !is_darboux_pair(X, D, *f)) {
            continue;
        }
        if (std::none_of(found.begin(), found.end(), [&](const auto &p) { return p.second.D == D; })) {
            found.push_back({beta, {D, *f}});
        }
    }
    const auto deg = [](const std::vector<rational> &beta) {
        int d = -1;
        for (std::size_t k = 0; k < beta.size(); ++k) {
            if (beta[k] != 0) {
                d = static_cast<int>(k);
            }
        }
        return d;
    };
    std::sort(found.begin(), found.end(), [&](const auto &l, const auto &r) {
        const int dl = deg(l.first), dr = deg(r.first);
        if (dl != dr) {
            return dl < dr;
        }
        return std::lexicographical_compare(r.first.rbegin(), r.first.rend(), l.first.rbegin(), l.first.rend());
    });
    std::vector<darboux_pair> out;
    for (auto &p : found) {
        out.push_back(std::move(p.second));
    }
    return out;
}

jm_solution jm_exponents(const std::vector<darboux_pair> &pairs, const planar_vf &X)
{
    const auto div = divergence(X);
    std::vector<xy_monomial> rows;
    const auto collect = [&rows](const poly_xy &p) {
        for (const auto &[m, c] : p.terms()) {
            if (std::find(rows.begin(), rows.end(), m) == rows.end()) {
                rows.push_back(m);
            }
        }
    };
    collect(div);
    for (const auto &p : pairs) {
        collect(p.cofactor);
    }
    std::vector<rational> rhs;
    for (const auto &m : rows) {
        rhs.push_back(-div.coeff(m));
    }
    const auto system = [&](const std::vector<std::size_t> &cols) {
        rat_matrix a(std::max<std::size_t>(rows.size(), 1), cols.size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            for (std::size_t j = 0; j < cols.size(); ++j) {
                a(r, j) = pairs[cols[j]].cofactor.coeff(rows[r]);
            }
        }
        return a;
    };
    auto b = rhs;
    if (b.empty()) {
        b.emplace_back(0);
    }

    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (const auto s = solve(system({i}), b)) {
            jm_solution out{std::vector<rational>(pairs.size()), {}};
            out.nu[i] = (*s)[0];
            return out;
        }
    }
    std::vector<std::size_t> all(pairs.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
        all[i] = i;
    }
    jm_solution out;
    if (!pairs.empty()) {
        if (const auto s = solve(system(all), b, &out.free)) {
            out.nu = *s;
            return out;
        }
    } else if (div.is_zero()) {
        return out;
    }
    throw no_multiplier_error("no Jacobi multiplier of the form prod D_i^nu_i for these pairs");
}

multiplier_product build_multiplier(const std::vector<darboux_pair> &pairs, const std::vector<rational> &nu)
{
    if (pairs.size() != nu.size()) {
        throw precondition_error("one exponent per Darboux pair");
    }
    multiplier_product r;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto it = std::find_if(r.factors.begin(), r.factors.end(),
                               [&](const auto &f) { return f.first == pairs[i].D; });
        if (it == r.factors.end()) {
            r.factors.emplace_back(pairs[i].D, nu[i]);
        } else {
            it->second += nu[i];
        }
    }
    std::erase_if(r.factors, [](const auto &f) { return f.second == 0; });
    return r;
}

double eval(const multiplier_product &R, double x, double v)
{
    double r = 1;
    for (const auto &[base, e] : R.factors) {
        r *= real_pow(eval(base, x, v), e);
    }
    return r;
}

phase_function to_phase_function(const multiplier_product &R)
{
    phase_function r{1};
    for (const auto &[base, e] : R.factors) {
        r = r * pow(to_expression(base), e);
    }
    return r;
}

double jm_residual(const multiplier_product &R, const planar_vf &X, const std::vector<std::array<double, 2>> &points)
{
    auto s = divergence(X);
    for (const auto &[base, e] : R.factors) {
        const auto f = divide_exact(apply_vf(X, base), base);
        if (!f) {
            throw precondition_error("multiplier base is not a Darboux polynomial of the field");
        }
        s += e * *f;
    }
    double worst = 0;
    for (const auto &[x, v] : points) {
        bool guarded = false;
        for (const auto &[base, e] : R.factors) {
            guarded = guarded || std::abs(eval(base, x, v)) < 1e-6;
        }
        if (guarded) {
            continue;
        }
        try {
            worst = std::max(worst, std::abs(eval(R, x, v) * eval(s, x, v)));
        } catch (const domain_error &) {
        }
    }
    return worst;
}

std::vector<std::array<double, 2>> phase_samples(std::size_t n, std::uint64_t seed, double w)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-w, w);
    std::vector<std::array<double, 2>> out(n);
    for (auto &p : out) {
        p[0] = d(rng);
        p[1] = d(rng);
    }
    return out;
}

} // namespace abelkit
