#include <abelkit/hierarchy.hpp>

#include <algorithm>
#include <cmath>

#include <abelkit/errors.hpp>

namespace abelkit
{

jet_poly jet_x()
{
    return {mvar(0), 0};
}

jet_poly jet_constant(const rational &c)
{
    return {mpoly(c), 0};
}

jet_poly jet_variable(int j)
{
    return {mvar(static_cast<std::size_t>(j)), j};
}

jet_poly operator+(const jet_poly &a, const jet_poly &b)
{
    return {a.p + b.p, std::max(a.order, b.order)};
}

jet_poly operator*(const rational &c, const jet_poly &a)
{
    return {c * a.p, a.order};
}

jet_poly operator*(const jet_poly &a, const jet_poly &b)
{
    return {a.p * b.p, std::max(a.order, b.order)};
}

jet_poly total_derivative(const jet_poly &a)
{
    mpoly r;
    for (int j = 0; j <= a.order; ++j) {
        const auto idx = static_cast<std::size_t>(j);
        r += partial(a.p, idx) * mvar(idx + 1);
    }
    return {r, a.order + 1};
}

jet_poly abel_operator(const jet_poly &a)
{
    auto d = total_derivative(a);
    d.p += mvar(0, 2) * a.p;
    return d;
}

std::string to_string(const jet_poly &a)
{
    if (a.p.is_zero()) {
        return "0";
    }
    std::vector<std::pair<exponents, rational>> terms(a.p.terms().begin(), a.p.terms().end());
    // Highest jet variable first, then by its power, and so on downwards.
    const auto key = [](const exponents &m) { return std::vector<int>(m.e.rbegin(), m.e.rend()); };
    std::stable_sort(terms.begin(), terms.end(), [&](const auto &l, const auto &r) {
        const auto kl = key(l.first), kr = key(r.first);
        if (kl.size() != kr.size()) {
            return kl.size() > kr.size();
        }
        return kl > kr;
    });
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto &[m, c] = terms[i];
        std::string mono;
        for (std::size_t j = m.e.size(); j-- > 0;) {
            if (m.e[j] == 0) {
                continue;
            }
            const std::string var = j == 0 ? "x" : "u" + std::to_string(j);
            mono += (mono.empty() ? "" : "*") + var + (m.e[j] == 1 ? "" : "^" + std::to_string(m.e[j]));
        }
        // x powers read better in front.
        if (!m.e.empty() && m.e[0] != 0 && m.e.size() > 1) {
            const auto star = mono.rfind('*');
            mono = mono.substr(star + 1) + "*" + mono.substr(0, star);
        }
        const rational mag = c < 0 ? rational(-c) : c;
        out += i == 0 ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
        if (mono.empty()) {
            out += to_string(mag);
        } else {
            out += (mag == 1 ? "" : to_string(mag) + "*") + mono;
        }
    }
    return out;
}

double eval(const jet_poly &a, std::span<const double> u)
{
    if (u.size() < static_cast<std::size_t>(a.order) + 1) {
        throw std::out_of_range("jet evaluation needs u_0 .. u_order");
    }
    return eval(a.p, std::vector<double>(u.begin(), u.end()));
}

hierarchy_equation build_hierarchy_equation(const std::vector<scalar_expr> &p, int n)
{
    if (n < 1 || p.size() != static_cast<std::size_t>(n) + 2) {
        throw precondition_error("hierarchy of order n needs n + 2 coefficients");
    }
    // powers[k] = D_A^k x
    std::vector<jet_poly> powers{jet_x()};
    for (int k = 1; k <= n; ++k) {
        powers.push_back(abel_operator(powers.back()));
    }
    hierarchy_equation h;
    h.order = n;
    for (int j = 0; j <= n; ++j) {
        h.terms.push_back({p[static_cast<std::size_t>(j)], powers[static_cast<std::size_t>(n - j)]});
    }
    h.terms.push_back({p.back(), jet_constant(1)});
    return h;
}

jet_poly combined_jet(const hierarchy_equation &h)
{
    jet_poly sum{mpoly{}, 0};
    for (const auto &term : h.terms) {
        if (!term.coeff.is_constant()) {
            throw precondition_error("hierarchy coefficient is not a rational constant");
        }
        sum = sum + term.coeff.value() * term.jet;
    }
    return sum;
}

planar_vf to_planar_vf(const hierarchy_equation &h)
{
    if (h.order != 2) {
        throw precondition_error("planar reduction needs a second-order member");
    }
    return to_planar_vf(combined_jet(h));
}

planar_vf to_planar_vf(const jet_poly &j)
{
    if (j.order > 2 || highest_variable(j.p) > 2) {
        throw precondition_error("planar reduction needs a jet of order 2");
    }
    const auto lead = coefficient_of(j.p, 2, 1);
    if (max_degree(j.p, 2) != 1 || !is_constant(lead) || lead.is_zero()) {
        throw precondition_error("leading coefficient must be a nonzero constant");
    }
    const rational c = lead.terms().begin()->second;
    const auto rest = j.p - c * mvar(2);
    return {xy::v(), to_poly_xy(rational(-1 / c) * rest)};
}

} // namespace abelkit
