#include <abelkit/io.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace abelkit::io
{

namespace
{

void write(std::ostringstream &os, const json &j, int indent)
{
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    const std::string close(static_cast<std::size_t>(indent), ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (const auto &[k, v] : j.items()) {
                os << (first ? "" : ",\n") << pad << json(k).dump() << ": ";
                write(os, v, indent + 2);
                first = false;
            }
            os << '\n' << close << '}';
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            os << "[\n";
            bool first = true;
            for (const auto &v : j) {
                os << (first ? "" : ",\n") << pad;
                write(os, v, indent + 2);
                first = false;
            }
            os << '\n' << close << ']';
            return;
        }
        case json::value_t::number_float: {
            const double d = j.get<double>();
            if (!std::isfinite(d)) {
                os << "null";
                return;
            }
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", d);
            os << buf;
            return;
        }
        default:
            os << j.dump();
    }
}

const json &field(const json &j, const char *key)
{
    if (!j.is_object() || !j.contains(key)) {
        throw format_error(std::string("missing field \"") + key + "\"");
    }
    return j.at(key);
}

std::optional<interval> interval_from_json(const json &j)
{
    if (!j.contains("interval")) {
        return std::nullopt;
    }
    const auto &iv = j.at("interval");
    if (!iv.is_array() || iv.size() != 2u || !iv[0].is_number() || !iv[1].is_number()) {
        throw format_error("interval must be [lo, hi]");
    }
    interval r{iv[0].get<double>(), iv[1].get<double>()};
    if (!(r.hi > r.lo)) {
        throw format_error("interval must satisfy lo < hi");
    }
    return r;
}

} // namespace

std::string dump(const json &j)
{
    std::ostringstream os;
    write(os, j, 0);
    os << '\n';
    return os.str();
}

json to_json(const rational &q)
{
    return to_string(q);
}

json to_json(const expression &e)
{
    return to_string(e);
}

json to_json(const poly_xy &p)
{
    json mons = json::array();
    for (const auto &[m, c] : p.terms()) {
        mons.push_back({{"powers", {m.x, m.v}}, {"coeff", to_json(c)}});
    }
    return {{"monomials", mons}, {"text", to_string(p)}};
}

json to_json(const jet_poly &j)
{
    json mons = json::array();
    for (const auto &[m, c] : j.p.terms()) {
        json powers = json::array();
        for (int k = 0; k <= j.order; ++k) {
            powers.push_back(m[static_cast<std::size_t>(k)]);
        }
        mons.push_back({{"powers", powers}, {"coeff", to_json(c)}});
    }
    return {{"monomials", mons}, {"order", j.order}, {"text", to_string(j)}};
}

json to_json(const vf1d &f)
{
    json c = json::array();
    for (const auto &q : f.coeffs()) {
        c.push_back(to_json(q));
    }
    return {{"coeffs", c}, {"text", to_string(f)}};
}

json to_json(const abel_first_kind &eq)
{
    json coeffs = json::object();
    for (std::size_t i = 0; i < eq.coeffs.size(); ++i) {
        coeffs["A" + std::to_string(i)] = to_json(eq.coeffs[i]);
    }
    json out{{"kind", eq.degree() <= 2 ? "riccati" : "abel1"}, {"coeffs", coeffs}};
    if (eq.domain) {
        out["interval"] = {eq.domain->lo, eq.domain->hi};
    }
    return out;
}

json to_json(const planar_vf &X)
{
    return {{"P", to_json(X.P)}, {"Q", to_json(X.Q)}};
}

json to_json(const darboux_pair &p)
{
    return {{"D", to_json(p.D)}, {"cofactor", to_json(p.cofactor)}};
}

json to_json(const multiplier_product &R)
{
    json f = json::array();
    for (const auto &[base, e] : R.factors) {
        f.push_back({{"base", to_json(base)}, {"exponent", to_json(e)}});
    }
    return {{"factors", f}, {"text", to_string(to_phase_function(R))}};
}

json to_json(const power_form &f)
{
    return {{"c", to_json(f.c)},
            {"a", to_json(f.a)},
            {"b", to_json(f.b)},
            {"rho", to_json(f.rho)},
            {"text", to_string(to_expression(f))}};
}

json to_json(const gauge &g)
{
    return {{"alpha", to_json(g.alpha)}, {"beta", to_json(g.beta)}};
}

json to_json(const ext_real &x)
{
    if (x.infinite) {
        return "inf";
    }
    return x.value;
}

rational rational_from_json(const json &j)
{
    if (j.is_number_integer()) {
        return rational(j.get<long long>());
    }
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const std::exception &e) {
            throw format_error(std::string("bad rational: ") + e.what());
        }
    }
    throw format_error("rational must be a string or an integer");
}

expression expression_from_json(const json &j, std::initializer_list<variable> vars)
{
    if (j.is_number_integer()) {
        return expression(rational(j.get<long long>()));
    }
    if (j.is_number()) {
        const auto q = snap_rational(j.get<double>());
        if (!q) {
            throw format_error("floating coefficient has no exact rational form; pass it as a string");
        }
        return expression(*q);
    }
    if (!j.is_string()) {
        throw format_error("expression must be a string");
    }
    return parse_expression(j.get<std::string>(), vars);
}

poly_xy poly_from_json(const json &j)
{
    if (j.is_object() && j.contains("monomials")) {
        poly_xy p;
        for (const auto &m : j.at("monomials")) {
            const auto &pw = field(m, "powers");
            if (!pw.is_array() || pw.size() != 2u) {
                throw format_error("polynomial powers must be [i, j]");
            }
            const int a = pw[0].get<int>();
            const int b = pw[1].get<int>();
            if (a < 0 || b < 0) {
                throw format_error("negative power in polynomial");
            }
            p += poly_xy::term({a, b}, rational_from_json(field(m, "coeff")));
        }
        return p;
    }
    const auto e = expression_from_json(j, {variable::x, variable::v});
    const auto p = to_poly_xy(e);
    if (!p) {
        throw format_error("not a polynomial in x and v: " + to_string(e));
    }
    return *p;
}

abel_first_kind abel_from_json(const json &j)
{
    const auto kind = field(j, "kind").get<std::string>();
    const auto &c = field(j, "coeffs");
    std::size_t n = 0;
    if (kind == "abel1") {
        n = 4;
    } else if (kind == "riccati") {
        n = 3;
    } else {
        throw format_error("expected kind abel1 or riccati, got " + kind);
    }
    abel_first_kind eq;
    for (std::size_t i = 0; i < n; ++i) {
        const auto key = "A" + std::to_string(i);
        eq.coeffs.push_back(c.contains(key) ? expression_from_json(c.at(key)) : scalar_expr{});
    }
    for (const auto &[k, v] : c.items()) {
        if (k.size() != 2 || k[0] != 'A' || k[1] < '0' || static_cast<std::size_t>(k[1] - '0') >= n) {
            throw format_error("unexpected coefficient " + k);
        }
    }
    eq.domain = interval_from_json(j);
    return eq;
}

abel_second_kind second_kind_from_json(const json &j)
{
    if (field(j, "kind").get<std::string>() != "abel2") {
        throw format_error("expected kind abel2");
    }
    const auto &c = field(j, "coeffs");
    abel_second_kind eq;
    eq.f = c.contains("f") ? expression_from_json(c.at("f")) : scalar_expr{};
    for (std::size_t i = 0; i < 4; ++i) {
        const auto key = "B" + std::to_string(i);
        eq.b[i] = c.contains(key) ? expression_from_json(c.at(key)) : scalar_expr{};
    }
    eq.domain = interval_from_json(j);
    return eq;
}

planar_vf vf_from_json(const json &j)
{
    const auto &body = j.contains("vf") ? j.at("vf") : j;
    planar_vf X{poly_from_json(field(body, "P")), poly_from_json(field(body, "Q"))};
    if (X.P.is_zero() && X.Q.is_zero()) {
        throw format_error("vector field is zero");
    }
    return X;
}

vspan span_from_json(const json &j)
{
    std::vector<vf1d> basis;
    for (const auto &b : field(j, "basis")) {
        std::vector<rational> c;
        for (const auto &q : b) {
            c.push_back(rational_from_json(q));
        }
        basis.emplace_back(std::move(c));
    }
    return vspan(std::move(basis));
}

} // namespace abelkit::io
