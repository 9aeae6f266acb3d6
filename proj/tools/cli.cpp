#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include <abelkit/io.hpp>

namespace abelkit::cli
{

namespace
{

using io::json;

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Residual over tolerance: the report is still printed.
struct job_result {
    json report;
    bool within_tolerance = true;
};

json load(const std::string &source)
{
    const auto first = source.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && source[first] == '{') {
        return json::parse(source);
    }
    std::ifstream in(source);
    if (!in) {
        throw io::format_error("cannot read " + source);
    }
    return json::parse(in);
}

std::vector<std::string> split(const std::string &s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) {
        out.push_back(cur);
    }
    if (!s.empty() && s.back() == sep) {
        out.emplace_back();
    }
    return out;
}

std::uint64_t env_seed()
{
    const char *s = std::getenv("ABELKIT_SEED");
    if (s == nullptr || *s == '\0') {
        return default_seed;
    }
    try {
        std::size_t pos = 0;
        const auto v = std::stoull(s, &pos, 0);
        if (pos != std::string(s).size()) {
            throw std::invalid_argument(s);
        }
        return v;
    } catch (const std::exception &) {
        throw usage_error(std::string("ABELKIT_SEED is not an integer: ") + s);
    }
}

json number_or_rational(double x)
{
    if (const auto q = snap_rational(x, 1000, 1e-12)) {
        return io::to_json(*q);
    }
    return x;
}

const char *status_name(trajectory_status s)
{
    switch (s) {
        case trajectory_status::completed:
            return "completed";
        case trajectory_status::blow_up:
            return "blow_up";
        case trajectory_status::domain_error:
            return "domain_error";
    }
    return "unknown";
}

bool within(double residual, double tol)
{
    return std::isfinite(residual) && residual <= tol;
}

const ode_options tight{1e-12, 1e-14};

// ---------------------------------------------------------------------------

json classify_job(const json &in, const sample_options &opts)
{
    const auto c = classify(io::abel_from_json(in), opts);
    json out{{"class", name(c.kind)}};
    if (c.kind == abel_class::separable) {
        out["h"] = io::to_json(c.h);
        out["c"] = json::array();
        for (const double ci : c.c) {
            out["c"].push_back(number_or_rational(ci));
        }
    }
    if (c.kind == abel_class::solvable_two_dim) {
        out["mu"] = number_or_rational(c.mu);
    }
    return out;
}

json canonicalize_job(const json &in, const sample_options &opts)
{
    const auto r = canonical_form(io::abel_from_json(in), opts);
    json gauges = json::array();
    for (const auto &g : r.gauges) {
        gauges.push_back(io::to_json(g));
    }
    return {{"form", r.kind == canonical_kind::first ? "CanonicalI" : "CanonicalII"},
            {"equation", io::to_json(r.eq)},
            {"gauges", gauges}};
}

json invariants_job(const json &in, const std::string &variant_name)
{
    const auto variant = parse_phi5_variant(variant_name);
    if (!variant) {
        throw usage_error("unknown phi5 variant " + variant_name);
    }
    const auto inv = liouville(io::abel_from_json(in), *variant);
    return {{"phi3", io::to_json(inv.phi3)},
            {"phi5", io::to_json(inv.phi5)},
            {"phi5_variant", name(inv.variant)},
            {"quotient", inv.quotient ? io::to_json(*inv.quotient) : json(nullptr)}};
}

json transform_job(const json &in, const std::string &alpha, const std::string &beta, const sample_options &opts)
{
    const gauge g{parse_scalar(alpha), parse_scalar(beta)};
    return io::to_json(gauge_transform(io::abel_from_json(in), g, opts));
}

json lienard_job(const std::string &f, const std::string &g)
{
    auto out = io::to_json(lienard_to_abel(parse_expression(f, {variable::x}), parse_expression(g, {variable::x})));
    out["independent"] = "x";
    return out;
}

struct solve_args {
    double t0 = 0;
    double x0 = 0;
    double tf = 1;
    double tol = 1e-6;
    std::size_t points = 201;
    std::string csv;
};

void write_solution_csv(const std::string &path, const quadrature_solution &s, std::size_t points)
{
    std::ofstream os(path);
    if (!os) {
        throw io::format_error("cannot write " + path);
    }
    os << "t,x\n";
    char buf[80];
    for (const double t : linspace(s.t0(), s.t_end(), std::max<std::size_t>(points, 2))) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", t, s(t));
        os << buf;
    }
}

job_result solve_job(const json &in, const solve_args &a, const sample_options &opts)
{
    if (!(a.tf > a.t0)) {
        throw usage_error("solve needs tf > t0");
    }
    const auto eq = io::abel_from_json(in);
    const auto cls = classify(eq, opts);
    const auto sopts = sampling_for(eq, opts);
    const scalar_rhs rhs = [&eq](double t, double x) { return eval_rhs(eq, t, x); };

    json out{{"class", name(cls.kind)}, {"tolerance", a.tol}};
    std::optional<quadrature_solution> sol;
    std::string path;
    try {
        if (cls.kind == abel_class::riccati && is_zero_numeric(eq.coeff(2), sopts)) {
            path = "linear";
            sol = solve_linear(eq.coeff(0), eq.coeff(1), a.t0, a.x0, a.tf);
        } else if (cls.kind == abel_class::bernoulli) {
            path = "bernoulli";
            sol = solve_bernoulli(eq, a.t0, a.x0, a.tf, {}, opts);
        } else if (cls.kind == abel_class::separable) {
            path = "separable";
            sol = solve_separable(eq, a.t0, a.x0, a.tf, {}, opts);
        }
    } catch (const precondition_error &e) {
        out["fallback_reason"] = e.what();
        sol.reset();
    } catch (const accuracy_error &e) {
        out["fallback_reason"] = e.what();
        sol.reset();
    }

    std::optional<trajectory> tr;
    if (!sol) {
        path = "integrate_ode";
        // Bounded steps keep the dense output's derivative accurate enough for
        // the residual.
        auto o = tight;
        o.h_max = (a.tf - a.t0) / 2000;
        tr = integrate_ode(to_ode_rhs(eq), a.t0, {a.x0}, a.tf, o);
        const trajectory *p = &*tr;
        sol = quadrature_solution(tr->t_begin(), tr->t_end(), [p](double t) { return p->at(t, 0); }, tr->status(),
                                  tr->bracket());
    }
    out["path"] = path;
    out["status"] = status_name(sol->status());
    out["t_end"] = sol->t_end();
    out["x_end"] = (*sol)(sol->t_end());
    if (sol->status() != trajectory_status::completed) {
        out["bracket"] = {sol->bracket().first, sol->bracket().second};
    }
    double residual = std::numeric_limits<double>::quiet_NaN();
    if (sol->t_end() > sol->t0()) {
        residual = solution_residual(*sol, rhs);
    }
    out["residual"] = residual;
    if (!a.csv.empty()) {
        if (tr) {
            std::ofstream os(a.csv);
            if (!os) {
                throw io::format_error("cannot write " + a.csv);
            }
            write_csv(os, *tr, linspace(tr->t_begin(), tr->t_end(), std::max<std::size_t>(a.points, 2)));
        } else {
            write_solution_csv(a.csv, *sol, a.points);
        }
        out["csv"] = a.csv;
    }
    return {out, within(residual, a.tol)};
}

ext_real parse_ext(const std::string &s)
{
    if (s == "inf" || s == "infinity") {
        return ext_real::inf();
    }
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size() || !std::isfinite(v)) {
            throw std::invalid_argument(s);
        }
        return {v, false};
    } catch (const std::exception &) {
        throw usage_error("expected a number or inf, got " + s);
    }
}

struct superpose_args {
    std::string k = "0";
    double t0 = 0;
    double x1 = 0;
    double x2 = 0;
    double x3 = 0;
    double tf = 1;
    double tol = 1e-6;
    std::size_t points = 200;
    double pole_guard = 1e2;
};

job_result superpose_job(const json &in, const superpose_args &a)
{
    if (!(a.tf > a.t0)) {
        throw usage_error("superpose needs tf > t0");
    }
    const auto eq = io::abel_from_json(in);
    if (eq.degree() != 2) {
        throw precondition_error("superposition needs a Riccati equation");
    }
    const auto k = parse_ext(a.k);
    const auto x_init = riccati_superposition(a.x1, a.x2, a.x3, k);
    const auto f = to_ode_rhs(eq);
    std::vector<trajectory> trs;
    json statuses = json::array();
    double hi = a.tf;
    auto o = tight;
    o.h_max = (a.tf - a.t0) / 2000;
    for (const double x : {a.x1, a.x2, a.x3}) {
        trs.push_back(integrate_ode(f, a.t0, {x}, a.tf, o));
        statuses.push_back(status_name(trs.back().status()));
        hi = std::min(hi, trs.back().t_end());
    }
    if (!(hi > a.t0)) {
        throw precondition_error("particular solutions do not share a time window");
    }
    std::vector<scalar_solution> sols;
    for (const auto &tr : trs) {
        const trajectory *p = &tr;
        sols.emplace_back([p, g = a.pole_guard](double t) {
            const double x = p->at(t, 0);
            if (std::abs(x) > g) {
                throw domain_error("near a pole");
            }
            return x;
        });
    }
    const auto rule = [k, g = a.pole_guard](std::span<const double> y) {
        const auto r = riccati_superposition(y[0], y[1], y[2], k);
        if (r.infinite || std::abs(r.value) > g) {
            throw domain_error("superposed solution near a pole");
        }
        return r.value;
    };
    const scalar_rhs rhs = [&eq](double t, double x) { return eval_rhs(eq, t, x); };
    const auto grid = linspace(a.t0, hi, std::max<std::size_t>(a.points, 2));
    const double residual = superposition_residual(rhs, sols, rule, grid);

    json out{{"k", io::to_json(k)},
             {"x_initial", io::to_json(x_init)},
             {"window", {a.t0, hi}},
             {"statuses", statuses},
             {"residual", residual},
             {"pole_guard", a.pole_guard},
             {"tolerance", a.tol}};

    // Independent check: integrate from the superposed initial value.
    if (!x_init.infinite) {
        const auto direct = integrate_ode(f, a.t0, {x_init.value}, hi, o);
        double diff = 0;
        for (const double t : grid) {
            if (t > direct.t_end()) {
                continue;
            }
            try {
                const double y0 = direct.at(t, 0);
                const double y1 = rule(std::array<double, 3>{sols[0](t), sols[1](t), sols[2](t)});
                if (std::abs(y0) <= a.pole_guard) {
                    diff = std::max(diff, std::abs(y0 - y1) / (1 + std::abs(y0)));
                }
            } catch (const domain_error &) {
            }
        }
        out["direct_difference"] = diff;
        out["direct_status"] = status_name(direct.status());
    }
    return {out, within(residual, a.tol)};
}

json sl2_job(const json &in, const std::string &matrix, const sample_options &opts)
{
    const auto parts = split(matrix, ',');
    if (parts.size() != 4u) {
        throw usage_error("--matrix takes four comma-separated expressions a,b,c,d");
    }
    const mobius m{parse_scalar(parts[0]), parse_scalar(parts[1]), parse_scalar(parts[2]), parse_scalar(parts[3])};
    return io::to_json(sl2_coefficient_action(m, io::abel_from_json(in), opts));
}

json hierarchy_job(int n, const std::string &p)
{
    std::vector<scalar_expr> coeffs;
    for (const auto &s : split(p, ',')) {
        coeffs.push_back(parse_scalar(s));
    }
    const auto eq = build_hierarchy_equation(coeffs, n);
    json terms = json::array();
    for (const auto &t : eq.terms) {
        terms.push_back({{"coeff", io::to_json(t.coeff)}, {"jet", io::to_json(t.jet)}});
    }
    json out{{"order", eq.order}, {"terms", terms}};
    try {
        const auto j = combined_jet(eq);
        out["jet"] = io::to_json(j);
        out["equation"] = to_string(j) + " = 0";
    } catch (const precondition_error &) {
        out["jet"] = nullptr;
    }
    return out;
}

json darboux_job(const json &in, int max_bdeg)
{
    const auto X = io::vf_from_json(in);
    json pairs = json::array();
    for (const auto &p : find_darboux_vlinear(X, max_bdeg)) {
        pairs.push_back(io::to_json(p));
    }
    return {{"vf", io::to_json(X)}, {"max_bdeg", max_bdeg}, {"pairs", pairs}};
}

job_result multiplier_job(const json &in, int max_bdeg, double tol, std::size_t points, std::uint64_t seed)
{
    const auto X = io::vf_from_json(in);
    const auto pairs = find_darboux_vlinear(X, max_bdeg);
    const auto pts = phase_samples(points, seed);
    json jp = json::array();
    for (const auto &p : pairs) {
        jp.push_back(io::to_json(p));
    }
    json out{{"vf", io::to_json(X)}, {"divergence", io::to_json(divergence(X))}, {"pairs", jp}, {"tolerance", tol}};

    bool ok = true;
    json multipliers = json::array();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        try {
            const auto s = jm_exponents({pairs[i]}, X);
            const auto R = build_multiplier({pairs[i]}, s.nu);
            const double r = jm_residual(R, X, pts);
            ok = ok && within(r, tol);
            multipliers.push_back(
                {{"pair", i}, {"nu", io::to_json(s.nu[0])}, {"multiplier", io::to_json(R)}, {"residual", r}});
        } catch (const no_multiplier_error &) {
        }
    }
    try {
        const auto s = jm_exponents(pairs, X);
        json nu = json::array();
        for (const auto &q : s.nu) {
            nu.push_back(io::to_json(q));
        }
        out["nu"] = nu;
        out["free"] = s.free;
        if (multipliers.empty()) {
            const auto R = build_multiplier(pairs, s.nu);
            const double r = jm_residual(R, X, pts);
            ok = ok && within(r, tol);
            multipliers.push_back({{"pair", nullptr}, {"multiplier", io::to_json(R)}, {"residual", r}});
        }
    } catch (const no_multiplier_error &) {
        out["nu"] = nullptr;
    }
    if (multipliers.empty()) {
        throw no_multiplier_error("no Jacobi multiplier built from the Darboux pairs found");
    }
    out["multipliers"] = multipliers;
    return {out, ok};
}

struct lagrangian_args {
    int max_bdeg = 3;
    double x0 = 0.5;
    double v0 = 0.1;
    double tf = 2;
    double el_tol = 1e-10;
    double energy_tol = 1e-6;
    std::size_t points = 20;
};

job_result lagrangian_job(const json &in, const lagrangian_args &a, std::uint64_t seed)
{
    const auto X = io::vf_from_json(in);
    if (X.P != xy::v()) {
        throw precondition_error("lagrangian needs a second-order field P = v");
    }
    const auto &F = X.Q;
    const auto tr = integrate_ode(to_ode_rhs(X), 0, {a.x0, a.v0}, a.tf, tight);

    bool ok = true;
    json items = json::array();
    const auto pairs = find_darboux_vlinear(X, a.max_bdeg);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto &D = pairs[i].D;
        const rational lead = D.coeff({0, 1});
        const poly_xy rest = D - lead * xy::v();
        if (lead == 0 || degree_v(rest) > 0) {
            continue;
        }
        jm_solution s;
        try {
            s = jm_exponents({pairs[i]}, X);
        } catch (const no_multiplier_error &) {
            continue;
        }
        const power_form R{rational{1}, lead, rest, s.nu[0]};
        json item{{"pair", i}, {"multiplier", io::to_json(R)}};
        if (R.rho == -1 || R.rho == -2) {
            item["skipped"] = "multiplier exponent gives a logarithmic Lagrangian";
            items.push_back(item);
            continue;
        }
        const auto L = lagrangian_from_multiplier(R);
        const auto E = energy(L);
        const auto pts = samples_away_from({D}, a.points, seed);
        const double el = euler_lagrange_residual(to_expression(L), F, pts);
        const double hr = helmholtz_residual_1d(to_expression(R), F, pts);
        item["lagrangian"] = io::to_json(L);
        item["energy"] = io::to_json(E);
        item["euler_lagrange_residual"] = el;
        item["helmholtz_residual"] = hr;
        ok = ok && within(el, a.el_tol) && within(hr, a.el_tol);
        try {
            const double drift =
                conservation_residual([&E](std::span<const double> y) { return eval(E, point{0, y[0], y[1]}); }, tr);
            item["energy_drift"] = drift;
            ok = ok && within(drift, a.energy_tol);
        } catch (const domain_error &e) {
            item["energy_drift"] = nullptr;
            item["energy_drift_error"] = e.what();
            ok = false;
        }
        items.push_back(item);
    }
    if (items.empty()) {
        throw no_multiplier_error("no multiplier of the form (a v + b(x))^rho found");
    }
    return {{{"vf", io::to_json(X)},
             {"lagrangians", items},
             {"trajectory", {{"start", {a.x0, a.v0}}, {"t_end", tr.t_end()}, {"status", status_name(tr.status())}}},
             {"tolerances", {{"euler_lagrange", a.el_tol}, {"energy", a.energy_tol}}}},
            ok};
}

json normalizer_job(const std::string &span_name, int max_deg)
{
    vspan span;
    if (span_name == "abel") {
        span = v_abel();
    } else if (span_name == "riccati") {
        span = v_riccati();
    } else {
        span = io::span_from_json(load(span_name));
    }
    const auto n = normalizer_in_degree(span, max_deg);
    json basis = json::array();
    for (const auto &b : n.basis()) {
        basis.push_back(io::to_json(b));
    }
    return {{"basis", basis}, {"dim", n.dim()}};
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Abel equations: classification, gauges, invariants, solvers, Darboux and Lagrangian analysis",
                 "abelkit"};
    app.require_subcommand(1);
    std::optional<std::uint64_t> seed_flag;
    app.add_option("--seed", seed_flag, "Sampling seed (overrides ABELKIT_SEED)");

    std::string source;
    const auto with_input = [&source](CLI::App *s, const char *what) {
        s->add_option("input", source, what)->required();
    };

    auto *classify_cmd = app.add_subcommand("classify", "Classify a first-kind equation");
    with_input(classify_cmd, "Equation JSON file or inline JSON");

    auto *canon_cmd = app.add_subcommand("canonicalize", "Canonical form and gauges");
    with_input(canon_cmd, "Equation JSON file or inline JSON");

    std::string variant = name(default_phi5_variant);
    auto *inv_cmd = app.add_subcommand("invariants", "Liouville invariants");
    with_input(inv_cmd, "Equation JSON file or inline JSON");
    inv_cmd->add_option("--phi5-variant", variant, "printed, timesphi3 or corrected");

    std::string alpha = "1", beta = "0";
    auto *transform_cmd = app.add_subcommand("transform", "Apply the gauge x = alpha xbar + beta");
    with_input(transform_cmd, "Equation JSON file or inline JSON");
    transform_cmd->add_option("--alpha", alpha, "alpha(t)")->required();
    transform_cmd->add_option("--beta", beta, "beta(t)")->required();

    auto *convert_cmd = app.add_subcommand("convert", "Second kind to first kind");
    with_input(convert_cmd, "Second-kind equation JSON");

    std::string lf, lg;
    auto *lienard_cmd = app.add_subcommand("lienard", "Lienard equation to first kind");
    lienard_cmd->add_option("--f", lf, "f(x)")->required();
    lienard_cmd->add_option("--g", lg, "g(x)")->required();

    solve_args sa;
    auto *solve_cmd = app.add_subcommand("solve", "Solve an initial value problem");
    with_input(solve_cmd, "Equation JSON file or inline JSON");
    solve_cmd->add_option("--t0", sa.t0)->required();
    solve_cmd->add_option("--x0", sa.x0)->required();
    solve_cmd->add_option("--tf", sa.tf)->required();
    solve_cmd->add_option("--tol", sa.tol, "Residual tolerance")->capture_default_str();
    solve_cmd->add_option("--points", sa.points, "CSV rows")->capture_default_str();
    solve_cmd->add_option("--emit-csv", sa.csv, "Write the trajectory as CSV");

    superpose_args pa;
    auto *sup_cmd = app.add_subcommand("superpose", "Check the Riccati superposition rule");
    with_input(sup_cmd, "Riccati equation JSON");
    sup_cmd->add_option("--k", pa.k, "Constant k (number or inf)")->required();
    sup_cmd->add_option("--t0", pa.t0)->required();
    sup_cmd->add_option("--x1", pa.x1)->required();
    sup_cmd->add_option("--x2", pa.x2)->required();
    sup_cmd->add_option("--x3", pa.x3)->required();
    sup_cmd->add_option("--tf", pa.tf)->required();
    sup_cmd->add_option("--tol", pa.tol)->capture_default_str();
    sup_cmd->add_option("--points", pa.points)->capture_default_str();
    sup_cmd->add_option("--pole-guard", pa.pole_guard, "Skip grid points where a solution exceeds this magnitude")
        ->capture_default_str();

    std::string matrix;
    auto *sl2_cmd = app.add_subcommand("sl2", "SL(2, R) action on Riccati coefficients");
    with_input(sl2_cmd, "Riccati equation JSON");
    sl2_cmd->add_option("--matrix", matrix, "a,b,c,d as expressions in t")->required();

    int hn = 1;
    std::string hp;
    auto *hier_cmd = app.add_subcommand("hierarchy", "Member of the D_A hierarchy");
    hier_cmd->add_option("--n", hn, "Order")->required();
    hier_cmd->add_option("--p", hp, "p0,...,p_{n+1}")->required();

    int max_bdeg = 3;
    auto *darb_cmd = app.add_subcommand("darboux", "Darboux polynomials v + b(x)");
    with_input(darb_cmd, "Vector field JSON");
    darb_cmd->add_option("--max-bdeg", max_bdeg)->capture_default_str();

    double jm_tol = 1e-10;
    std::size_t jm_points = 50;
    auto *mult_cmd = app.add_subcommand("multiplier", "Jacobi multipliers from Darboux pairs");
    with_input(mult_cmd, "Vector field JSON");
    mult_cmd->add_option("--max-bdeg", max_bdeg)->capture_default_str();
    mult_cmd->add_option("--tol", jm_tol)->capture_default_str();
    mult_cmd->add_option("--points", jm_points)->capture_default_str();

    lagrangian_args la;
    auto *lag_cmd = app.add_subcommand("lagrangian", "Lagrangians and energies from Jacobi multipliers");
    with_input(lag_cmd, "Vector field JSON with P = v");
    lag_cmd->add_option("--max-bdeg", la.max_bdeg)->capture_default_str();
    lag_cmd->add_option("--x0", la.x0)->capture_default_str();
    lag_cmd->add_option("--v0", la.v0)->capture_default_str();
    lag_cmd->add_option("--tf", la.tf)->capture_default_str();
    lag_cmd->add_option("--el-tol", la.el_tol)->capture_default_str();
    lag_cmd->add_option("--energy-tol", la.energy_tol)->capture_default_str();
    lag_cmd->add_option("--points", la.points)->capture_default_str();

    std::string span_name;
    int max_deg = 4;
    auto *norm_cmd = app.add_subcommand("normalizer", "Normalizer of a span of fields in bounded degree");
    norm_cmd->add_option("--span", span_name, "abel, riccati or a basis JSON")->required();
    norm_cmd->add_option("--max-deg", max_deg)->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return exit_code::ok;
    } catch (const CLI::ParseError &e) {
        err << "usage error: " << e.what() << '\n';
        return exit_code::usage;
    }

    try {
        const std::uint64_t seed = seed_flag ? *seed_flag : env_seed();
        sample_options opts;
        opts.seed = seed;

        job_result r;
        if (classify_cmd->parsed()) {
            r.report = classify_job(load(source), opts);
        } else if (canon_cmd->parsed()) {
            r.report = canonicalize_job(load(source), opts);
        } else if (inv_cmd->parsed()) {
            r.report = invariants_job(load(source), variant);
        } else if (transform_cmd->parsed()) {
            r.report = transform_job(load(source), alpha, beta, opts);
        } else if (convert_cmd->parsed()) {
            r.report = io::to_json(second_to_first(io::second_kind_from_json(load(source))));
        } else if (lienard_cmd->parsed()) {
            r.report = lienard_job(lf, lg);
        } else if (solve_cmd->parsed()) {
            r = solve_job(load(source), sa, opts);
        } else if (sup_cmd->parsed()) {
            r = superpose_job(load(source), pa);
        } else if (sl2_cmd->parsed()) {
            r.report = sl2_job(load(source), matrix, opts);
        } else if (hier_cmd->parsed()) {
            r.report = hierarchy_job(hn, hp);
        } else if (darb_cmd->parsed()) {
            r.report = darboux_job(load(source), max_bdeg);
        } else if (mult_cmd->parsed()) {
            r = multiplier_job(load(source), max_bdeg, jm_tol, jm_points, seed);
        } else if (lag_cmd->parsed()) {
            r = lagrangian_job(load(source), la, seed);
        } else if (norm_cmd->parsed()) {
            r.report = normalizer_job(span_name, max_deg);
        }
        out << io::dump(r.report);
        if (!r.within_tolerance) {
            err << "accuracy not attained: a residual exceeds its tolerance\n";
            return exit_code::accuracy;
        }
        return exit_code::ok;
    } catch (const usage_error &e) {
        err << "usage error: " << e.what() << '\n';
        return exit_code::usage;
    } catch (const json::exception &e) {
        err << "input error: " << e.what() << '\n';
        return exit_code::input;
    } catch (const io::format_error &e) {
        err << "input error: " << e.what() << '\n';
        return exit_code::input;
    } catch (const parse_error &e) {
        err << "input error: " << e.what() << '\n';
        return exit_code::input;
    } catch (const mixed_type_error &e) {
        err << "precondition violated: " << e.what() << " (A0 changes sign near t = " << e.where() << ")\n";
        return exit_code::precondition;
    } catch (const accuracy_error &e) {
        err << "accuracy not attained: " << e.what() << " (best estimate " << e.estimate() << ")\n";
        return exit_code::accuracy;
    } catch (const std::exception &e) {
        err << "precondition violated: " << e.what() << '\n';
        return exit_code::precondition;
    }
}

} // namespace abelkit::cli
