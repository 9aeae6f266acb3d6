#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <abelkit/errors.hpp>
#include <abelkit/numerics.hpp>

#include "test_util.hpp"

using namespace abelkit;

namespace
{

ode_rhs scalar(std::function<double(double, double)> f)
{
    return [f = std::move(f)](double t, std::span<const double> y, std::span<double> dy) { dy[0] = f(t, y[0]); };
}

// Second-order Abel system x'' = -4x^2 x' - x^5 as a planar field.
void abel2(double, std::span<const double> y, std::span<double> dy)
{
    const double x = y[0], v = y[1];
    dy[0] = v;
    dy[1] = -4 * x * x * v - std::pow(x, 5);
}

} // namespace

TEST_CASE("exponential growth")
{
    const auto tr = integrate_ode(scalar([](double, double x) { return x; }), 0, {1.0}, 1.0);
    CHECK(tr.status() == trajectory_status::completed);
    CHECK(tr.t_end() == 1.0);
    CHECK(std::abs(tr.state(tr.size() - 1)[0] - std::numbers::e) < 1e-8);
}

TEST_CASE("tangent blow-up is bracketed")
{
    const auto tr = integrate_ode(scalar([](double, double x) { return 1 + x * x; }), 0, {0.0}, 3.0);
    REQUIRE(tr.status() == trajectory_status::blow_up);
    const auto [lo, hi] = tr.bracket();
    INFO("bracket [", lo, ", ", hi, "]");
    CHECK(lo <= std::numbers::pi / 2);
    CHECK(hi >= std::numbers::pi / 2);
    CHECK(hi - lo < 1e-3);
}

TEST_CASE("domain errors stop the integration")
{
    const auto tr = integrate_ode(scalar([](double, double x) {
                                      if (x <= 0) {
                                          throw domain_error("log of non-positive");
                                      }
                                      return -1.0 + 0 * std::log(x);
                                  }),
                                  0, {1.0}, 2.0);
    REQUIRE(tr.status() == trajectory_status::domain_error);
    CHECK(tr.bracket().first == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("integration rejects bad arguments")
{
    CHECK_THROWS_AS(integrate_ode(scalar([](double, double x) { return x; }), 1, {1.0}, 0), std::invalid_argument);
    ode_options bad;
    bad.rtol = 0;
    CHECK_THROWS_AS(integrate_ode(scalar([](double, double x) { return x; }), 0, {1.0}, 1, bad),
                    std::invalid_argument);
}

TEST_CASE("second-order Abel energy drift")
{
    const auto tr = integrate_ode(abel2, 0, {0.5, 0.1}, 2.0);
    REQUIRE(tr.status() == trajectory_status::completed);
    const auto energy = [](std::span<const double> y) {
        const double x = y[0], v = y[1];
        return -(3 * v + x * x * x) / std::pow(v + x * x * x, 3);
    };
    CHECK(conservation_residual(energy, tr) < 1e-6);
}

TEST_CASE("fixed-step global error is fifth order")
{
    std::vector<double> errs;
    for (std::size_t n : {4u, 8u, 16u, 32u}) {
        const auto tr = integrate_fixed(scalar([](double, double x) { return x; }), 0, {1.0}, 1.0, n);
        errs.push_back(std::abs(tr.state(tr.size() - 1)[0] - std::numbers::e));
    }
    for (std::size_t i = 1; i < errs.size(); ++i) {
        const double order = std::log2(errs[i - 1] / errs[i]);
        INFO("level ", i, " observed order ", order);
        CHECK(order >= 4.5);
    }
}

TEST_CASE("dense output reproduces step endpoints")
{
    const auto tr = integrate_ode(abel2, 0, {0.5, 0.1}, 2.0);
    for (std::size_t i = 0; i < tr.size(); ++i) {
        const auto y = tr.at(tr.times()[i]);
        CHECK(y[0] == doctest::Approx(tr.state(i)[0]).epsilon(1e-15));
        CHECK(y[1] == doctest::Approx(tr.state(i)[1]).epsilon(1e-15));
    }
    CHECK_THROWS_AS((void)tr.at(2.5), std::out_of_range);
}

TEST_CASE("dense output interpolates between steps")
{
    const auto tr = integrate_ode(scalar([](double t, double) { return std::cos(t); }), 0, {0.0}, 3.0);
    for (const double t : linspace(0, 3, 37)) {
        CHECK(std::abs(tr.at(t, 0) - std::sin(t)) < 1e-5);
    }
}

TEST_CASE("quadrature examples")
{
    CHECK(std::abs(quad_adaptive([](double t) { return t * t; }, 0, 1) - 1.0 / 3) < 1e-10);
    CHECK(std::abs(quad_adaptive([](double t) { return std::sin(t); }, 0, std::numbers::pi) - 2) < 1e-10);
    CHECK(std::abs(quad_adaptive([](double t) { return 1 / (t * t * t); }, 1, 2) - 3.0 / 8) < 1e-10);
    CHECK(quad_adaptive([](double t) { return t; }, 2, 1) == doctest::Approx(-1.5));
    CHECK(quad_adaptive([](double t) { return t; }, 1, 1) == 0);
}

TEST_CASE("quadrature is exact on cubics")
{
    for (int i = 0; i < 20; ++i) {
        const double c0 = test::uniform(-3, 3), c1 = test::uniform(-3, 3), c2 = test::uniform(-3, 3),
                     c3 = test::uniform(-3, 3);
        const double a = test::uniform(-2, 0), b = test::uniform(0.5, 2);
        const auto F = [&](double t) { return c0 * t + c1 * t * t / 2 + c2 * t * t * t / 3 + c3 * t * t * t * t / 4; };
        const double q = quad_adaptive([&](double t) { return c0 + c1 * t + c2 * t * t + c3 * t * t * t; }, a, b);
        CHECK(std::abs(q - (F(b) - F(a))) < 1e-10);
    }
}

TEST_CASE("quadrature reports unattained accuracy")
{
    try {
        quad_adaptive([](double t) { return std::sin(1 / t); }, 1e-9, 1, 1e-14, 6);
        FAIL("expected accuracy_error");
    } catch (const accuracy_error &e) {
        CHECK(std::isfinite(e.estimate()));
    }
}

TEST_CASE("root finding examples")
{
    CHECK(std::abs(root_bracketed([](double x) { return x * x - 2; }, 1, 2) - std::sqrt(2.0)) < 1e-10);
    CHECK(std::abs(root_bracketed([](double x) { return x; }, -1, 1)) < 1e-14);
    CHECK_THROWS_AS(root_bracketed([](double x) { return x * x + 1; }, -1, 1), precondition_error);

    // G(x) = int_1^x dxi/xi^2 = 1 - 1/x; G(x) = 0.5 at x = 2.
    const auto G = [](double x) { return quad_adaptive([](double s) { return 1 / (s * s); }, 1, x, 1e-13); };
    const double x = root_bracketed([&](double s) { return G(s) - 0.5; }, 1.0, 10.0);
    CHECK(std::abs(x - 2) < 1e-8);
}

TEST_CASE("csv emission")
{
    const auto tr = integrate_ode(abel2, 0, {0.5, 0.1}, 0.2);
    std::ostringstream os;
    write_csv(os, tr, {0.05, 0.1});
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "t,x,v");
    std::getline(is, line);
    CHECK(line == "0,0.5,0.10000000000000001");
    std::size_t rows = 1;
    while (std::getline(is, line)) {
        ++rows;
    }
    CHECK(rows == tr.size() + 2);
}

TEST_CASE("harnesses are zero-stable on exact invariants")
{
    // Harmonic oscillator energy.
    const ode_rhs osc = [](double, std::span<const double> y, std::span<double> dy) {
        dy[0] = y[1];
        dy[1] = -y[0];
    };
    const auto tr = integrate_ode(osc, 0, {1.0, 0.0}, 5.0);
    CHECK(conservation_residual([](std::span<const double> y) { return y[0] * y[0] + y[1] * y[1]; }, tr) < 1e-7);

    // D = x for x' = x has cofactor 1.
    const ode_rhs growth = [](double, std::span<const double> y, std::span<double> dy) { dy[0] = y[0]; };
    const auto g = integrate_ode(growth, 0, {2.0}, 1.0);
    CHECK(darboux_growth_residual([](std::span<const double> y) { return y[0]; },
                                  [](std::span<const double>) { return 1.0; }, g)
          < 1e-8);

    // Identity map between a trajectory and itself.
    CHECK(solution_map_residual([](double, std::span<const double> y) { return std::vector<double>(y.begin(), y.end()); },
                                tr, tr, linspace(0, 5, 51))
          == 0);
}

TEST_CASE("superposition harness on the linear equation")
{
    // x' = x + 1: x = x1 + k (x2 - x1).
    const scalar_rhs rhs = [](double, double x) { return x + 1; };
    const std::vector<scalar_solution> sols = {[](double t) { return 2 * std::exp(t) - 1; },
                                               [](double t) { return -3 * std::exp(t) - 1; }};
    const auto rule = [](std::span<const double> x) { return x[0] + 0.3 * (x[1] - x[0]); };
    CHECK(superposition_residual(rhs, sols, rule, linspace(0, 1, 20)) < 1e-8);
    // A wrong rule is detected.
    const auto bad = [](std::span<const double> x) { return x[0] * x[1]; };
    CHECK(superposition_residual(rhs, sols, bad, linspace(0, 1, 20)) > 0.1);
}

TEST_CASE("harness window checks")
{
    const ode_rhs f = [](double, std::span<const double> y, std::span<double> dy) { dy[0] = y[0]; };
    const auto a = integrate_ode(f, 0, {1.0}, 1.0);
    const auto b = integrate_ode(f, 2, {1.0}, 3.0);
    CHECK_THROWS_AS(
        solution_map_residual([](double, std::span<const double> y) { return std::vector<double>(y.begin(), y.end()); },
                              a, b, linspace(0, 3, 10)),
        precondition_error);
}
