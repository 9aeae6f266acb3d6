#ifndef ABELKIT_NUMERICS_HPP
#define ABELKIT_NUMERICS_HPP

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace abelkit
{

// dy/dt = rhs(t, y). May throw domain_error.
using ode_rhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

enum class trajectory_status { completed, blow_up, domain_error };

struct ode_options {
    double rtol = 1e-9;
    double atol = 1e-12;
    // Initial step; 0 picks one automatically.
    double h0 = 0;
    // Largest step; 0 leaves it unbounded.
    double h_max = 0;
    std::size_t max_steps = 2'000'000;
    // An accepted state with a component beyond this magnitude is a blow-up.
    double blowup_magnitude = 1e150;
};

// Accepted steps of an integration together with cubic Hermite dense output.
// Times are strictly increasing.
class trajectory
{
public:
    trajectory(std::size_t dim, double t0, std::span<const double> y0, std::span<const double> f0);

    [[nodiscard]] std::size_t dim() const noexcept
    {
        return m_dim;
    }
    [[nodiscard]] std::size_t size() const noexcept
    {
        return m_times.size();
    }
    [[nodiscard]] const std::vector<double> &times() const noexcept
    {
        return m_times;
    }
    [[nodiscard]] std::span<const double> state(std::size_t i) const;
    [[nodiscard]] std::span<const double> slope(std::size_t i) const;
    [[nodiscard]] double t_begin() const noexcept
    {
        return m_times.front();
    }
    [[nodiscard]] double t_end() const noexcept
    {
        return m_times.back();
    }

    [[nodiscard]] trajectory_status status() const noexcept
    {
        return m_status;
    }
    // Blow-up: interval expected to contain the escape time. Domain error:
    // both ends equal the failing time.
    [[nodiscard]] std::pair<double, double> bracket() const noexcept
    {
        return m_bracket;
    }

    // Dense output on [t_begin, t_end]; throws std::out_of_range outside.
    [[nodiscard]] std::vector<double> at(double t) const;
    [[nodiscard]] double at(double t, std::size_t component) const;

    void push(double t, std::span<const double> y, std::span<const double> f);
    void finish(trajectory_status s, std::pair<double, double> bracket);

private:
    [[nodiscard]] std::size_t locate(double t) const;

    std::size_t m_dim;
    std::vector<double> m_times;
    std::vector<double> m_states;
    std::vector<double> m_slopes;
    trajectory_status m_status = trajectory_status::completed;
    std::pair<double, double> m_bracket{0, 0};
};

// Dormand-Prince 5(4) with PI step control. Requires tf > t0.
trajectory integrate_ode(const ode_rhs &, double t0, std::vector<double> y0, double tf, const ode_options & = {});

// Same scheme with a fixed step and no error control (n equal steps).
trajectory integrate_fixed(const ode_rhs &, double t0, std::vector<double> y0, double tf, std::size_t n);

// Adaptive Simpson with Richardson correction. Throws accuracy_error with the
// best estimate when the recursion-depth cap is reached before tol is met.
double quad_adaptive(const std::function<double(double)> &f, double a, double b, double tol = 1e-10,
                     int max_depth = 48);

// Brent's method. Throws precondition_error without a sign change.
double root_bracketed(const std::function<double(double)> &f, double lo, double hi, double tol = 1e-14);

// CSV with header "t,x[,v]" (or y0.. for other dimensions), 17 significant
// digits. One row per accepted step plus rows at the requested dense samples,
// merged in time order.
void write_csv(std::ostream &, const trajectory &, const std::vector<double> &dense_times = {});

// ---------------------------------------------------------------------------
// Cross-validation harnesses. All return a nonnegative maximum over the grid.
// Grid points where an evaluation throws domain_error (pole guard band) are
// skipped; if no point survives, precondition_error is thrown.

using scalar_rhs = std::function<double(double t, double x)>;
using scalar_solution = std::function<double(double t)>;

// Combines particular solutions with rule and checks that the result solves
// dx/dt = rhs(t, x). The time derivative of the combination uses the chain
// rule with the rhs evaluated on each particular solution.
double superposition_residual(const scalar_rhs &rhs, const std::vector<scalar_solution> &solutions,
                              const std::function<double(std::span<const double>)> &rule,
                              const std::vector<double> &grid);

// max |E(y(t)) - E(y(t0))| over the accepted steps.
double conservation_residual(const std::function<double(std::span<const double>)> &energy, const trajectory &);

// max over accepted steps of |D(y(t)) - D(y0) exp(int_0^t f)| / max(|D(y(t))|, tiny),
// with the cofactor integral by the trapezoid rule on the dense output.
double darboux_growth_residual(const std::function<double(std::span<const double>)> &D,
                               const std::function<double(std::span<const double>)> &cofactor, const trajectory &,
                               double max_substep = 1e-3);

// max |map(t, src(t)) - dst(t)| on the grid.
double solution_map_residual(const std::function<std::vector<double>(double, std::span<const double>)> &map,
                             const trajectory &src, const trajectory &dst, const std::vector<double> &grid);

// Uniform grid of n points on [a, b] inclusive.
std::vector<double> linspace(double a, double b, std::size_t n);

} // namespace abelkit

#endif
