#ifndef ABELKIT_ERRORS_HPP
#define ABELKIT_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace abelkit
{

// Malformed expression text. offset is the 0-based character position.
class parse_error : public std::runtime_error
{
public:
    parse_error(const std::string &msg, std::size_t offset)
        : std::runtime_error(msg + " at offset " + std::to_string(offset)), m_offset(offset)
    {
    }
    [[nodiscard]] std::size_t offset() const noexcept
    {
        return m_offset;
    }

private:
    std::size_t m_offset;
};

// Evaluation outside the domain of a node (ln of non-positive, division by zero, ...).
class domain_error : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// A numeric identity test could not sample a single admissible point.
class indeterminate_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// A mathematical precondition of an operation does not hold (A3 == 0 for a
// canonical form, inconsistent exponent system, ...).
class precondition_error : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical routine could not reach the requested accuracy. Carries the best
// estimate obtained.
class accuracy_error : public std::runtime_error
{
public:
    accuracy_error(const std::string &msg, double estimate)
        : std::runtime_error(msg), m_estimate(estimate)
    {
    }
    [[nodiscard]] double estimate() const noexcept
    {
        return m_estimate;
    }

private:
    double m_estimate;
};

} // namespace abelkit

#endif
