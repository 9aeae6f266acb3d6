#ifndef ABELKIT_LINALG_HPP
#define ABELKIT_LINALG_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include <abelkit/rational.hpp>

namespace abelkit
{

// Dense matrix over the rationals, row-major.
class rat_matrix
{
public:
    rat_matrix() = default;
    rat_matrix(std::size_t rows, std::size_t cols) : m_rows(rows), m_cols(cols), m_data(rows * cols) {}

    [[nodiscard]] std::size_t rows() const noexcept
    {
        return m_rows;
    }
    [[nodiscard]] std::size_t cols() const noexcept
    {
        return m_cols;
    }
    rational &operator()(std::size_t r, std::size_t c)
    {
        return m_data[r * m_cols + c];
    }
    const rational &operator()(std::size_t r, std::size_t c) const
    {
        return m_data[r * m_cols + c];
    }

private:
    std::size_t m_rows = 0;
    std::size_t m_cols = 0;
    std::vector<rational> m_data;
};

struct rref_result {
    rat_matrix reduced;
    std::vector<std::size_t> pivots; // pivot column of each nonzero row
};

rref_result rref(rat_matrix);

std::size_t rank(const rat_matrix &);

// Basis of {x : A x = 0}, one vector per free column, in reduced form (each
// basis vector has a 1 at its free column and 0 at the other free columns).
std::vector<std::vector<rational>> nullspace(const rat_matrix &);

// One solution of A x = b with all free variables set to zero, or nullopt when
// inconsistent. free_columns (if given) receives the free variable indices.
std::optional<std::vector<rational>> solve(const rat_matrix &a, const std::vector<rational> &b,
                                           std::vector<std::size_t> *free_columns = nullptr);

} // namespace abelkit

#endif
