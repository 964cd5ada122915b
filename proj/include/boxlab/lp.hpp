#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "boxlab/rational.hpp"

namespace boxlab {

/// minimize objective . x  subject to  constraint_matrix x = rhs,  x >= 0.
///
/// The constraint matrix is stored column-sparse and shared between copies,
/// so programs that differ only in their right-hand side are cheap to make
/// with with_rhs().
class LinearProgram {
public:
    struct Entry {
        std::size_t row;
        Rational value;
        int unit;  // +1 or -1 when value is exactly that, else 0
    };
    struct SparseEntry {
        std::size_t row;
        Rational value;
    };

    /// Dense row-major matrix. Throws Error(DimensionMismatch) on inconsistent sizes
    /// or when rows or cols is zero.
    LinearProgram(std::size_t rows, std::size_t cols, const std::vector<Rational>& matrix, std::vector<Rational> rhs,
                  std::vector<Rational> objective);

    static LinearProgram from_columns(std::size_t rows, const std::vector<std::vector<SparseEntry>>& columns,
                                      std::vector<Rational> rhs, std::vector<Rational> objective);

    LinearProgram with_rhs(std::vector<Rational> rhs) const;
    /// The program on a subset of columns, in the given order.
    LinearProgram select_columns(std::span<const std::size_t> keep) const;

    std::size_t rows() const { return constraints_->rows; }
    std::size_t cols() const { return constraints_->columns.size(); }
    Rational coefficient(std::size_t row, std::size_t col) const;
    std::span<const Entry> column(std::size_t col) const { return constraints_->columns[col]; }
    const std::vector<Rational>& rhs() const { return rhs_; }
    const std::vector<Rational>& objective() const { return objective_; }

    /// Row i scaled by row_scale(i) has integer coefficients.
    struct IntegerEntry {
        std::size_t row;
        mpz_class value;
        long small;  // value when it fits in a long, else 0
    };
    const mpz_class& row_scale(std::size_t row) const { return constraints_->row_scale[row]; }
    std::span<const IntegerEntry> integer_column(std::size_t col) const { return constraints_->integer_columns[col]; }

private:
    struct Constraints {
        std::size_t rows = 0;
        std::vector<std::vector<Entry>> columns;
        std::vector<mpz_class> row_scale;
        std::vector<std::vector<IntegerEntry>> integer_columns;
    };

    static std::shared_ptr<Constraints> build(std::size_t rows, std::vector<std::vector<Entry>> columns);

    LinearProgram(std::shared_ptr<const Constraints> constraints, std::vector<Rational> rhs,
                  std::vector<Rational> objective);

    std::shared_ptr<const Constraints> constraints_;
    std::vector<Rational> rhs_;
    std::vector<Rational> objective_;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    // The remaining fields are populated only when status is optimal.
    Rational value;
    std::vector<Rational> point;
    /// Structural columns in the final basis, ascending.
    std::vector<std::size_t> basis;
    /// objective_j - duals . A_j for every column; all >= 0 at optimality.
    std::vector<Rational> reduced_costs;
    std::vector<Rational> duals;
};

/// Basis-inverse arithmetic. automatic uses checked 64-bit integers and
/// falls back to GMP on overflow; both give identical results.
enum class LpArithmetic { automatic, multiprecision };

/// Exact two-phase simplex with Bland's rule. Phase one starts from an
/// all-artificial basis; artificials stuck on redundant rows stay basic at zero.
LpSolution solve(const LinearProgram& lp, LpArithmetic arithmetic = LpArithmetic::automatic);

struct AlternativeSearch {
    /// Look first for a vertex whose support is disjoint from the known one,
    /// falling back to one with a merely different support.
    bool prefer_disjoint = true;
};

/// A second optimal basic solution whose support differs from known.point,
/// found by re-solving over the zero-reduced-cost columns with parts of the
/// known support removed. Returns nullopt exactly when the optimal vertex is
/// unique. Duals and reduced costs are those of a fresh solve of lp. Throws
/// Error(BadParameter) if known is not optimal.
std::optional<LpSolution> find_alternative_vertex(const LinearProgram& lp, const LpSolution& known,
                                                  const AlternativeSearch& search = {});

std::vector<std::size_t> support(std::span<const Rational> point);

}  // namespace boxlab
