#include "boxlab/lp.hpp"

#include <algorithm>
#include <cstdint>
#include <string>

#include "boxlab/error.hpp"

namespace boxlab {

namespace {

int unit_of(const Rational& v) {
    if (v == 1) return 1;
    if (v == -1) return -1;
    return 0;
}

mpz_class lcm_of_denominators(std::span<const Rational> values) {
    mpz_class l = 1;
    for (const auto& v : values) {
        if (v.get_den() != 1) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den().get_mpz_t());
    }
    return l;
}

}  // namespace

LinearProgram::LinearProgram(std::shared_ptr<const Constraints> constraints, std::vector<Rational> rhs,
                             std::vector<Rational> objective)
    : constraints_(std::move(constraints)), rhs_(std::move(rhs)), objective_(std::move(objective)) {
    if (rhs_.size() != constraints_->rows) {
        throw Error(ErrorCode::DimensionMismatch, "rhs has " + std::to_string(rhs_.size()) + " entries for " +
                                                      std::to_string(constraints_->rows) + " rows");
    }
    if (objective_.size() != constraints_->columns.size()) {
        throw Error(ErrorCode::DimensionMismatch, "objective has " + std::to_string(objective_.size()) +
                                                      " entries for " +
                                                      std::to_string(constraints_->columns.size()) + " columns");
    }
}

std::shared_ptr<LinearProgram::Constraints> LinearProgram::build(std::size_t rows,
                                                                 std::vector<std::vector<Entry>> columns) {
    auto c = std::make_shared<Constraints>();
    c->rows = rows;
    c->columns = std::move(columns);

    // Integer image of the matrix: each row scaled by the lcm of its denominators.
    std::vector<std::vector<Rational>> row_values(rows);
    for (const auto& column : c->columns) {
        for (const auto& e : column) row_values[e.row].push_back(e.value);
    }
    c->row_scale.reserve(rows);
    for (const auto& values : row_values) c->row_scale.push_back(lcm_of_denominators(values));
    c->integer_columns.resize(c->columns.size());
    for (std::size_t j = 0; j < c->columns.size(); ++j) {
        for (const auto& e : c->columns[j]) {
            Rational scaled = e.value * c->row_scale[e.row];
            IntegerEntry ie{e.row, scaled.get_num(), 0};
            if (ie.value.fits_slong_p()) ie.small = ie.value.get_si();
            c->integer_columns[j].push_back(std::move(ie));
        }
    }
    return c;
}

LinearProgram::LinearProgram(std::size_t rows, std::size_t cols, const std::vector<Rational>& matrix,
                             std::vector<Rational> rhs, std::vector<Rational> objective) {
    if (rows == 0 || cols == 0) throw Error(ErrorCode::DimensionMismatch, "empty program");
    if (matrix.size() != rows * cols) {
        throw Error(ErrorCode::DimensionMismatch, "matrix has " + std::to_string(matrix.size()) +
                                                      " entries, expected " + std::to_string(rows * cols));
    }
    std::vector<std::vector<Entry>> columns(cols);
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t i = 0; i < rows; ++i) {
            const Rational& v = matrix[i * cols + j];
            if (sgn(v) != 0) columns[j].push_back({i, v, unit_of(v)});
        }
    }
    *this = LinearProgram(build(rows, std::move(columns)), std::move(rhs), std::move(objective));
}

LinearProgram LinearProgram::from_columns(std::size_t rows, const std::vector<std::vector<SparseEntry>>& columns,
                                          std::vector<Rational> rhs, std::vector<Rational> objective) {
    if (rows == 0 || columns.empty()) throw Error(ErrorCode::DimensionMismatch, "empty program");
    std::vector<std::vector<Entry>> sparse(columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        for (const auto& e : columns[j]) {
            if (e.row >= rows) throw Error(ErrorCode::DimensionMismatch, "row index out of range");
            if (sgn(e.value) != 0) sparse[j].push_back({e.row, e.value, unit_of(e.value)});
        }
        std::sort(sparse[j].begin(), sparse[j].end(), [](const Entry& x, const Entry& y) { return x.row < y.row; });
        for (std::size_t k = 1; k < sparse[j].size(); ++k) {
            if (sparse[j][k].row == sparse[j][k - 1].row) {
                throw Error(ErrorCode::DimensionMismatch, "duplicate row in column " + std::to_string(j));
            }
        }
    }
    return LinearProgram(build(rows, std::move(sparse)), std::move(rhs), std::move(objective));
}

LinearProgram LinearProgram::with_rhs(std::vector<Rational> rhs) const {
    return LinearProgram(constraints_, std::move(rhs), objective_);
}

LinearProgram LinearProgram::select_columns(std::span<const std::size_t> keep) const {
    std::vector<std::vector<Entry>> columns;
    std::vector<Rational> objective;
    columns.reserve(keep.size());
    for (std::size_t j : keep) {
        if (j >= cols()) throw Error(ErrorCode::DimensionMismatch, "column index out of range");
        columns.emplace_back(constraints_->columns[j]);
        objective.push_back(objective_[j]);
    }
    if (columns.empty()) throw Error(ErrorCode::DimensionMismatch, "empty program");
    return LinearProgram(build(rows(), std::move(columns)), rhs_, std::move(objective));
}

Rational LinearProgram::coefficient(std::size_t row, std::size_t col) const {
    for (const auto& e : column(col)) {
        if (e.row == row) return e.value;
    }
    return 0;
}

std::vector<std::size_t> support(std::span<const Rational> point) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < point.size(); ++j) {
        if (sgn(point[j]) != 0) out.push_back(j);
    }
    return out;
}

namespace {

// Integer arithmetic for the basis-inverse side of the simplex. The int64
// flavor is checked and throws Overflow; solve() then reruns on mpz.
struct Overflow {};

struct Int64Arith {
    using T = std::int64_t;

    static T narrow(__int128 v) {
        if (v > INT64_MAX || v < -INT64_MAX) throw Overflow{};
        return static_cast<T>(v);
    }
    static T from(const mpz_class& v) {
        if (!v.fits_slong_p()) throw Overflow{};
        return v.get_si();
    }
    static T from_entry(const LinearProgram::IntegerEntry& e) {
        if (e.small == 0) throw Overflow{};
        return e.small;
    }
    static int sign(T v) { return (v > 0) - (v < 0); }
    static mpz_class to_mpz(T v) { return mpz_class(static_cast<long>(v)); }
    static void addmul(T& acc, T a, T b) {
        T product;
        if (__builtin_mul_overflow(a, b, &product) || __builtin_add_overflow(acc, product, &acc)) throw Overflow{};
    }
    static T mul(T a, T b) {
        T out;
        if (__builtin_mul_overflow(a, b, &out)) throw Overflow{};
        return out;
    }
    static T sub(T a, T b) {
        T out;
        if (__builtin_sub_overflow(a, b, &out)) throw Overflow{};
        return out;
    }
    // (target * pivot - coef * source) / det, exact.
    static T cross_div(T target, T pivot, T coef, T source, T det) {
        T x, y, d;
        if (!__builtin_mul_overflow(target, pivot, &x) && !__builtin_mul_overflow(coef, source, &y) &&
            !__builtin_sub_overflow(x, y, &d)) {
            return det == 1 ? d : d / det;
        }
        const __int128 v = static_cast<__int128>(target) * pivot - static_cast<__int128>(coef) * source;
        return narrow(v / det);
    }
    static void mul_into(mpz_class& out, const mpz_class& x, T v) { mpz_mul_si(out.get_mpz_t(), x.get_mpz_t(), v); }
    static void submul_into(mpz_class& acc, const mpz_class& x, T v) {
        if (v >= 0) {
            mpz_submul_ui(acc.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(v));
        } else {
            mpz_addmul_ui(acc.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(-v));
        }
    }
    static void divexact_into(mpz_class& out, const mpz_class& x, T det) {
        mpz_divexact_ui(out.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(det));
    }
};

struct MpzArith {
    using T = mpz_class;

    static T from(const mpz_class& v) { return v; }
    static T from_entry(const LinearProgram::IntegerEntry& e) { return e.value; }
    static int sign(const T& v) { return sgn(v); }
    static mpz_class to_mpz(const T& v) { return v; }
    static void addmul(T& acc, const T& a, const T& b) { mpz_addmul(acc.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t()); }
    static T mul(const T& a, const T& b) { return a * b; }
    static T sub(const T& a, const T& b) { return a - b; }
    static T cross_div(const T& target, const T& pivot, const T& coef, const T& source, const T& det) {
        mpz_class t = target * pivot;
        mpz_submul(t.get_mpz_t(), coef.get_mpz_t(), source.get_mpz_t());
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), det.get_mpz_t());
        return t;
    }
    static void mul_into(mpz_class& out, const mpz_class& x, const T& v) { out = x * v; }
    static void submul_into(mpz_class& acc, const mpz_class& x, const T& v) {
        mpz_submul(acc.get_mpz_t(), x.get_mpz_t(), v.get_mpz_t());
    }
    static void divexact_into(mpz_class& out, const mpz_class& x, const T& det) {
        mpz_divexact(out.get_mpz_t(), x.get_mpz_t(), det.get_mpz_t());
    }
};

// Revised simplex in integer-preserving form. With the rows of A scaled to
// integers and b scaled by a common factor L, the state is
//   det     = |det B| (kept positive)
//   adj     = det * B^-1, an integer matrix
//   xb      = adj * b_int, so the basic values are xb / (det * L).
// Each pivot updates adj and xb with exact integer divisions by the old
// determinant, so no gcd work happens inside the loop.
//
// Variables 0..n-1 are structural, n..n+m-1 the phase-one artificials.
// Rows whose scaled rhs is negative are negated so the all-artificial basis
// starts feasible.
template <typename Arith>
class IntegerSimplex {
    using T = typename Arith::T;

public:
    explicit IntegerSimplex(const LinearProgram& lp)
        : lp_(&lp), m_(lp.rows()), n_(lp.cols()), row_sign_(m_, 1), basis_(m_), position_(n_ + m_, -1),
          adj_(m_ * m_, T(0)), xb_(m_), det_(1) {
        std::vector<Rational> scaled_rhs;
        scaled_rhs.reserve(m_);
        for (std::size_t i = 0; i < m_; ++i) scaled_rhs.push_back(lp.rhs()[i] * lp.row_scale(i));
        rhs_scale_ = lcm_of_denominators(scaled_rhs);
        for (std::size_t i = 0; i < m_; ++i) {
            Rational v = scaled_rhs[i] * rhs_scale_;
            xb_[i] = v.get_num();
            if (sgn(xb_[i]) < 0) {
                row_sign_[i] = -1;
                xb_[i] = -xb_[i];
            }
            adj_[i * m_ + i] = T(1);
            basis_[i] = n_ + i;
            position_[n_ + i] = static_cast<int>(i);
        }
        cost_scale_ = lcm_of_denominators(lp.objective());
        integer_cost_.reserve(n_);
        for (const auto& c : lp.objective()) integer_cost_.push_back(Arith::from(Rational(c * cost_scale_).get_num()));
        columns_.resize(n_);
        for (std::size_t j = 0; j < n_; ++j) {
            for (const auto& e : lp.integer_column(j)) {
                T a = Arith::from_entry(e);
                if (row_sign_[e.row] < 0) a = Arith::sub(T(0), a);
                columns_[j].push_back({e.row, std::move(a)});
            }
        }
    }

    LpStatus run() {
        phase_two_ = false;
        iterate();
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] >= n_ && sgn(xb_[i]) != 0) return LpStatus::infeasible;
        }
        drive_out_artificials();
        phase_two_ = true;
        return iterate() ? LpStatus::optimal : LpStatus::unbounded;
    }

    LpSolution solution() const {
        LpSolution sol;
        sol.status = LpStatus::optimal;
        sol.point.assign(n_, Rational(0));
        const mpz_class det = Arith::to_mpz(det_);
        const mpz_class value_scale = det * rhs_scale_;
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) {
                Rational x(xb_[i], value_scale);
                x.canonicalize();
                sol.point[basis_[i]] = std::move(x);
                sol.basis.push_back(basis_[i]);
            }
        }
        std::sort(sol.basis.begin(), sol.basis.end());
        sol.value = 0;
        for (std::size_t j = 0; j < n_; ++j) {
            if (sgn(sol.point[j]) != 0) sol.value += lp_->objective()[j] * sol.point[j];
        }

        const std::vector<T> y = scaled_duals();
        const mpz_class dual_scale = det * cost_scale_;
        sol.reduced_costs.reserve(n_);
        for (std::size_t j = 0; j < n_; ++j) {
            Rational d(Arith::to_mpz(scaled_reduced_cost(j, y)), dual_scale);
            d.canonicalize();
            sol.reduced_costs.push_back(std::move(d));
        }
        sol.duals.reserve(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            Rational yi(Arith::to_mpz(y[i]) * row_sign_[i], dual_scale);
            yi.canonicalize();
            sol.duals.push_back(yi * lp_->row_scale(i));
        }
        return sol;
    }

private:
    struct Coefficient {
        std::size_t row;
        T value;
    };

    // Phase-dependent integer cost; phase one charges 1 per artificial.
    T cost(std::size_t j) const {
        if (j >= n_) return T(phase_two_ ? 0 : 1);
        return phase_two_ ? integer_cost_[j] : T(0);
    }

    // det * (scaled costs of the basis) * B^-1.
    std::vector<T> scaled_duals() const {
        std::vector<T> y(m_, T(0));
        for (std::size_t i = 0; i < m_; ++i) {
            const T c = cost(basis_[i]);
            if (Arith::sign(c) == 0) continue;
            const T* row = &adj_[i * m_];
            for (std::size_t k = 0; k < m_; ++k) {
                if (Arith::sign(row[k]) != 0) Arith::addmul(y[k], c, row[k]);
            }
        }
        return y;
    }

    // weights . (sign-normalized integer column j)
    T column_dot(std::size_t j, const T* weights) const {
        if (j >= n_) return weights[j - n_];
        T acc(0);
        for (const auto& e : columns_[j]) {
            if (Arith::sign(weights[e.row]) != 0) Arith::addmul(acc, weights[e.row], e.value);
        }
        return acc;
    }

    // Reduced cost times det * cost_scale; same sign as the true reduced cost.
    T scaled_reduced_cost(std::size_t j, const std::vector<T>& y) const {
        return Arith::sub(Arith::mul(det_, cost(j)), column_dot(j, y.data()));
    }

    // det * B^-1 A_j.
    std::vector<T> entering_column(std::size_t j) const {
        std::vector<T> col;
        col.reserve(m_);
        for (std::size_t i = 0; i < m_; ++i) col.push_back(column_dot(j, &adj_[i * m_]));
        return col;
    }

    // Minimum ratio xb_i / col_i over col_i > 0; ties go to the smallest basic index.
    std::optional<std::size_t> leaving_row(const std::vector<T>& col) {
        std::optional<std::size_t> best;
        for (std::size_t i = 0; i < m_; ++i) {
            if (Arith::sign(col[i]) <= 0) continue;
            if (!best) {
                best = i;
                continue;
            }
            Arith::mul_into(lhs_, xb_[i], col[*best]);
            Arith::mul_into(rhs_, xb_[*best], col[i]);
            const int c = cmp(lhs_, rhs_);
            if (c < 0 || (c == 0 && basis_[i] < basis_[*best])) best = i;
        }
        return best;
    }

    void pivot(std::size_t r, std::size_t entering, const std::vector<T>& col) {
        const T pivot_value = col[r];
        const bool scale_rows = pivot_value != det_;
        const T* pivot_row = &adj_[r * m_];
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            const bool touched = Arith::sign(col[i]) != 0;
            if (!touched && !scale_rows) continue;
            T* row = &adj_[i * m_];
            for (std::size_t k = 0; k < m_; ++k) {
                if (Arith::sign(row[k]) == 0 && (!touched || Arith::sign(pivot_row[k]) == 0)) continue;
                row[k] = Arith::cross_div(row[k], pivot_value, col[i], pivot_row[k], det_);
            }
            Arith::mul_into(lhs_, xb_[i], pivot_value);
            if (touched) Arith::submul_into(lhs_, xb_[r], col[i]);
            Arith::divexact_into(xb_[i], lhs_, det_);
        }
        det_ = pivot_value;
        if (Arith::sign(det_) < 0) {
            det_ = Arith::sub(T(0), det_);
            for (auto& v : adj_) v = Arith::sub(T(0), v);
            for (auto& v : xb_) v = -v;
        }
        position_[basis_[r]] = -1;
        basis_[r] = entering;
        position_[entering] = static_cast<int>(r);
    }

    // Bland's rule: lowest-index improving column enters; the ratio test
    // breaks ties by lowest basic index. Returns false on an unbounded ray.
    bool iterate() {
        const std::size_t limit = phase_two_ ? n_ : n_ + m_;
        for (;;) {
            const std::vector<T> y = scaled_duals();
            std::optional<std::size_t> entering;
            for (std::size_t j = 0; j < limit; ++j) {
                if (position_[j] >= 0) continue;
                if (Arith::sign(scaled_reduced_cost(j, y)) < 0) {
                    entering = j;
                    break;
                }
            }
            if (!entering) return true;
            const std::vector<T> col = entering_column(*entering);
            const auto row = leaving_row(col);
            if (!row) return false;
            pivot(*row, *entering, col);
        }
    }

    // After a zero-infeasibility phase one, swap each artificial still in the
    // basis for any structural column with a nonzero entry in its row. A row
    // with no such column is redundant; its artificial stays basic at zero and
    // never leaves because that row of B^-1 A stays zero.
    void drive_out_artificials() {
        for (std::size_t r = 0; r < m_; ++r) {
            if (basis_[r] < n_) continue;
            for (std::size_t j = 0; j < n_; ++j) {
                if (position_[j] >= 0) continue;
                if (Arith::sign(column_dot(j, &adj_[r * m_])) == 0) continue;
                pivot(r, j, entering_column(j));
                break;
            }
        }
    }

    const LinearProgram* lp_;
    std::size_t m_;
    std::size_t n_;
    std::vector<int> row_sign_;
    std::vector<std::size_t> basis_;
    std::vector<int> position_;
    std::vector<std::vector<Coefficient>> columns_;
    std::vector<T> adj_;
    std::vector<mpz_class> xb_;
    T det_;
    mpz_class rhs_scale_;
    mpz_class cost_scale_;
    std::vector<T> integer_cost_;
    mpz_class lhs_;
    mpz_class rhs_;
    bool phase_two_ = false;
};

template <typename Arith>
LpSolution run_simplex(const LinearProgram& lp) {
    IntegerSimplex<Arith> simplex(lp);
    const LpStatus status = simplex.run();
    if (status != LpStatus::optimal) {
        LpSolution sol;
        sol.status = status;
        return sol;
    }
    return simplex.solution();
}

std::optional<LpSolution> solve_restricted(const LinearProgram& lp, const std::vector<std::size_t>& columns) {
    if (columns.empty()) return std::nullopt;
    const LpSolution sub = solve(lp.select_columns(columns));
    if (sub.status != LpStatus::optimal) return std::nullopt;
    LpSolution out;
    out.status = LpStatus::optimal;
    out.value = sub.value;
    out.point.assign(lp.cols(), Rational(0));
    for (std::size_t k = 0; k < columns.size(); ++k) out.point[columns[k]] = sub.point[k];
    for (std::size_t k : sub.basis) out.basis.push_back(columns[k]);
    std::sort(out.basis.begin(), out.basis.end());
    return out;
}

}  // namespace

LpSolution solve(const LinearProgram& lp, LpArithmetic arithmetic) {
    if (arithmetic == LpArithmetic::multiprecision) return run_simplex<MpzArith>(lp);
    try {
        return run_simplex<Int64Arith>(lp);
    } catch (const Overflow&) {
        return run_simplex<MpzArith>(lp);
    }
}

std::optional<LpSolution> find_alternative_vertex(const LinearProgram& lp, const LpSolution& known,
                                                  const AlternativeSearch& search) {
    if (known.status != LpStatus::optimal) {
        throw Error(ErrorCode::BadParameter, "alternative search needs an optimal solution");
    }
    if (known.point.size() != lp.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "known solution does not match the program");
    }
    const LpSolution reference = solve(lp);
    if (reference.status != LpStatus::optimal) {
        throw Error(ErrorCode::BadParameter, "program has no optimal solution");
    }
    // The reference duals certify any point on the optimal face.
    auto certified = [&reference](LpSolution alt) {
        alt.duals = reference.duals;
        alt.reduced_costs = reference.reduced_costs;
        return std::optional<LpSolution>(std::move(alt));
    };

    // Optimal dual reduced costs pin the optimal face: every optimal point
    // lives on the zero-reduced-cost columns, and every feasible point there
    // is optimal. A basic solution of a column subset is a vertex of the full
    // program, and distinct vertices never have nested supports, so dropping
    // one support column at a time finds another vertex iff one exists.
    std::vector<std::size_t> face;
    for (std::size_t j = 0; j < lp.cols(); ++j) {
        if (sgn(reference.reduced_costs[j]) == 0) face.push_back(j);
    }
    const std::vector<std::size_t> known_support = support(known.point);
    auto without = [&face](const std::vector<std::size_t>& drop) {
        std::vector<std::size_t> kept;
        std::set_difference(face.begin(), face.end(), drop.begin(), drop.end(), std::back_inserter(kept));
        return kept;
    };

    if (search.prefer_disjoint) {
        if (auto alt = solve_restricted(lp, without(known_support))) return certified(std::move(*alt));
    }
    for (std::size_t k : known_support) {
        if (auto alt = solve_restricted(lp, without({k}))) return certified(std::move(*alt));
    }
    return std::nullopt;
}

}  // namespace boxlab
