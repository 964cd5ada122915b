#include "oracle.hpp"

#include <array>
#include <functional>

namespace oracle {

std::vector<Rational> chsh_values(const Box& box) {
    std::vector<Rational> E;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            Rational e = 0;
            for (int A = 0; A < 2; ++A) {
                for (int B = 0; B < 2; ++B) e += ((A + B) % 2 == 0 ? 1 : -1) * P(box, a, b, A, B);
            }
            E.push_back(e);
        }
    }
    std::vector<Rational> out;
    for (int k = 0; k < 4; ++k) {
        Rational sum = 0;
        for (int j = 0; j < 4; ++j) sum += (j == k ? -1 : 1) * E[j];
        out.push_back(sgn(sum) < 0 ? Rational(-sum) : sum);
    }
    return out;
}

Rational signal_AtoB(const Box& box) {
    Rational best = 0;
    for (int b = 0; b < 2; ++b) {
        Rational d = (P(box, 0, b, 0, 0) + P(box, 0, b, 1, 0)) - (P(box, 1, b, 0, 0) + P(box, 1, b, 1, 0));
        if (sgn(d) < 0) d = -d;
        if (d > best) best = d;
    }
    return best;
}

Rational signal_BtoA(const Box& box) {
    Rational best = 0;
    for (int a = 0; a < 2; ++a) {
        Rational d = (P(box, a, 0, 0, 0) + P(box, a, 0, 0, 1)) - (P(box, a, 1, 0, 0) + P(box, a, 1, 0, 1));
        if (sgn(d) < 0) d = -d;
        if (d > best) best = d;
    }
    return best;
}

int alice_output(int id, int a, int b) { return (id >> (4 + 3 - (2 * a + b))) & 1; }
int bob_output(int id, int a, int b) { return (id >> (3 - (2 * a + b))) & 1; }

int cost_bits_from_box(const Box& box) {
    auto out_A = [&](int a, int b) { return P(box, a, b, 1, 0) + P(box, a, b, 1, 1) == 1 ? 1 : 0; };
    auto out_B = [&](int a, int b) { return P(box, a, b, 0, 1) + P(box, a, b, 1, 1) == 1 ? 1 : 0; };
    bool a_needs_b = false, b_needs_a = false;
    for (int x = 0; x < 2; ++x) {
        a_needs_b = a_needs_b || out_A(x, 0) != out_A(x, 1);
        b_needs_a = b_needs_a || out_B(0, x) != out_B(1, x);
    }
    return int(a_needs_b) + int(b_needs_a);
}

std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> M, std::vector<Rational> r) {
    const std::size_t n = M.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && sgn(M[pivot][col]) == 0) ++pivot;
        if (pivot == n) return std::nullopt;
        std::swap(M[pivot], M[col]);
        std::swap(r[pivot], r[col]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || sgn(M[i][col]) == 0) continue;
            const Rational f = M[i][col] / M[col][col];
            for (std::size_t k = col; k < n; ++k) M[i][k] -= f * M[col][k];
            r[i] -= f * r[col];
        }
    }
    std::vector<Rational> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = r[i] / M[i][i];
    return x;
}

std::size_t rank(std::vector<std::vector<Rational>> M) {
    if (M.empty()) return 0;
    const std::size_t rows = M.size(), cols = M[0].size();
    std::size_t r = 0;
    for (std::size_t col = 0; col < cols && r < rows; ++col) {
        std::size_t pivot = r;
        while (pivot < rows && sgn(M[pivot][col]) == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(M[pivot], M[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (sgn(M[i][col]) == 0) continue;
            const Rational f = M[i][col] / M[r][col];
            for (std::size_t k = col; k < cols; ++k) M[i][k] -= f * M[r][k];
        }
        ++r;
    }
    return r;
}

namespace {

// Rows that span the row space, chosen greedily in order.
std::vector<std::size_t> independent_rows(const std::vector<std::vector<Rational>>& A) {
    std::vector<std::size_t> keep;
    std::vector<std::vector<Rational>> chosen;
    for (std::size_t i = 0; i < A.size(); ++i) {
        chosen.push_back(A[i]);
        if (rank(chosen) == chosen.size()) {
            keep.push_back(i);
        } else {
            chosen.pop_back();
        }
    }
    return keep;
}

void subsets(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& visit) {
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    if (k > n) return;
    for (;;) {
        visit(pick);
        std::size_t i = k;
        while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
        if (i == 0) return;
        ++pick[i - 1];
        for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
}

std::vector<std::vector<Rational>> basic_feasible_points(const std::vector<std::vector<Rational>>& A,
                                                         const std::vector<Rational>& b, bool& consistent) {
    const std::size_t n = A.empty() ? 0 : A[0].size();
    const auto rows = independent_rows(A);
    // Consistency: appending b as a column must not raise the rank.
    std::vector<std::vector<Rational>> augmented = A;
    for (std::size_t i = 0; i < A.size(); ++i) augmented[i].push_back(b[i]);
    consistent = rank(augmented) == rows.size();
    std::vector<std::vector<Rational>> points;
    if (!consistent) return points;
    const std::size_t r = rows.size();
    if (r == 0) {
        points.emplace_back(n, Rational(0));
        return points;
    }
    subsets(n, r, [&](const std::vector<std::size_t>& cols) {
        std::vector<std::vector<Rational>> M(r, std::vector<Rational>(r));
        std::vector<Rational> rhs(r);
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t j = 0; j < r; ++j) M[i][j] = A[rows[i]][cols[j]];
            rhs[i] = b[rows[i]];
        }
        const auto x = solve_square(M, rhs);
        if (!x) return;
        for (const auto& v : *x) {
            if (sgn(v) < 0) return;
        }
        std::vector<Rational> point(n, Rational(0));
        for (std::size_t j = 0; j < r; ++j) point[cols[j]] = (*x)[j];
        for (const auto& p : points) {
            if (p == point) return;
        }
        points.push_back(std::move(point));
    });
    return points;
}

Rational dot(const std::vector<Rational>& x, const std::vector<Rational>& y) {
    Rational s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

}  // namespace

VertexOptimum enumerate_vertices(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& b,
                                 const std::vector<Rational>& c) {
    VertexOptimum out;
    bool consistent = false;
    const auto points = basic_feasible_points(A, b, consistent);
    if (points.empty()) return out;
    out.feasible = true;

    // Rays d >= 0 with A d = 0 normalized by sum d = 1 form a polytope whose
    // vertices are the extreme rays.
    std::vector<std::vector<Rational>> ray_rows = A;
    ray_rows.emplace_back(c.size(), Rational(1));
    std::vector<Rational> ray_rhs(A.size(), Rational(0));
    ray_rhs.push_back(1);
    bool ray_consistent = false;
    for (const auto& d : basic_feasible_points(ray_rows, ray_rhs, ray_consistent)) {
        if (sgn(dot(c, d)) < 0) {
            out.bounded = false;
            return out;
        }
    }

    out.value = dot(c, points.front());
    for (const auto& p : points) {
        const Rational v = dot(c, p);
        if (v < out.value) out.value = v;
    }
    for (const auto& p : points) {
        if (dot(c, p) == out.value) out.optimal_vertices.push_back(p);
    }
    return out;
}

Certificate certify(const boxlab::LinearProgram& lp, const boxlab::LpSolution& sol) {
    Certificate cert;
    const std::size_t m = lp.rows(), n = lp.cols();
    if (sol.point.size() != n || sol.duals.size() != m) return cert;

    cert.primal_feasible = true;
    for (const auto& x : sol.point) cert.primal_feasible = cert.primal_feasible && sgn(x) >= 0;
    for (std::size_t i = 0; i < m; ++i) {
        Rational row = 0;
        for (std::size_t j = 0; j < n; ++j) row += lp.coefficient(i, j) * sol.point[j];
        cert.primal_feasible = cert.primal_feasible && row == lp.rhs()[i];
    }

    cert.dual_feasible = true;
    for (std::size_t j = 0; j < n; ++j) {
        Rational col = 0;
        for (std::size_t i = 0; i < m; ++i) col += lp.coefficient(i, j) * sol.duals[i];
        cert.dual_feasible = cert.dual_feasible && col <= lp.objective()[j];
    }

    Rational primal = 0, dual = 0;
    for (std::size_t j = 0; j < n; ++j) primal += lp.objective()[j] * sol.point[j];
    for (std::size_t i = 0; i < m; ++i) dual += lp.rhs()[i] * sol.duals[i];
    cert.gap_closed = primal == dual && primal == sol.value;
    return cert;
}

Box relabel(const Box& box, const boxlab::Relabeling& r) {
    using Table = std::array<std::array<std::array<std::array<Rational, 2>, 2>, 2>, 2>;
    Table t;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int A = 0; A < 2; ++A)
                for (int B = 0; B < 2; ++B) t[a][b][A][B] = P(box, a, b, A, B);

    Table u = t;
    if (r.swap_parties) {
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int A = 0; A < 2; ++A)
                    for (int B = 0; B < 2; ++B) u[a][b][A][B] = t[b][a][B][A];
    }
    Table v;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int A = 0; A < 2; ++A)
                for (int B = 0; B < 2; ++B) v[a][b][A][B] = u[a][b][A ^ r.flip_A[a]][B ^ r.flip_B[b]];
    Table w;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int A = 0; A < 2; ++A)
                for (int B = 0; B < 2; ++B) w[a][b][A][B] = v[a ^ r.flip_a][b ^ r.flip_b][A][B];

    Box::Entries e;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int A = 0; A < 2; ++A)
                for (int B = 0; B < 2; ++B) e[8 * a + 4 * b + 2 * A + B] = w[a][b][A][B];
    return Box::from_table(std::move(e));
}

}  // namespace oracle
