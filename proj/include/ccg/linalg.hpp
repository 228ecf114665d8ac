// Exact integer linear algebra: Smith normal form, determinants, kernels,
// and row-lattice queries. All entries are arbitrary-precision integers.
#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "ccg/rational.hpp"

namespace ccg {

struct IntegerMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<Int> a;  // row-major

    IntegerMatrix() = default;
    IntegerMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {
        if (r < 0 || c < 0) throw error("matrix dimensions must be nonnegative");
    }
    IntegerMatrix(int r, int c, std::vector<Int> entries)
        : rows(r), cols(c), a(std::move(entries)) {
        if (r < 0 || c < 0 || a.size() != static_cast<std::size_t>(r) * c)
            throw error("matrix entry count does not match dimensions");
    }

    Int& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    const Int& at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

    static IntegerMatrix identity(int n) {
        IntegerMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    bool operator==(const IntegerMatrix& o) const {
        return rows == o.rows && cols == o.cols && a == o.a;
    }

    IntegerMatrix transposed() const {
        IntegerMatrix t(cols, rows);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) t.at(c, r) = at(r, c);
        return t;
    }
};

inline IntegerMatrix multiply(const IntegerMatrix& x, const IntegerMatrix& y) {
    if (x.cols != y.rows) throw error("matrix product dimension mismatch");
    IntegerMatrix z(x.rows, y.cols);
    for (int r = 0; r < x.rows; ++r)
        for (int k = 0; k < x.cols; ++k) {
            if (x.at(r, k) == 0) continue;
            for (int c = 0; c < y.cols; ++c) z.at(r, c) += x.at(r, k) * y.at(k, c);
        }
    return z;
}

/// Exact determinant by fraction-free (Bareiss) elimination.
inline Int determinant(const IntegerMatrix& m) {
    if (m.rows != m.cols) throw error("determinant requires a square matrix");
    int n = m.rows;
    if (n == 0) return 1;
    IntegerMatrix w = m;
    Int sign = 1, prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (w.at(k, k) == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (w.at(i, k) != 0) {
                    p = i;
                    break;
                }
            if (p < 0) return 0;
            for (int c = 0; c < n; ++c) std::swap(w.at(k, c), w.at(p, c));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                w.at(i, j) = (w.at(i, j) * w.at(k, k) - w.at(i, k) * w.at(k, j)) / prev;
        prev = w.at(k, k);
    }
    return sign * w.at(n - 1, n - 1);
}

/// U * A * V = D with U, V unimodular and D diagonal, d1 | d2 | ... , di >= 0.
struct SNFResult {
    IntegerMatrix u;
    IntegerMatrix d;
    IntegerMatrix v;

    /// Number of nonzero diagonal entries (the rank of A over Q).
    int rank() const {
        int r = 0;
        int n = std::min(d.rows, d.cols);
        while (r < n && d.at(r, r) != 0) ++r;
        return r;
    }

    std::vector<Int> diagonal() const {
        std::vector<Int> out;
        int n = std::min(d.rows, d.cols);
        for (int i = 0; i < n; ++i) out.push_back(d.at(i, i));
        return out;
    }
};

namespace detail {

inline void snf_row_add(IntegerMatrix& m, int dst, int src, const Int& q) {
    for (int c = 0; c < m.cols; ++c) m.at(dst, c) += q * m.at(src, c);
}
inline void snf_col_add(IntegerMatrix& m, int dst, int src, const Int& q) {
    for (int r = 0; r < m.rows; ++r) m.at(r, dst) += q * m.at(r, src);
}
inline void snf_row_swap(IntegerMatrix& m, int i, int j) {
    for (int c = 0; c < m.cols; ++c) std::swap(m.at(i, c), m.at(j, c));
}
inline void snf_col_swap(IntegerMatrix& m, int i, int j) {
    for (int r = 0; r < m.rows; ++r) std::swap(m.at(r, i), m.at(r, j));
}

}  // namespace detail

/// Smith normal form. Pivoting picks the smallest nonzero absolute value in the
/// working submatrix, scanning row-major, so the output is deterministic.
/// Postconditions (u*a*v == d, unimodularity, divisibility chain) are checked
/// on every call; a failure indicates a bug and throws std::logic_error.
inline SNFResult smith_normal_form(const IntegerMatrix& input) {
    const int m = input.rows, n = input.cols;
    SNFResult res;
    res.d = input;
    res.u = IntegerMatrix::identity(m);
    res.v = IntegerMatrix::identity(n);
    IntegerMatrix& d = res.d;
    IntegerMatrix& u = res.u;
    IntegerMatrix& v = res.v;

    const int steps = std::min(m, n);
    for (int t = 0; t < steps; ++t) {
        for (;;) {
            // Locate smallest nonzero |entry| in d[t.., t..].
            int pr = -1, pc = -1;
            Int best = 0;
            for (int r = t; r < m; ++r)
                for (int c = t; c < n; ++c) {
                    const Int& x = d.at(r, c);
                    if (x == 0) continue;
                    Int ax = x < 0 ? Int(-x) : x;
                    if (pr < 0 || ax < best) {
                        best = ax;
                        pr = r;
                        pc = c;
                    }
                }
            if (pr < 0) {
                pr = -2;  // submatrix is zero
            }
            if (pr == -2) break;
            if (pr != t) {
                detail::snf_row_swap(d, t, pr);
                detail::snf_row_swap(u, t, pr);
            }
            if (pc != t) {
                detail::snf_col_swap(d, t, pc);
                detail::snf_col_swap(v, t, pc);
            }

            bool dirty = false;
            for (int r = t + 1; r < m; ++r) {
                if (d.at(r, t) == 0) continue;
                Int q = d.at(r, t) / d.at(t, t);  // truncated: |remainder| < |pivot|
                if (q != 0) {
                    detail::snf_row_add(d, r, t, -q);
                    detail::snf_row_add(u, r, t, -q);
                }
                if (d.at(r, t) != 0) dirty = true;
            }
            if (dirty) continue;
            for (int c = t + 1; c < n; ++c) {
                if (d.at(t, c) == 0) continue;
                Int q = d.at(t, c) / d.at(t, t);
                if (q != 0) {
                    detail::snf_col_add(d, c, t, -q);
                    detail::snf_col_add(v, c, t, -q);
                }
                if (d.at(t, c) != 0) dirty = true;
            }
            if (dirty) continue;

            // Pivot must divide the remaining submatrix for the divisibility chain.
            bool fixed = true;
            for (int r = t + 1; r < m && fixed; ++r)
                for (int c = t + 1; c < n && fixed; ++c)
                    if (d.at(r, c) % d.at(t, t) != 0) {
                        detail::snf_row_add(d, t, r, 1);
                        detail::snf_row_add(u, t, r, 1);
                        fixed = false;
                    }
            if (fixed) break;
        }
        if (d.at(t, t) == 0) break;
    }

    for (int i = 0; i < steps; ++i) {
        if (d.at(i, i) < 0) {
            for (int c = 0; c < n; ++c) d.at(i, c) = -d.at(i, c);
            for (int c = 0; c < m; ++c) u.at(i, c) = -u.at(i, c);
        }
    }

    // Always-on postcondition check: exact and cheap at the sizes we handle.
    if (!(multiply(multiply(u, input), v) == d))
        throw std::logic_error("smith_normal_form: U*A*V != D");
    Int du = determinant(u), dv = determinant(v);
    if ((du != 1 && du != -1) || (dv != 1 && dv != -1))
        throw std::logic_error("smith_normal_form: transform not unimodular");
    for (int i = 0; i + 1 < steps; ++i) {
        const Int& a = d.at(i, i);
        const Int& b = d.at(i + 1, i + 1);
        if (a == 0 && b != 0) throw std::logic_error("smith_normal_form: zero ordering");
        if (a != 0 && b % a != 0) throw std::logic_error("smith_normal_form: divisibility chain");
    }
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < n; ++c)
            if (r != c && d.at(r, c) != 0) throw std::logic_error("smith_normal_form: not diagonal");
    return res;
}

/// Inverse of a unimodular integer matrix (integral by definition).
inline IntegerMatrix unimodular_inverse(const IntegerMatrix& m) {
    if (m.rows != m.cols) throw error("inverse requires a square matrix");
    const int n = m.rows;
    // Gauss-Jordan over exact rationals, then read back integer entries.
    std::vector<std::vector<Rat>> w(n, std::vector<Rat>(2 * n));
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) w[r][c] = Rat(m.at(r, c));
        w[r][n + r] = 1;
    }
    for (int col = 0; col < n; ++col) {
        int p = -1;
        for (int r = col; r < n; ++r)
            if (w[r][col] != 0) {
                p = r;
                break;
            }
        if (p < 0) throw error("matrix is singular");
        std::swap(w[col], w[p]);
        Rat inv = Rat(1) / w[col][col];
        for (int c = 0; c < 2 * n; ++c) w[col][c] *= inv;
        for (int r = 0; r < n; ++r) {
            if (r == col || w[r][col] == 0) continue;
            Rat f = w[r][col];
            for (int c = 0; c < 2 * n; ++c) w[r][c] -= f * w[col][c];
        }
    }
    IntegerMatrix out(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            const Rat& x = w[r][n + c];
            if (denominator(x) != 1) throw error("matrix is not unimodular");
            out.at(r, c) = numerator(x);
        }
    if (!(multiply(m, out) == IntegerMatrix::identity(n)))
        throw std::logic_error("unimodular_inverse: M*M^-1 != I");
    return out;
}

/// Rank over Q, read off the Smith normal form.
inline int rational_rank(const IntegerMatrix& m) { return smith_normal_form(m).rank(); }

/// Basis of the right kernel { x : M x = 0 }, returned as rows.
inline IntegerMatrix integer_kernel(const IntegerMatrix& m) {
    SNFResult s = smith_normal_form(m);
    int r = s.rank();
    IntegerMatrix out(m.cols - r, m.cols);
    for (int i = r; i < m.cols; ++i)
        for (int j = 0; j < m.cols; ++j) out.at(i - r, j) = s.v.at(j, i);
    return out;
}

/// Queries against the lattice generated by the rows of a fixed matrix.
/// Precomputes one Smith decomposition; membership, canonical residues and
/// coordinate solves are then a matrix-vector product each.
class RowLattice {
  public:
    explicit RowLattice(IntegerMatrix generators)
        : gens_(std::move(generators)), snf_(smith_normal_form(gens_)) {
        rank_ = snf_.rank();
        uinv_ = unimodular_inverse(snf_.u);
        vinv_ = unimodular_inverse(snf_.v);
    }

    int ambient_dim() const { return gens_.cols; }
    int rank() const { return rank_; }
    const IntegerMatrix& generators() const { return gens_; }

    /// x is in the lattice iff x*V has coordinate i divisible by d_i (zero where d_i = 0).
    bool contains(const std::vector<Int>& x) const {
        std::vector<Int> w = mul_row(x, snf_.v);
        for (int i = 0; i < gens_.cols; ++i) {
            if (i < rank_) {
                if (w[i] % snf_.d.at(i, i) != 0) return false;
            } else if (w[i] != 0) {
                return false;
            }
        }
        return true;
    }

    /// Canonical representative of x modulo the lattice; equal cosets reduce equally.
    std::vector<Int> reduce(const std::vector<Int>& x) const {
        std::vector<Int> w = mul_row(x, snf_.v);
        for (int i = 0; i < rank_; ++i) w[i] = mod_floor(w[i], snf_.d.at(i, i));
        return mul_row(w, vinv_);
    }

    /// Integer y with y * generators == x, if one exists.
    std::optional<std::vector<Int>> solve(const std::vector<Int>& x) const {
        std::vector<Int> w = mul_row(x, snf_.v);
        std::vector<Int> z(gens_.rows, Int(0));
        for (int i = 0; i < gens_.cols; ++i) {
            if (i < rank_) {
                if (w[i] % snf_.d.at(i, i) != 0) return std::nullopt;
                z[i] = w[i] / snf_.d.at(i, i);
            } else if (w[i] != 0) {
                return std::nullopt;
            }
        }
        return mul_row(z, uinv_);
    }

  private:
    static std::vector<Int> mul_row(const std::vector<Int>& x, const IntegerMatrix& m) {
        if (static_cast<int>(x.size()) != m.rows) throw error("row-vector product size mismatch");
        std::vector<Int> out(m.cols, Int(0));
        for (int r = 0; r < m.rows; ++r) {
            if (x[r] == 0) continue;
            for (int c = 0; c < m.cols; ++c) out[c] += x[r] * m.at(r, c);
        }
        return out;
    }

    IntegerMatrix gens_;
    SNFResult snf_;
    int rank_ = 0;
    IntegerMatrix uinv_;
    IntegerMatrix vinv_;
};

/// Two row lattices are equal iff each contains the other's generators.
inline bool lattice_equal(const RowLattice& a, const RowLattice& b) {
    if (a.ambient_dim() != b.ambient_dim()) return false;
    auto rows_of = [](const IntegerMatrix& m, int r) {
        std::vector<Int> row(m.cols);
        for (int c = 0; c < m.cols; ++c) row[c] = m.at(r, c);
        return row;
    };
    for (int r = 0; r < a.generators().rows; ++r)
        if (!b.contains(rows_of(a.generators(), r))) return false;
    for (int r = 0; r < b.generators().rows; ++r)
        if (!a.contains(rows_of(b.generators(), r))) return false;
    return true;
}

}  // namespace ccg
