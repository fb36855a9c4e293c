#include "dtflow/exactlin.hpp"
#include "dtflow/errors.hpp"

#include <algorithm>
#include <cassert>

namespace dtflow {

IntMatrix IntMatrix::identity(size_t n) {
    IntMatrix m(n, n);
    for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_columns(size_t ambient, const std::vector<IntVec>& columns) {
    IntMatrix m(ambient, columns.size());
    for (size_t j = 0; j < columns.size(); ++j) {
        assert(columns[j].size() == ambient);
        for (size_t i = 0; i < ambient; ++i) m.at(i, j) = columns[j][i];
    }
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVec>& rows_in) {
    size_t c = rows_in.empty() ? 0 : rows_in[0].size();
    IntMatrix m(rows_in.size(), c);
    for (size_t i = 0; i < rows_in.size(); ++i) {
        assert(rows_in[i].size() == c);
        for (size_t j = 0; j < c; ++j) m.at(i, j) = rows_in[i][j];
    }
    return m;
}

IntVec IntMatrix::column(size_t j) const {
    IntVec v(rows);
    for (size_t i = 0; i < rows; ++i) v[i] = at(i, j);
    return v;
}

IntVec IntMatrix::apply(const IntVec& x) const {
    assert(x.size() == cols);
    IntVec y(rows);
    for (size_t i = 0; i < rows; ++i) {
        Int acc = 0;
        for (size_t j = 0; j < cols; ++j) acc += at(i, j) * x[j];
        y[i] = acc;
    }
    return y;
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
    assert(a.cols == b.rows);
    IntMatrix c(a.rows, b.cols);
    for (size_t i = 0; i < a.rows; ++i)
        for (size_t k = 0; k < a.cols; ++k) {
            if (a.at(i, k) == 0) continue;
            for (size_t j = 0; j < b.cols; ++j)
                c.at(i, j) += a.at(i, k) * b.at(k, j);
        }
    return c;
}

namespace {

struct SnfState {
    IntMatrix work, u, uinv, v;

    void swap_rows(size_t i, size_t k) {
        if (i == k) return;
        for (size_t j = 0; j < work.cols; ++j) std::swap(work.at(i, j), work.at(k, j));
        for (size_t j = 0; j < u.cols; ++j) std::swap(u.at(i, j), u.at(k, j));
        for (size_t j = 0; j < uinv.rows; ++j) std::swap(uinv.at(j, i), uinv.at(j, k));
    }

    void swap_cols(size_t i, size_t k) {
        if (i == k) return;
        for (size_t j = 0; j < work.rows; ++j) std::swap(work.at(j, i), work.at(j, k));
        for (size_t j = 0; j < v.rows; ++j) std::swap(v.at(j, i), v.at(j, k));
    }

    // row_i += q * row_k
    void add_row(size_t i, size_t k, const Int& q) {
        if (q == 0) return;
        for (size_t j = 0; j < work.cols; ++j) work.at(i, j) += q * work.at(k, j);
        for (size_t j = 0; j < u.cols; ++j) u.at(i, j) += q * u.at(k, j);
        // inverse of (I + q E_ik) is (I - q E_ik): col_k -= q * col_i in uinv
        for (size_t j = 0; j < uinv.rows; ++j) uinv.at(j, k) -= q * uinv.at(j, i);
    }

    // col_i += q * col_k
    void add_col(size_t i, size_t k, const Int& q) {
        if (q == 0) return;
        for (size_t j = 0; j < work.rows; ++j) work.at(j, i) += q * work.at(j, k);
        for (size_t j = 0; j < v.rows; ++j) v.at(j, i) += q * v.at(j, k);
    }

    void negate_row(size_t i) {
        for (size_t j = 0; j < work.cols; ++j) work.at(i, j) = -work.at(i, j);
        for (size_t j = 0; j < u.cols; ++j) u.at(i, j) = -u.at(i, j);
        for (size_t j = 0; j < uinv.rows; ++j) uinv.at(j, i) = -uinv.at(j, i);
    }
};

// floor division quotient, used so remainders land in [0, |b|)
Int fdiv(const Int& a, const Int& b) {
    Int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& m) {
    SnfState s{m, IntMatrix::identity(m.rows), IntMatrix::identity(m.rows),
               IntMatrix::identity(m.cols)};
    size_t n = std::min(m.rows, m.cols);

    for (size_t k = 0; k < n; ++k) {
        for (;;) {
            // pivot: minimal nonzero |entry| in the trailing submatrix,
            // keeps intermediate entries small
            size_t pi = k, pj = k;
            Int best = 0;
            for (size_t i = k; i < m.rows; ++i)
                for (size_t j = k; j < m.cols; ++j) {
                    const Int& e = s.work.at(i, j);
                    if (e == 0) continue;
                    Int a = abs_int(e);
                    if (best == 0 || a < best) { best = a; pi = i; pj = j; }
                }
            if (best == 0) goto done;
            s.swap_rows(pi, k);
            s.swap_cols(pj, k);

            bool clean = true;
            for (size_t i = k + 1; i < m.rows; ++i) {
                Int q = fdiv(s.work.at(i, k), s.work.at(k, k));
                s.add_row(i, k, -q);
                if (s.work.at(i, k) != 0) clean = false;
            }
            for (size_t j = k + 1; j < m.cols; ++j) {
                Int q = fdiv(s.work.at(k, j), s.work.at(k, k));
                s.add_col(j, k, -q);
                if (s.work.at(k, j) != 0) clean = false;
            }
            if (!clean) continue;

            // enforce the divisibility chain: fold in any entry the pivot
            // does not divide and re-reduce
            bool divides_all = true;
            for (size_t i = k + 1; i < m.rows && divides_all; ++i)
                for (size_t j = k + 1; j < m.cols; ++j)
                    if (s.work.at(i, j) % s.work.at(k, k) != 0) {
                        s.add_row(k, i, 1);
                        divides_all = false;
                        break;
                    }
            if (divides_all) break;
        }
        if (s.work.at(k, k) < 0) s.negate_row(k);
    }
done:
    SmithForm out;
    out.diagonal.resize(n);
    out.rank = 0;
    for (size_t k = 0; k < n; ++k) {
        out.diagonal[k] = s.work.at(k, k);
        if (out.diagonal[k] != 0) ++out.rank;
    }
    out.left = std::move(s.u);
    out.left_inv = std::move(s.uinv);
    out.right = std::move(s.v);
    return out;
}

Order cokernel_order(const IntMatrix& m) {
    SmithForm snf = smith_normal_form(m);
    if (snf.rank < m.rows) return Order::infinite();
    Int prod = 1;
    for (const auto& d : snf.diagonal) prod *= d;
    return Order{true, prod};
}

Sublattice kernel_basis(const IntMatrix& m) {
    SmithForm snf = smith_normal_form(m);
    Sublattice out{m.cols, {}};
    for (size_t j = snf.rank; j < m.cols; ++j)
        out.generators.push_back(snf.right.column(j));
    return out;
}

Sublattice saturate(const Sublattice& s) {
    IntMatrix g = IntMatrix::from_columns(s.ambient_rank, s.generators);
    SmithForm snf = smith_normal_form(g);
    Sublattice out{s.ambient_rank, {}};
    for (size_t i = 0; i < snf.rank; ++i)
        out.generators.push_back(snf.left_inv.column(i));
    return out;
}

Int index_in_saturation(const Sublattice& s) {
    IntMatrix g = IntMatrix::from_columns(s.ambient_rank, s.generators);
    SmithForm snf = smith_normal_form(g);
    if (snf.rank == 0) throw ZeroLatticeError{};
    Int prod = 1;
    for (size_t i = 0; i < snf.rank; ++i) prod *= snf.diagonal[i];
    return prod;
}

Sublattice lattice_sum(const Sublattice& a, const Sublattice& b) {
    assert(a.ambient_rank == b.ambient_rank);
    Sublattice out{a.ambient_rank, a.generators};
    out.generators.insert(out.generators.end(), b.generators.begin(), b.generators.end());
    return out;
}

Order lattice_sum_index(const Sublattice& a, const Sublattice& b) {
    Sublattice s = lattice_sum(a, b);
    return cokernel_order(IntMatrix::from_columns(s.ambient_rank, s.generators));
}

Sublattice lattice_intersection(const Sublattice& a, const Sublattice& b) {
    assert(a.ambient_rank == b.ambient_rank);
    size_t ka = a.generators.size();
    std::vector<IntVec> cols = a.generators;
    for (const auto& g : b.generators) cols.push_back(neg(g));
    IntMatrix m = IntMatrix::from_columns(a.ambient_rank, cols);
    Sublattice ker = kernel_basis(m);
    Sublattice out{a.ambient_rank, {}};
    for (const auto& x : ker.generators) {
        IntVec g(a.ambient_rank, Int(0));
        for (size_t j = 0; j < ka; ++j)
            for (size_t i = 0; i < a.ambient_rank; ++i)
                g[i] += a.generators[j][i] * x[j];
        if (!is_zero(g)) out.generators.push_back(g);
    }
    return out;
}

Int divisibility(const IntVec& v) {
    Int g = content(v);
    if (g == 0) throw ZeroVectorError{};
    return g;
}

Order quotient_cokernel_order(const IntMatrix& map, const std::vector<IntVec>& relations) {
    std::vector<IntVec> cols;
    cols.reserve(map.cols + relations.size());
    for (size_t j = 0; j < map.cols; ++j) cols.push_back(map.column(j));
    for (const auto& r : relations) {
        assert(r.size() == map.rows);
        cols.push_back(r);
    }
    return cokernel_order(IntMatrix::from_columns(map.rows, cols));
}

size_t lattice_rank(const Sublattice& s) {
    return smith_normal_form(IntMatrix::from_columns(s.ambient_rank, s.generators)).rank;
}

std::vector<IntVec> hermite_basis(const Sublattice& s) {
    IntMatrix b = IntMatrix::from_columns(s.ambient_rank, s.generators);
    size_t p = 0;  // next pivot column
    for (size_t r = 0; r < b.rows && p < b.cols; ++r) {
        // Euclid across columns p..end until row r has a single nonzero
        for (;;) {
            size_t jmin = b.cols;
            Int best = 0;
            for (size_t j = p; j < b.cols; ++j) {
                if (b.at(r, j) == 0) continue;
                Int a = abs_int(b.at(r, j));
                if (best == 0 || a < best) { best = a; jmin = j; }
            }
            if (jmin == b.cols) break;  // row r is zero on p..end
            if (jmin != p)
                for (size_t i = 0; i < b.rows; ++i) std::swap(b.at(i, p), b.at(i, jmin));
            bool clean = true;
            for (size_t j = p + 1; j < b.cols; ++j) {
                if (b.at(r, j) == 0) continue;
                Int q = fdiv(b.at(r, j), b.at(r, p));
                for (size_t i = 0; i < b.rows; ++i) b.at(i, j) -= q * b.at(i, p);
                if (b.at(r, j) != 0) clean = false;
            }
            if (clean) {
                if (b.at(r, p) < 0)
                    for (size_t i = 0; i < b.rows; ++i) b.at(i, p) = -b.at(i, p);
                // reduce entries of earlier pivot columns in this row
                for (size_t j = 0; j < p; ++j) {
                    Int q = fdiv(b.at(r, j), b.at(r, p));
                    for (size_t i = 0; i < b.rows; ++i) b.at(i, j) -= q * b.at(i, p);
                }
                ++p;
                break;
            }
        }
    }
    std::vector<IntVec> out;
    for (size_t j = 0; j < p; ++j) out.push_back(b.column(j));
    return out;
}

bool lattice_equal(const Sublattice& a, const Sublattice& b) {
    return a.ambient_rank == b.ambient_rank && hermite_basis(a) == hermite_basis(b);
}

bool in_rational_span(const Sublattice& s, const IntVec& v) {
    Sublattice ext = s;
    ext.generators.push_back(v);
    return lattice_rank(ext) == lattice_rank(s);
}

std::optional<RatVec> solve_rational(const IntMatrix& a, const RatVec& b) {
    assert(b.size() == a.rows);
    size_t n = a.rows, m = a.cols;
    std::vector<RatVec> aug(n, RatVec(m + 1));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < m; ++j) aug[i][j] = Rat(a.at(i, j));
        aug[i][m] = b[i];
    }
    std::vector<size_t> pivot_col;
    size_t row = 0;
    for (size_t col = 0; col < m && row < n; ++col) {
        size_t pr = row;
        while (pr < n && aug[pr][col] == 0) ++pr;
        if (pr == n) continue;
        std::swap(aug[row], aug[pr]);
        Rat inv = aug[row][col];
        for (size_t j = col; j <= m; ++j) aug[row][j] /= inv;
        for (size_t i = 0; i < n; ++i) {
            if (i == row || aug[i][col] == 0) continue;
            Rat f = aug[i][col];
            for (size_t j = col; j <= m; ++j) aug[i][j] -= f * aug[row][j];
        }
        pivot_col.push_back(col);
        ++row;
    }
    for (size_t i = row; i < n; ++i)
        if (aug[i][m] != 0) return std::nullopt;
    RatVec x(m, Rat(0));
    for (size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = aug[i][m];
    return x;
}

}  // namespace dtflow
