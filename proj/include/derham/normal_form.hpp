#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "derham/matrix.hpp"

namespace derham {

/// Smith normal form data for an integer matrix: u * m * v = d with u, v
/// unimodular and d diagonal with a divisibility chain d1 | d2 | ... The
/// inverses are tracked as well since several callers need to express
/// vectors in the transformed bases.
struct SmithForm {
    Matrix u, v, d;
    Matrix u_inv, v_inv;
    int rank = 0;
};

namespace detail {

// Row/column operation helpers that keep the transform pairs in sync:
// a row operation L applied to A updates u := L*u and u_inv := u_inv*L^{-1}.
inline void swap_rows(Matrix& a, int i, int j) {
    for (int c = 0; c < a.cols(); ++c) {
        Rat t = a(i, c);
        a.set(i, c, a(j, c));
        a.set(j, c, t);
    }
}
inline void swap_cols(Matrix& a, int i, int j) {
    for (int r = 0; r < a.rows(); ++r) {
        Rat t = a(r, i);
        a.set(r, i, a(r, j));
        a.set(r, j, t);
    }
}
inline void add_row(Matrix& a, int dst, int src, const Rat& q) {  // row_dst += q*row_src
    for (int c = 0; c < a.cols(); ++c)
        if (a(src, c) != 0) a.set(dst, c, a.ring().reduce(a(dst, c) + q * a(src, c)));
}
inline void add_col(Matrix& a, int dst, int src, const Rat& q) {  // col_dst += q*col_src
    for (int r = 0; r < a.rows(); ++r)
        if (a(r, src) != 0) a.set(r, dst, a.ring().reduce(a(r, dst) + q * a(r, src)));
}
inline void scale_row(Matrix& a, int i, const Rat& s) {
    for (int c = 0; c < a.cols(); ++c) a.set(i, c, a.ring().reduce(a(i, c) * s));
}
inline void scale_col(Matrix& a, int j, const Rat& s) {
    for (int r = 0; r < a.rows(); ++r) a.set(r, j, a.ring().reduce(a(r, j) * s));
}

inline Int abs_num(const Rat& x) { return abs(x.get_num()); }

}  // namespace detail

/// Smith normal form over Z. Pivoting always selects the entry of minimal
/// absolute value in the remaining block, which keeps intermediate entries
/// small on the inputs this library produces.
inline SmithForm smith_normal_form(const Matrix& m) {
    if (m.ring().kind != RingKind::Integers) throw std::invalid_argument("smith_normal_form: matrix must be over Z");
    const int R = m.rows(), C = m.cols();
    Matrix a = m;
    Matrix u = Matrix::identity(m.ring(), R), u_inv = u;
    Matrix v = Matrix::identity(m.ring(), C), v_inv = v;

    auto row_swap = [&](int i, int j) {
        if (i == j) return;
        detail::swap_rows(a, i, j);
        detail::swap_rows(u, i, j);
        detail::swap_cols(u_inv, i, j);
    };
    auto col_swap = [&](int i, int j) {
        if (i == j) return;
        detail::swap_cols(a, i, j);
        detail::swap_cols(v, i, j);
        detail::swap_rows(v_inv, i, j);
    };
    auto row_add = [&](int dst, int src, const Rat& q) {
        detail::add_row(a, dst, src, q);
        detail::add_row(u, dst, src, q);
        detail::add_col(u_inv, src, dst, -q);
    };
    auto col_add = [&](int dst, int src, const Rat& q) {
        detail::add_col(a, dst, src, q);
        detail::add_col(v, dst, src, q);
        detail::add_row(v_inv, src, dst, -q);
    };
    auto row_negate = [&](int i) {
        detail::scale_row(a, i, Rat(-1));
        detail::scale_row(u, i, Rat(-1));
        detail::scale_col(u_inv, i, Rat(-1));
    };

    const int T = std::min(R, C);
    for (int t = 0; t < T; ++t) {
        for (;;) {
            // minimal |entry| pivot in the trailing block
            int pi = -1, pj = -1;
            Int best = 0;
            for (int i = t; i < R; ++i)
                for (int j = t; j < C; ++j) {
                    if (a(i, j) == 0) continue;
                    Int mag = detail::abs_num(a(i, j));
                    if (pi < 0 || mag < best) {
                        best = mag;
                        pi = i;
                        pj = j;
                    }
                }
            if (pi < 0) { goto diagonal_done; }
            row_swap(t, pi);
            col_swap(t, pj);

            bool clean = true;
            Rat piv = a(t, t);
            for (int i = t + 1; i < R; ++i) {
                if (a(i, t) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), a(i, t).get_num().get_mpz_t(), piv.get_num().get_mpz_t());
                row_add(i, t, Rat(-q));
                if (a(i, t) != 0) clean = false;
            }
            for (int j = t + 1; j < C; ++j) {
                if (a(t, j) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), a(t, j).get_num().get_mpz_t(), piv.get_num().get_mpz_t());
                col_add(j, t, Rat(-q));
                if (a(t, j) != 0) clean = false;
            }
            if (!clean) continue;  // a strictly smaller entry appeared; repick pivot

            // pivot must divide the whole trailing block for the chain
            bool divides_all = true;
            for (int i = t + 1; i < R && divides_all; ++i)
                for (int j = t + 1; j < C && divides_all; ++j) {
                    if (a(i, j) == 0) continue;
                    if (a(i, j).get_num() % piv.get_num() != 0) {
                        row_add(t, i, Rat(1));  // fold the offending row in and redo
                        divides_all = false;
                    }
                }
            if (divides_all) break;
        }
        if (a(t, t) < 0) row_negate(t);
    }
diagonal_done:
    SmithForm f{u, v, a, u_inv, v_inv, 0};
    for (int t = 0; t < T; ++t)
        if (a(t, t) != 0) ++f.rank;
    return f;
}

/// Reduced row echelon form over a field, with the list of pivot columns.
struct Rref {
    Matrix m;
    std::vector<int> pivots;
};

inline Rref rref(const Matrix& in) {
    if (!in.ring().is_field()) throw std::invalid_argument("rref requires a field");
    Matrix a = in;
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < a.cols() && r < a.rows(); ++c) {
        int piv = -1;
        for (int i = r; i < a.rows(); ++i)
            if (a(i, c) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        detail::swap_rows(a, r, piv);
        detail::scale_row(a, r, a.ring().inv(a(r, c)));
        for (int i = 0; i < a.rows(); ++i)
            if (i != r && a(i, c) != 0) detail::add_row(a, i, r, a.ring().neg(a(i, c)));
        pivots.push_back(c);
        ++r;
    }
    return Rref{a, pivots};
}

inline int rank(const Matrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    if (m.ring().is_field()) return static_cast<int>(rref(m).pivots.size());
    // rank over Z equals rank over Q
    return static_cast<int>(rref(m.base_change(RingSpec::Q())).pivots.size());
}

/// Columns form a basis of ker(m). Over Z the basis spans the full kernel
/// lattice (a direct summand, hence saturated): it is read off the
/// unimodular V of the Smith form.
inline Matrix kernel_basis(const Matrix& m) {
    if (m.cols() == 0) return Matrix(m.ring(), 0, 0);
    if (m.rows() == 0) return Matrix::identity(m.ring(), m.cols());
    if (m.ring().kind == RingKind::Integers) {
        SmithForm f = smith_normal_form(m);
        std::vector<int> idx;
        for (int j = 0; j < m.cols(); ++j)
            if (j >= f.rank) idx.push_back(j);
        return f.v.columns(idx);
    }
    Rref rr = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int c : rr.pivots) is_pivot[c] = true;
    Matrix out(m.ring(), m.cols(), m.cols() - static_cast<int>(rr.pivots.size()));
    int k = 0;
    for (int c = 0; c < m.cols(); ++c) {
        if (is_pivot[c]) continue;
        out.set(c, k, Rat(1));
        for (size_t pr = 0; pr < rr.pivots.size(); ++pr)
            out.set(rr.pivots[pr], k, m.ring().neg(rr.m(static_cast<int>(pr), c)));
        ++k;
    }
    return out;
}

/// Solve a*x = b exactly (all columns at once); over Z solutions must be
/// integral. Returns nothing when no solution exists.
inline std::optional<Matrix> solve(const Matrix& a, const Matrix& b) {
    if (a.ring() != b.ring() || a.rows() != b.rows()) throw std::invalid_argument("solve: shape/ring mismatch");
    if (a.ring().kind == RingKind::Integers) {
        SmithForm f = smith_normal_form(a);
        Matrix bp = f.u * b;
        Matrix y(a.ring(), a.cols(), b.cols());
        for (int i = 0; i < a.rows(); ++i) {
            bool live = i < std::min(a.rows(), a.cols()) && f.d(i, i) != 0;
            for (int c = 0; c < b.cols(); ++c) {
                if (live) {
                    if (bp(i, c).get_num() % f.d(i, i).get_num() != 0) return std::nullopt;
                    y.set(i, c, Rat(bp(i, c).get_num() / f.d(i, i).get_num()));
                } else if (bp(i, c) != 0) {
                    return std::nullopt;
                }
            }
        }
        return f.v * y;
    }
    Matrix aug = Matrix::hstack(a, b);
    Rref rr = rref(aug);
    Matrix x(a.ring(), a.cols(), b.cols());
    for (size_t pr = 0; pr < rr.pivots.size(); ++pr) {
        int c = rr.pivots[pr];
        if (c >= a.cols()) return std::nullopt;  // inconsistent row
        for (int bc = 0; bc < b.cols(); ++bc) x.set(c, bc, rr.m(static_cast<int>(pr), a.cols() + bc));
    }
    return x;
}

/// A basis of the column span (the column lattice over Z).
inline Matrix column_space_basis(const Matrix& m) {
    if (m.cols() == 0 || m.rows() == 0 || m.is_zero()) return Matrix(m.ring(), m.rows(), 0);
    if (m.ring().kind == RingKind::Integers) {
        SmithForm f = smith_normal_form(m);
        // span(m) = span(u_inv * d); keep the nonzero columns
        Matrix ud = f.u_inv * f.d;
        std::vector<int> idx;
        for (int j = 0; j < f.rank; ++j) idx.push_back(j);
        return ud.columns(idx);
    }
    Rref rr = rref(m);
    return m.columns(rr.pivots);
}

inline Rat determinant(const Matrix& in) {
    if (in.rows() != in.cols()) throw std::invalid_argument("determinant of non-square matrix");
    int n = in.rows();
    Matrix a = in.base_change(in.ring().is_field() ? in.ring() : RingSpec::Q());
    Rat det(1);
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int i = c; i < n; ++i)
            if (a(i, c) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) return Rat(0);
        if (piv != c) {
            detail::swap_rows(a, c, piv);
            det = -det;
        }
        det *= a(c, c);
        Rat inv = a.ring().inv(a(c, c));
        for (int i = c + 1; i < n; ++i)
            if (a(i, c) != 0) detail::add_row(a, i, c, a.ring().reduce(-a(i, c) * inv));
    }
    return in.ring().reduce(det);
}

}  // namespace derham
