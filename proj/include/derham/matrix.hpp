#pragma once

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include "derham/ring.hpp"

namespace derham {

/// Dense matrix of exact scalars over a RingSpec. Row-major, immutable by
/// convention after construction (all operations return new values).
class Matrix {
  public:
    Matrix() : ring_(RingSpec::Z()), rows_(0), cols_(0) {}
    Matrix(RingSpec ring, int rows, int cols)
        : ring_(ring), rows_(rows), cols_(cols), e_(static_cast<size_t>(rows) * cols, Rat(0)) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
    }
    Matrix(RingSpec ring, int rows, int cols, std::initializer_list<long> vals) : Matrix(ring, rows, cols) {
        if (static_cast<int>(vals.size()) != rows * cols) throw std::invalid_argument("matrix literal size mismatch");
        int i = 0;
        for (long v : vals) e_[i++] = ring.reduce(Rat(v));
    }

    const RingSpec& ring() const { return ring_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    const Rat& operator()(int r, int c) const { return e_[static_cast<size_t>(r) * cols_ + c]; }
    void set(int r, int c, const Rat& v) { e_[static_cast<size_t>(r) * cols_ + c] = ring_.reduce(v); }

    bool is_zero() const {
        for (const Rat& x : e_)
            if (x != 0) return false;
        return true;
    }

    bool operator==(const Matrix& o) const {
        return ring_ == o.ring_ && rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    static Matrix identity(RingSpec ring, int n) {
        Matrix m(ring, n, n);
        for (int i = 0; i < n; ++i) m.set(i, i, Rat(1));
        return m;
    }
    static Matrix zero(RingSpec ring, int rows, int cols) { return Matrix(ring, rows, cols); }

    Matrix transpose() const {
        Matrix t(ring_, cols_, rows_);
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c) t.set(c, r, (*this)(r, c));
        return t;
    }

    Matrix operator*(const Matrix& o) const {
        if (ring_ != o.ring_) throw std::invalid_argument("matrix product: ring mismatch");
        if (cols_ != o.rows_) throw std::invalid_argument("matrix product: shape mismatch");
        Matrix out(ring_, rows_, o.cols_);
        for (int r = 0; r < rows_; ++r)
            for (int k = 0; k < cols_; ++k) {
                const Rat& a = (*this)(r, k);
                if (a == 0) continue;
                for (int c = 0; c < o.cols_; ++c) {
                    const Rat& b = o(k, c);
                    if (b == 0) continue;
                    out.e_[static_cast<size_t>(r) * o.cols_ + c] += a * b;
                }
            }
        for (Rat& x : out.e_) x = ring_.reduce(x);
        return out;
    }

    Matrix operator+(const Matrix& o) const {
        require_same_shape(o);
        Matrix out(ring_, rows_, cols_);
        for (size_t i = 0; i < e_.size(); ++i) out.e_[i] = ring_.reduce(e_[i] + o.e_[i]);
        return out;
    }
    Matrix operator-(const Matrix& o) const {
        require_same_shape(o);
        Matrix out(ring_, rows_, cols_);
        for (size_t i = 0; i < e_.size(); ++i) out.e_[i] = ring_.reduce(e_[i] - o.e_[i]);
        return out;
    }
    Matrix operator-() const { return scaled(Rat(-1)); }
    Matrix scaled(const Rat& s) const {
        Matrix out(ring_, rows_, cols_);
        for (size_t i = 0; i < e_.size(); ++i) out.e_[i] = ring_.reduce(e_[i] * s);
        return out;
    }

    /// [A | B] side by side.
    static Matrix hstack(const Matrix& a, const Matrix& b) {
        if (a.ring() != b.ring() || a.rows() != b.rows()) throw std::invalid_argument("hstack mismatch");
        Matrix out(a.ring(), a.rows(), a.cols() + b.cols());
        for (int r = 0; r < a.rows(); ++r) {
            for (int c = 0; c < a.cols(); ++c) out.set(r, c, a(r, c));
            for (int c = 0; c < b.cols(); ++c) out.set(r, a.cols() + c, b(r, c));
        }
        return out;
    }
    static Matrix vstack(const Matrix& a, const Matrix& b) {
        if (a.ring() != b.ring() || a.cols() != b.cols()) throw std::invalid_argument("vstack mismatch");
        Matrix out(a.ring(), a.rows() + b.rows(), a.cols());
        for (int r = 0; r < a.rows(); ++r)
            for (int c = 0; c < a.cols(); ++c) out.set(r, c, a(r, c));
        for (int r = 0; r < b.rows(); ++r)
            for (int c = 0; c < b.cols(); ++c) out.set(a.rows() + r, c, b(r, c));
        return out;
    }
    static Matrix block_diag(const Matrix& a, const Matrix& b) {
        if (a.ring() != b.ring()) throw std::invalid_argument("block_diag ring mismatch");
        Matrix out(a.ring(), a.rows() + b.rows(), a.cols() + b.cols());
        for (int r = 0; r < a.rows(); ++r)
            for (int c = 0; c < a.cols(); ++c) out.set(r, c, a(r, c));
        for (int r = 0; r < b.rows(); ++r)
            for (int c = 0; c < b.cols(); ++c) out.set(a.rows() + r, a.cols() + c, b(r, c));
        return out;
    }

    Matrix submatrix(int r0, int c0, int nrows, int ncols) const {
        Matrix out(ring_, nrows, ncols);
        for (int r = 0; r < nrows; ++r)
            for (int c = 0; c < ncols; ++c) out.set(r, c, (*this)(r0 + r, c0 + c));
        return out;
    }
    Matrix columns(const std::vector<int>& idx) const {
        Matrix out(ring_, rows_, static_cast<int>(idx.size()));
        for (int r = 0; r < rows_; ++r)
            for (size_t j = 0; j < idx.size(); ++j) out.set(r, static_cast<int>(j), (*this)(r, idx[j]));
        return out;
    }
    Matrix column(int c) const { return columns({c}); }

    /// Reinterpret entrywise over another ring (used for F_p reduction and
    /// Z -> Q extension in tests).
    Matrix base_change(RingSpec target) const {
        Matrix out(target, rows_, cols_);
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c) out.set(r, c, (*this)(r, c));
        return out;
    }

    std::string to_string() const {
        std::string s = "[";
        for (int r = 0; r < rows_; ++r) {
            s += (r ? "; " : "");
            for (int c = 0; c < cols_; ++c) s += (c ? "," : "") + scalar_to_string((*this)(r, c));
        }
        return s + "]";
    }

  private:
    void require_same_shape(const Matrix& o) const {
        if (ring_ != o.ring_ || rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("matrix shape/ring mismatch");
    }

    RingSpec ring_;
    int rows_, cols_;
    std::vector<Rat> e_;
};

}  // namespace derham
