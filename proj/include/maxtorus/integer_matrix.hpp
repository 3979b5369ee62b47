#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "maxtorus/errors.hpp"

namespace maxtorus {

/// Exact arbitrary-precision integer. All arithmetic in this library is
/// performed on this type; there is no fixed-width fast path.
using Int = mpz_class;

using IntVector = std::vector<Int>;

inline Int gcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int vector_gcd(const IntVector& v) {
    Int g = 0;
    for (const Int& x : v) g = gcd(g, x);
    return g;
}

inline bool is_zero_vector(const IntVector& v) {
    for (const Int& x : v)
        if (x != 0) return false;
    return true;
}

/// gcd of the entries is 1 (the all-zero vector is not primitive).
inline bool is_primitive(const IntVector& v) {
    return vector_gcd(v) == 1;
}

/// Flip signs so the first nonzero entry is positive.
inline IntVector canonical_sign(IntVector v) {
    for (const Int& x : v) {
        if (x == 0) continue;
        if (x < 0)
            for (Int& y : v) y = -y;
        break;
    }
    return v;
}

inline bool lex_less(const IntVector& a, const IntVector& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline Int dot(const IntVector& a, const IntVector& b) {
    if (a.size() != b.size()) throw dimension_error("dot: length mismatch");
    Int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline std::string vector_to_string(const IntVector& v) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        os << v[i];
    }
    os << ")";
    return os.str();
}

/// Dense rectangular matrix of exact integers, row-major. Values are
/// immutable in spirit: every lattice operation takes matrices by const
/// reference and returns fresh ones, so sharing across threads is safe.
/// Empty shapes (0 rows or 0 columns) are legal.
class IntegerMatrix {
public:
    IntegerMatrix() : rows_(0), cols_(0) {}

    IntegerMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {}

    IntegerMatrix(std::size_t rows, std::size_t cols, std::vector<Int> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        if (entries_.size() != rows_ * cols_)
            throw input_error("IntegerMatrix: entry count does not match shape");
    }

    static IntegerMatrix identity(std::size_t n) {
        IntegerMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    /// Build from a list of equal-length rows. An empty list yields 0x0.
    static IntegerMatrix from_rows(const std::vector<IntVector>& rows) {
        if (rows.empty()) return IntegerMatrix();
        const std::size_t c = rows.front().size();
        IntegerMatrix m(rows.size(), c);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != c) throw input_error("from_rows: ragged rows");
            for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Int& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    IntVector row(std::size_t i) const {
        IntVector r(cols_);
        for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
        return r;
    }

    std::vector<IntVector> to_rows() const {
        std::vector<IntVector> out;
        out.reserve(rows_);
        for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
        return out;
    }

    IntegerMatrix transposed() const {
        IntegerMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    IntegerMatrix operator*(const IntegerMatrix& rhs) const {
        if (cols_ != rhs.rows_) throw dimension_error("matrix product: shape mismatch");
        IntegerMatrix p(rows_, rhs.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t l = 0; l < cols_; ++l) {
                const Int& a = (*this)(i, l);
                if (a == 0) continue;
                for (std::size_t j = 0; j < rhs.cols_; ++j) p(i, j) += a * rhs(l, j);
            }
        return p;
    }

    bool operator==(const IntegerMatrix& rhs) const {
        return rows_ == rhs.rows_ && cols_ == rhs.cols_ && entries_ == rhs.entries_;
    }
    bool operator!=(const IntegerMatrix& rhs) const { return !(*this == rhs); }

    /// Rows selected by index, in the order given.
    IntegerMatrix submatrix_rows(const std::vector<std::size_t>& indices) const {
        IntegerMatrix m(indices.size(), cols_);
        for (std::size_t i = 0; i < indices.size(); ++i) {
            if (indices[i] >= rows_) throw dimension_error("submatrix_rows: index out of range");
            for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(indices[i], j);
        }
        return m;
    }

    /// This matrix with `below` appended underneath. Column counts must agree;
    /// a 0-row operand adopts the other's width.
    IntegerMatrix stacked_with(const IntegerMatrix& below) const {
        if (rows_ == 0) return below;
        if (below.rows_ == 0) return *this;
        if (cols_ != below.cols_) throw dimension_error("stacked_with: column mismatch");
        IntegerMatrix m(rows_ + below.rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
        for (std::size_t i = 0; i < below.rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(rows_ + i, j) = below(i, j);
        return m;
    }

    IntegerMatrix with_row_appended(const IntVector& r) const {
        if (rows_ != 0 && r.size() != cols_) throw dimension_error("with_row_appended: length mismatch");
        IntegerMatrix m(rows_ + 1, rows_ == 0 ? r.size() : cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
        for (std::size_t j = 0; j < r.size(); ++j) m(rows_, j) = r[j];
        return m;
    }

    std::string to_string() const {
        std::ostringstream os;
        os << "[";
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i) os << ", ";
            os << "[";
            for (std::size_t j = 0; j < cols_; ++j) {
                if (j) os << ", ";
                os << (*this)(i, j);
            }
            os << "]";
        }
        os << "]";
        return os.str();
    }

private:
    std::size_t rows_, cols_;
    std::vector<Int> entries_;
};

}  // namespace maxtorus
