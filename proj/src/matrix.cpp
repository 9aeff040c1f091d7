#include "afllab/matrix.hpp"

#include <sstream>

namespace afl {

EMatrix::EMatrix(std::size_t rows, std::size_t cols, std::vector<FieldElement> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_)
        raise(ErrorCode::invalid_argument, "matrix entry count mismatch");
}

EMatrix EMatrix::identity(std::size_t n, unsigned long u) {
    EMatrix m(n, n, u);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = FieldElement::one(u);
    return m;
}

EMatrix EMatrix::operator+(const EMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        raise(ErrorCode::invalid_argument, "matrix shape mismatch in +");
    EMatrix out = *this;
    for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] += o.entries_[i];
    return out;
}

EMatrix EMatrix::operator-(const EMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        raise(ErrorCode::invalid_argument, "matrix shape mismatch in -");
    EMatrix out = *this;
    for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] -= o.entries_[i];
    return out;
}

EMatrix EMatrix::operator*(const EMatrix& o) const {
    if (cols_ != o.rows_)
        raise(ErrorCode::invalid_argument, "matrix shape mismatch in *");
    const unsigned long u = entries_.empty() ? (o.entries_.empty() ? 0 : o.entries_[0].u())
                                             : entries_[0].u();
    EMatrix out(rows_, o.cols_, u);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const FieldElement& x = at(i, k);
            if (x.is_zero()) continue;
            for (std::size_t j = 0; j < o.cols_; ++j)
                out.at(i, j) += x * o.at(k, j);
        }
    }
    return out;
}

EMatrix EMatrix::scaled(const FieldElement& c) const {
    EMatrix out = *this;
    for (auto& e : out.entries_) e *= c;
    return out;
}

EMatrix EMatrix::transpose() const {
    const unsigned long u = entries_.empty() ? 0 : entries_[0].u();
    EMatrix out(cols_, rows_, u);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
    return out;
}

EMatrix EMatrix::conj() const {
    EMatrix out = *this;
    for (auto& e : out.entries_) e = e.conj();
    return out;
}

FieldElement EMatrix::det() const {
    if (!is_square()) raise(ErrorCode::invalid_argument, "det of non-square matrix");
    const unsigned long u = entries_.empty() ? 0 : entries_[0].u();
    if (rows_ == 0) return FieldElement::one(u);
    EMatrix m = *this;
    FieldElement d = FieldElement::one(u);
    for (std::size_t col = 0; col < cols_; ++col) {
        std::size_t pivot = col;
        while (pivot < rows_ && m.at(pivot, col).is_zero()) ++pivot;
        if (pivot == rows_) return FieldElement::zero(u);
        if (pivot != col) {
            for (std::size_t j = 0; j < cols_; ++j)
                std::swap(m.at(pivot, j), m.at(col, j));
            d = -d;
        }
        d *= m.at(col, col);
        const FieldElement inv = m.at(col, col).inverse();
        for (std::size_t r = col + 1; r < rows_; ++r) {
            if (m.at(r, col).is_zero()) continue;
            const FieldElement factor = m.at(r, col) * inv;
            for (std::size_t j = col; j < cols_; ++j)
                m.at(r, j) -= factor * m.at(col, j);
        }
    }
    return d;
}

EMatrix EMatrix::inverse() const {
    if (!is_square()) raise(ErrorCode::invalid_argument, "inverse of non-square matrix");
    const unsigned long u = entries_.empty() ? 0 : entries_[0].u();
    EMatrix m = *this;
    EMatrix inv = identity(rows_, u);
    for (std::size_t col = 0; col < cols_; ++col) {
        std::size_t pivot = col;
        while (pivot < rows_ && m.at(pivot, col).is_zero()) ++pivot;
        if (pivot == rows_) raise(ErrorCode::singular_matrix, "matrix not invertible");
        if (pivot != col) {
            for (std::size_t j = 0; j < cols_; ++j) {
                std::swap(m.at(pivot, j), m.at(col, j));
                std::swap(inv.at(pivot, j), inv.at(col, j));
            }
        }
        const FieldElement s = m.at(col, col).inverse();
        for (std::size_t j = 0; j < cols_; ++j) {
            m.at(col, j) *= s;
            inv.at(col, j) *= s;
        }
        for (std::size_t r = 0; r < rows_; ++r) {
            if (r == col || m.at(r, col).is_zero()) continue;
            const FieldElement factor = m.at(r, col);
            for (std::size_t j = 0; j < cols_; ++j) {
                m.at(r, j) -= factor * m.at(col, j);
                inv.at(r, j) -= factor * inv.at(col, j);
            }
        }
    }
    return inv;
}

EMatrix EMatrix::pow(long long e) const {
    if (!is_square()) raise(ErrorCode::invalid_argument, "pow of non-square matrix");
    const unsigned long u = entries_.empty() ? 0 : entries_[0].u();
    EMatrix base = e >= 0 ? *this : inverse();
    unsigned long long k = e >= 0 ? static_cast<unsigned long long>(e)
                                  : static_cast<unsigned long long>(-e);
    EMatrix out = identity(rows_, u);
    while (k) {
        if (k & 1) out = out * base;
        base = base * base;
        k >>= 1;
    }
    return out;
}

EMatrix EMatrix::columns(std::size_t c0, std::size_t c1) const {
    const unsigned long u = entries_.empty() ? 0 : entries_[0].u();
    EMatrix out(rows_, c1 - c0, u);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = c0; j < c1; ++j) out.at(i, j - c0) = at(i, j);
    return out;
}

EMatrix EMatrix::hcat(const EMatrix& a, const EMatrix& b) {
    if (a.rows() != b.rows())
        raise(ErrorCode::invalid_argument, "hcat row mismatch");
    const unsigned long u = a.entries_.empty() ? (b.entries_.empty() ? 0 : b.entries_[0].u())
                                               : a.entries_[0].u();
    EMatrix out(a.rows(), a.cols() + b.cols(), u);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) out.at(i, a.cols() + j) = b.at(i, j);
    }
    return out;
}

bool EMatrix::is_zero() const {
    for (const auto& e : entries_)
        if (!e.is_zero()) return false;
    return true;
}

bool EMatrix::all_entries_integral(const ArithContext& ctx) const {
    for (const auto& e : entries_)
        if (ee_val(ctx, e) < 0) return false;
    return true;
}

std::string EMatrix::str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i == 0 ? "[" : " ");
        for (std::size_t j = 0; j < cols_; ++j)
            os << at(i, j).str() << (j + 1 < cols_ ? ", " : "");
        os << (i + 1 < rows_ ? ";\n" : "]");
    }
    return os.str();
}

std::vector<FieldElement> char_poly(const EMatrix& m) {
    if (!m.is_square()) raise(ErrorCode::invalid_argument, "char_poly of non-square matrix");
    const std::size_t n = m.rows();
    const unsigned long u = n ? m.at(0, 0).u() : 0;
    std::vector<FieldElement> c(n + 1, FieldElement::zero(u));
    c[n] = FieldElement::one(u);
    EMatrix mk = EMatrix::identity(n, u);
    for (std::size_t k = 1; k <= n; ++k) {
        mk = m * mk;
        FieldElement tr = FieldElement::zero(u);
        for (std::size_t i = 0; i < n; ++i) tr += mk.at(i, i);
        // c_{n-k} = -tr(M_k)/k with M_k = M (M_{k-1} + c_{n-k+1} I)
        const FieldElement ck = -(tr / FieldElement::from_rational(Rat(static_cast<long>(k)), u));
        c[n - k] = ck;
        for (std::size_t i = 0; i < n; ++i) mk.at(i, i) += ck;
    }
    return c;
}

EMatrix eval_poly(const std::vector<FieldElement>& coeffs, const EMatrix& m) {
    const std::size_t n = m.rows();
    const unsigned long u = n ? m.at(0, 0).u() : 0;
    EMatrix out(n, n, u);
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        out = out * m;
        for (std::size_t d = 0; d < n; ++d) out.at(d, d) += coeffs[i];
    }
    return out;
}

EMatrix companion(const std::vector<FieldElement>& monic_coeffs) {
    if (monic_coeffs.size() < 2)
        raise(ErrorCode::invalid_argument, "companion needs degree >= 1");
    const std::size_t n = monic_coeffs.size() - 1;
    const unsigned long u = monic_coeffs[0].u();
    if (monic_coeffs[n] != FieldElement::one(u))
        raise(ErrorCode::invalid_argument, "companion requires a monic polynomial");
    EMatrix c(n, n, u);
    for (std::size_t i = 0; i + 1 < n; ++i) c.at(i + 1, i) = FieldElement::one(u);
    for (std::size_t i = 0; i < n; ++i) c.at(i, n - 1) = -monic_coeffs[i];
    return c;
}

} // namespace afl
