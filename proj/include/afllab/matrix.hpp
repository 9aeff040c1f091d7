#pragma once

#include <cstddef>
#include <vector>

#include "afllab/field.hpp"

namespace afl {

// Dense matrix over E with exact entries, row-major.
class EMatrix {
public:
    EMatrix() : rows_(0), cols_(0) {}
    EMatrix(std::size_t rows, std::size_t cols, unsigned long u)
        : rows_(rows), cols_(cols),
          entries_(rows * cols, FieldElement::zero(u)) {}
    EMatrix(std::size_t rows, std::size_t cols, std::vector<FieldElement> entries);

    static EMatrix identity(std::size_t n, unsigned long u);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    FieldElement& at(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const FieldElement& at(std::size_t r, std::size_t c) const {
        return entries_[r * cols_ + c];
    }

    EMatrix operator+(const EMatrix& o) const;
    EMatrix operator-(const EMatrix& o) const;
    EMatrix operator*(const EMatrix& o) const;
    EMatrix scaled(const FieldElement& c) const;
    EMatrix transpose() const;
    EMatrix conj() const;
    EMatrix conj_transpose() const { return conj().transpose(); }

    FieldElement det() const;
    EMatrix inverse() const;
    EMatrix pow(long long e) const; // negative exponents via inverse

    // Columns [c0, c1) as a new matrix.
    EMatrix columns(std::size_t c0, std::size_t c1) const;
    EMatrix column(std::size_t c) const { return columns(c, c + 1); }
    // Horizontal concatenation.
    static EMatrix hcat(const EMatrix& a, const EMatrix& b);

    bool operator==(const EMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
    }
    bool operator!=(const EMatrix& o) const { return !(*this == o); }

    bool is_zero() const;
    bool all_entries_integral(const ArithContext& ctx) const;

    std::string str() const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<FieldElement> entries_;
};

// Monic characteristic polynomial of a square matrix, coefficients lowest
// degree first (size n+1, leading 1). Faddeev-LeVerrier; exact over Q(sqrt u).
std::vector<FieldElement> char_poly(const EMatrix& m);

// Evaluate a monic polynomial given by its coefficient vector at a matrix.
EMatrix eval_poly(const std::vector<FieldElement>& coeffs, const EMatrix& m);

// Companion matrix of a monic polynomial (column convention: last column
// holds the negated low coefficients).
EMatrix companion(const std::vector<FieldElement>& monic_coeffs);

} // namespace afl
