#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "hiercode/gf.hpp"

namespace hiercode {

using Vec = std::vector<Elem>;

struct CauchyIndicators {
    Vec rows;
    Vec cols;
};

// Dense immutable row-major matrix over a shared field.
class Matrix {
public:
    Matrix() = default;
    Matrix(FieldPtr field, std::size_t rows, std::size_t cols);
    Matrix(FieldPtr field, std::size_t rows, std::size_t cols, Vec data);

    static Matrix zeros(FieldPtr field, std::size_t rows, std::size_t cols);
    static Matrix identity(FieldPtr field, std::size_t n);
    static Matrix cauchy(FieldPtr field, const CauchyIndicators& ind);
    // Rows given as power exponents of beta; -1 denotes zero.
    static Matrix from_powers(FieldPtr field, const std::vector<std::vector<int>>& pw);
    static Matrix row(FieldPtr field, const Vec& v);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }
    const FieldPtr& field() const { return field_; }
    const Vec& data() const { return data_; }

    // 0-based access.
    Elem operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    Vec row_vec(std::size_t i) const;

    // 1-based inclusive ranges; r2 = r1 - 1 selects zero rows.
    Matrix submatrix(std::size_t r1, std::size_t r2, std::size_t c1, std::size_t c2) const;
    // 0-based half-open helpers used internally.
    Matrix block(std::size_t r0, std::size_t nr, std::size_t c0, std::size_t nc) const;
    Matrix select_rows(const std::vector<std::size_t>& idx) const;
    Matrix select_cols(const std::vector<std::size_t>& idx) const;
    Matrix transpose() const;
    bool is_zero() const;

    std::size_t rank() const;
    // Throws BadShape for non-square, DivisionByZero for singular.
    Matrix inverse() const;

    std::string dump() const;

    friend bool operator==(const Matrix& a, const Matrix& b);
    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Matrix operator+(const Matrix& a, const Matrix& b);

private:
    FieldPtr field_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Vec data_;
};

Matrix hcat(const std::vector<Matrix>& parts);
Matrix vcat(const std::vector<Matrix>& parts);

// Row vector times matrix.
Vec vec_mul(const Vec& v, const Matrix& m);
Vec vec_add(const Field& f, const Vec& a, const Vec& b);
Vec vec_zero(std::size_t n);

// M = [A ; (I_r | 0)]^T, shape t x (s + r). Requires t - s < r <= t.
Matrix stacked_check_matrix(const Matrix& a, std::size_t r);

// Solution of an affine system A x = b with per-unknown determinacy.
struct AffineSolution {
    bool consistent = true;
    std::vector<bool> determined;
    Vec values;  // undetermined entries are reported as 0
    std::size_t rank = 0;
    bool all_determined() const;
};

// Gaussian elimination with first-nonzero pivots in ascending column order.
AffineSolution solve_affine(const Matrix& a, const Vec& b);

struct Received {
    Vec values;
    std::vector<bool> erased;

    static Received intact(const Vec& v);
    std::size_t size() const { return values.size(); }
    std::size_t erasure_count() const;
};

enum class SolveStatus { Solved, Unsolvable, Inconsistent };

struct SolveResult {
    SolveStatus status = SolveStatus::Solved;
    Vec values;  // full vector with unknowns filled in when Solved
    bool ok() const { return status == SolveStatus::Solved; }
};

// Find the erased coordinates of c so that H c^T = syndrome^T.
SolveResult solve_erasures(const Matrix& h, const Received& received, const Vec& syndrome);

}  // namespace hiercode
