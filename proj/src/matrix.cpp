#include "hiercode/matrix.hpp"

#include <set>
#include <sstream>

#include "hiercode/error.hpp"

namespace hiercode {

namespace {

void require_same_field(const Matrix& a, const Matrix& b) {
    if (a.field() && b.field() && a.field() != b.field() &&
        (a.field()->theta() != b.field()->theta() || a.field()->poly() != b.field()->poly()))
        throw Error(ErrorKind::DimensionMismatch, "matrices over different fields");
}

FieldPtr pick_field(const std::vector<Matrix>& parts) {
    for (const auto& m : parts)
        if (m.field()) return m.field();
    return nullptr;
}

}  // namespace

Matrix::Matrix(FieldPtr field, std::size_t rows, std::size_t cols)
    : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols) {}

Matrix::Matrix(FieldPtr field, std::size_t rows, std::size_t cols, Vec data)
    : field_(std::move(field)), rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
        throw Error(ErrorKind::DimensionMismatch, "data length does not match shape");
    for (Elem e : data_)
        if (!field_->contains(e)) throw Error(ErrorKind::InvalidParams, "element outside field");
}

Matrix Matrix::zeros(FieldPtr field, std::size_t rows, std::size_t cols) {
    return Matrix(std::move(field), rows, cols);
}

Matrix Matrix::identity(FieldPtr field, std::size_t n) {
    Vec d(n * n);
    for (std::size_t i = 0; i < n; ++i) d[i * n + i] = Elem{1};
    return Matrix(std::move(field), n, n, std::move(d));
}

Matrix Matrix::cauchy(FieldPtr field, const CauchyIndicators& ind) {
    std::set<std::uint32_t> seen;
    for (Elem e : ind.rows)
        if (!seen.insert(e.value).second)
            throw Error(ErrorKind::IndicatorCollision, "repeated indicator " + field->to_power(e));
    for (Elem e : ind.cols)
        if (!seen.insert(e.value).second)
            throw Error(ErrorKind::IndicatorCollision, "repeated indicator " + field->to_power(e));
    const std::size_t s = ind.rows.size(), t = ind.cols.size();
    Vec d(s * t);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < t; ++j) d[i * t + j] = field->inv(field->add(ind.rows[i], ind.cols[j]));
    return Matrix(std::move(field), s, t, std::move(d));
}

Matrix Matrix::from_powers(FieldPtr field, const std::vector<std::vector<int>>& pw) {
    const std::size_t r = pw.size(), c = r ? pw[0].size() : 0;
    Vec d;
    d.reserve(r * c);
    for (const auto& row : pw) {
        if (row.size() != c) throw Error(ErrorKind::DimensionMismatch, "ragged rows");
        for (int k : row) d.push_back(k < 0 ? Elem{0} : field->beta_pow(k));
    }
    return Matrix(std::move(field), r, c, std::move(d));
}

Matrix Matrix::row(FieldPtr field, const Vec& v) { return Matrix(std::move(field), 1, v.size(), v); }

Vec Matrix::row_vec(std::size_t i) const {
    return Vec(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
               data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

Matrix Matrix::submatrix(std::size_t r1, std::size_t r2, std::size_t c1, std::size_t c2) const {
    if (r1 < 1 || c1 < 1 || r2 + 1 < r1 || c2 + 1 < c1 || r2 > rows_ || c2 > cols_)
        throw Error(ErrorKind::DimensionMismatch, "submatrix range out of bounds");
    return block(r1 - 1, r2 + 1 - r1, c1 - 1, c2 + 1 - c1);
}

Matrix Matrix::block(std::size_t r0, std::size_t nr, std::size_t c0, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw Error(ErrorKind::DimensionMismatch, "block out of bounds");
    Vec d(nr * nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) d[i * nc + j] = (*this)(r0 + i, c0 + j);
    return Matrix(field_, nr, nc, std::move(d));
}

Matrix Matrix::select_rows(const std::vector<std::size_t>& idx) const {
    Vec d;
    d.reserve(idx.size() * cols_);
    for (std::size_t i : idx) {
        if (i >= rows_) throw Error(ErrorKind::DimensionMismatch, "row index out of bounds");
        for (std::size_t j = 0; j < cols_; ++j) d.push_back((*this)(i, j));
    }
    return Matrix(field_, idx.size(), cols_, std::move(d));
}

Matrix Matrix::select_cols(const std::vector<std::size_t>& idx) const {
    Vec d;
    d.reserve(idx.size() * rows_);
    for (std::size_t j : idx)
        if (j >= cols_) throw Error(ErrorKind::DimensionMismatch, "column index out of bounds");
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j : idx) d.push_back((*this)(i, j));
    return Matrix(field_, rows_, idx.size(), std::move(d));
}

Matrix Matrix::transpose() const {
    Vec d(data_.size());
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) d[j * rows_ + i] = (*this)(i, j);
    return Matrix(field_, cols_, rows_, std::move(d));
}

bool Matrix::is_zero() const {
    for (Elem e : data_)
        if (!e.is_zero()) return false;
    return true;
}

std::size_t Matrix::rank() const { return solve_affine(*this, vec_zero(rows_)).rank; }

Matrix Matrix::inverse() const {
    if (rows_ != cols_) throw Error(ErrorKind::BadShape, "inverse of non-square matrix");
    const Field& f = *field_;
    const std::size_t n = rows_;
    Vec a = data_;
    Vec inv = identity(field_, n).data_;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p * n + c].is_zero()) ++p;
        if (p == n) throw Error(ErrorKind::DivisionByZero, "singular matrix");
        if (p != c)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a[p * n + j], a[c * n + j]);
                std::swap(inv[p * n + j], inv[c * n + j]);
            }
        Elem s = f.inv(a[c * n + c]);
        for (std::size_t j = 0; j < n; ++j) {
            a[c * n + j] = f.mul(a[c * n + j], s);
            inv[c * n + j] = f.mul(inv[c * n + j], s);
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || a[i * n + c].is_zero()) continue;
            Elem m = a[i * n + c];
            for (std::size_t j = 0; j < n; ++j) {
                a[i * n + j] = f.add(a[i * n + j], f.mul(m, a[c * n + j]));
                inv[i * n + j] = f.add(inv[i * n + j], f.mul(m, inv[c * n + j]));
            }
        }
    }
    return Matrix(field_, n, n, std::move(inv));
}

std::string Matrix::dump() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            if (j) os << ' ';
            os << field_->to_power((*this)(i, j));
        }
        os << '\n';
    }
    return os.str();
}

bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    require_same_field(a, b);
    if (a.cols_ != b.rows_) throw Error(ErrorKind::DimensionMismatch, "product shape mismatch");
    const Field& f = *(a.field_ ? a.field_ : b.field_);
    Matrix out(a.field_ ? a.field_ : b.field_, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            Elem x = a(i, k);
            if (x.is_zero()) continue;
            for (std::size_t j = 0; j < b.cols_; ++j)
                out.data_[i * b.cols_ + j] = f.add(out.data_[i * b.cols_ + j], f.mul(x, b(k, j)));
        }
    return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    require_same_field(a, b);
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorKind::DimensionMismatch, "sum shape mismatch");
    Matrix out = a;
    for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] = Elem{a.data_[i].value ^ b.data_[i].value};
    return out;
}

Matrix hcat(const std::vector<Matrix>& parts) {
    FieldPtr f = pick_field(parts);
    std::size_t rows = 0, cols = 0;
    bool have_rows = false;
    for (const auto& m : parts) {
        if (!have_rows) {
            rows = m.rows();
            have_rows = true;
        } else if (m.rows() != rows) {
            throw Error(ErrorKind::DimensionMismatch, "hcat row mismatch");
        }
        cols += m.cols();
    }
    Vec d;
    d.reserve(rows * cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (const auto& m : parts)
            for (std::size_t j = 0; j < m.cols(); ++j) d.push_back(m(i, j));
    return Matrix(f, rows, cols, std::move(d));
}

Matrix vcat(const std::vector<Matrix>& parts) {
    FieldPtr f = pick_field(parts);
    std::size_t rows = 0, cols = 0;
    bool have_cols = false;
    for (const auto& m : parts) {
        if (!have_cols) {
            cols = m.cols();
            have_cols = true;
        } else if (m.cols() != cols) {
            throw Error(ErrorKind::DimensionMismatch, "vcat column mismatch");
        }
        rows += m.rows();
    }
    Vec d;
    d.reserve(rows * cols);
    for (const auto& m : parts) d.insert(d.end(), m.data().begin(), m.data().end());
    return Matrix(f, rows, cols, std::move(d));
}

Vec vec_mul(const Vec& v, const Matrix& m) {
    if (v.size() != m.rows()) throw Error(ErrorKind::DimensionMismatch, "vector-matrix shape mismatch");
    Vec out(m.cols());
    if (m.cols() == 0) return out;
    const Field& f = *m.field();
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (v[k].is_zero()) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) out[j] = f.add(out[j], f.mul(v[k], m(k, j)));
    }
    return out;
}

Vec vec_add(const Field& f, const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "vector length mismatch");
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = f.add(a[i], b[i]);
    return out;
}

Vec vec_zero(std::size_t n) { return Vec(n); }

Matrix stacked_check_matrix(const Matrix& a, std::size_t r) {
    const std::size_t s = a.rows(), t = a.cols();
    if (!(t < s + r && r <= t))
        throw Error(ErrorKind::BadShape, "need t - s < r <= t (s=" + std::to_string(s) + ", t=" +
                                             std::to_string(t) + ", r=" + std::to_string(r) + ")");
    Matrix lower = hcat({Matrix::identity(a.field(), r), Matrix::zeros(a.field(), r, t - r)});
    return vcat({a, lower}).transpose();
}

bool AffineSolution::all_determined() const {
    for (bool d : determined)
        if (!d) return false;
    return consistent;
}

AffineSolution solve_affine(const Matrix& a, const Vec& b) {
    if (b.size() != a.rows()) throw Error(ErrorKind::DimensionMismatch, "rhs length mismatch");
    const std::size_t m = a.rows(), n = a.cols();
    AffineSolution out;
    out.determined.assign(n, false);
    out.values.assign(n, Elem{0});
    if (m == 0) return out;
    const Field& f = *a.field();
    const std::size_t w = n + 1;
    Vec aug(m * w);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug[i * w + j] = a(i, j);
        aug[i * w + n] = b[i];
    }
    std::vector<std::size_t> pivot_col;
    std::size_t row = 0;
    for (std::size_t c = 0; c < n && row < m; ++c) {
        std::size_t p = row;
        while (p < m && aug[p * w + c].is_zero()) ++p;
        if (p == m) continue;
        if (p != row)
            for (std::size_t j = 0; j < w; ++j) std::swap(aug[p * w + j], aug[row * w + j]);
        Elem s = f.inv(aug[row * w + c]);
        for (std::size_t j = c; j < w; ++j) aug[row * w + j] = f.mul(aug[row * w + j], s);
        for (std::size_t i = 0; i < m; ++i) {
            if (i == row || aug[i * w + c].is_zero()) continue;
            Elem mult = aug[i * w + c];
            for (std::size_t j = c; j < w; ++j) aug[i * w + j] = f.add(aug[i * w + j], f.mul(mult, aug[row * w + j]));
        }
        pivot_col.push_back(c);
        ++row;
    }
    out.rank = row;
    for (std::size_t i = row; i < m; ++i)
        if (!aug[i * w + n].is_zero()) out.consistent = false;
    std::vector<bool> is_pivot(n, false);
    for (std::size_t c : pivot_col) is_pivot[c] = true;
    for (std::size_t i = 0; i < row; ++i) {
        const std::size_t c = pivot_col[i];
        bool free_entries = false;
        for (std::size_t j = c + 1; j < n; ++j)
            if (!is_pivot[j] && !aug[i * w + j].is_zero()) {
                free_entries = true;
                break;
            }
        out.values[c] = aug[i * w + n];
        out.determined[c] = !free_entries;
    }
    return out;
}

Received Received::intact(const Vec& v) { return Received{v, std::vector<bool>(v.size(), false)}; }

std::size_t Received::erasure_count() const {
    std::size_t c = 0;
    for (bool e : erased) c += e ? 1 : 0;
    return c;
}

SolveResult solve_erasures(const Matrix& h, const Received& received, const Vec& syndrome) {
    if (received.values.size() != h.cols() || received.erased.size() != h.cols())
        throw Error(ErrorKind::DimensionMismatch, "received length must equal H columns");
    if (syndrome.size() != h.rows()) throw Error(ErrorKind::DimensionMismatch, "syndrome length must equal H rows");
    const Field& f = *h.field();
    std::vector<std::size_t> unknown;
    for (std::size_t j = 0; j < h.cols(); ++j)
        if (received.erased[j]) unknown.push_back(j);
    Vec rhs = syndrome;
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = 0; j < h.cols(); ++j)
            if (!received.erased[j]) rhs[i] = f.add(rhs[i], f.mul(h(i, j), received.values[j]));
    AffineSolution sol = solve_affine(h.select_cols(unknown), rhs);
    SolveResult out;
    out.values = received.values;
    if (!sol.consistent) {
        out.status = SolveStatus::Inconsistent;
        return out;
    }
    if (!sol.all_determined()) {
        out.status = SolveStatus::Unsolvable;
        return out;
    }
    for (std::size_t k = 0; k < unknown.size(); ++k) out.values[unknown[k]] = sol.values[k];
    return out;
}

}  // namespace hiercode
