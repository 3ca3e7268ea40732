#include "depfid/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "depfid/errors.hpp"

namespace depfid {

namespace {

constexpr double kSymmetryTolerance = 1e-12;

void require_same_shape(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorKind::ShapeMismatch, "matrix shapes differ");
    }
}

} // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
    if (data_.size() != rows * cols) {
        throw Error(ErrorKind::ShapeMismatch, "value count does not match matrix shape");
    }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            throw Error(ErrorKind::RaggedRows, "initializer rows differ in length");
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t d) {
    Matrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
}

std::vector<double> Matrix::column(std::size_t j) const {
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw Error(ErrorKind::ShapeMismatch, "inner dimensions differ in product");
    }
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b);
    Matrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
    return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b);
    Matrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
    return c;
}

Matrix operator*(double s, const Matrix& a) {
    Matrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = s * a(i, j);
    return c;
}

double max_abs(const Matrix& a) {
    double m = 0.0;
    for (double v : a.values()) m = std::max(m, std::abs(v));
    return m;
}

DataMatrix::DataMatrix(Matrix values, std::vector<std::string> column_names)
    : values_(std::move(values)), column_names_(std::move(column_names)) {
    if (values_.rows() < 2) {
        throw Error(ErrorKind::InsufficientSamples, "a data matrix needs at least 2 rows");
    }
    if (values_.cols() < 1) {
        throw Error(ErrorKind::InvalidData, "a data matrix needs at least 1 column");
    }
    if (!column_names_.empty() && column_names_.size() != values_.cols()) {
        throw Error(ErrorKind::ShapeMismatch, "column name count does not match column count");
    }
    for (std::size_t i = 0; i < values_.rows(); ++i) {
        for (std::size_t j = 0; j < values_.cols(); ++j) {
            if (!std::isfinite(values_(i, j))) {
                throw Error(ErrorKind::InvalidData, "non-finite entry at row " + std::to_string(i) +
                                                        ", column " + std::to_string(j));
            }
        }
    }
}

DataMatrix DataMatrix::select_columns(std::span<const std::size_t> columns) const {
    Matrix out(n(), columns.size());
    std::vector<std::string> names;
    for (std::size_t k = 0; k < columns.size(); ++k) {
        if (columns[k] >= d()) throw Error(ErrorKind::IndexOutOfRange, "column index out of range");
        for (std::size_t i = 0; i < n(); ++i) out(i, k) = values_(i, columns[k]);
        if (!column_names_.empty()) names.push_back(column_names_[columns[k]]);
    }
    return DataMatrix(std::move(out), std::move(names));
}

SymMatrix::SymMatrix(Matrix entries, SymKind kind) : entries_(std::move(entries)), kind_(kind) {
    const std::size_t d = entries_.rows();
    if (entries_.cols() != d) {
        throw Error(ErrorKind::ShapeMismatch, "symmetric matrix must be square");
    }
    const double scale = std::max(1.0, max_abs(entries_));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            if (!std::isfinite(entries_(i, j))) {
                throw Error(ErrorKind::InvalidData, "non-finite matrix entry");
            }
        }
    }
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            const double a = entries_(i, j);
            const double b = entries_(j, i);
            if (std::abs(a - b) > 1e-8 * scale) {
                throw Error(ErrorKind::InvalidData, "matrix is not symmetric");
            }
            const double mean = 0.5 * (a + b);
            entries_(i, j) = mean;
            entries_(j, i) = mean;
        }
    }
    switch (kind_) {
    case SymKind::Covariance:
        for (std::size_t i = 0; i < d; ++i) {
            if (entries_(i, i) < 0.0) {
                throw Error(ErrorKind::InvalidData, "covariance has a negative diagonal entry");
            }
        }
        break;
    case SymKind::Correlation:
        for (std::size_t i = 0; i < d; ++i) {
            if (std::abs(entries_(i, i) - 1.0) > kSymmetryTolerance) {
                throw Error(ErrorKind::InvalidData, "correlation diagonal must be 1");
            }
            entries_(i, i) = 1.0;
            for (std::size_t j = 0; j < d; ++j) {
                double& v = entries_(i, j);
                if (std::abs(v) > 1.0 + kSymmetryTolerance) {
                    throw Error(ErrorKind::InvalidData, "correlation entry outside [-1, 1]");
                }
                v = std::clamp(v, -1.0, 1.0);
            }
        }
        break;
    case SymKind::Generic:
        break;
    }
}

SymMatrix SymMatrix::restrict_to(std::span<const std::size_t> indices) const {
    Matrix sub(indices.size(), indices.size());
    for (std::size_t a = 0; a < indices.size(); ++a) {
        for (std::size_t b = 0; b < indices.size(); ++b) {
            if (indices[a] >= dim() || indices[b] >= dim()) {
                throw Error(ErrorKind::IndexOutOfRange, "sub-matrix index out of range");
            }
            sub(a, b) = entries_(indices[a], indices[b]);
        }
    }
    return SymMatrix(std::move(sub), kind_);
}

} // namespace depfid
