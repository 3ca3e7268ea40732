#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace depfid {

/// Dense row-major real matrix. Plain value type; no expression templates.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);
    /// Row-wise nested initializer, e.g. Matrix{{1, 2}, {3, 4}}.
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t d);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    std::vector<double> column(std::size_t j) const;

    std::span<const double> values() const noexcept { return data_; }

    Matrix transpose() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

/// Largest absolute entry.
double max_abs(const Matrix& a);

/// n×d table of finite observations, rows are samples. Requires n ≥ 2, d ≥ 1.
class DataMatrix {
public:
    explicit DataMatrix(Matrix values, std::vector<std::string> column_names = {});

    std::size_t n() const noexcept { return values_.rows(); }
    std::size_t d() const noexcept { return values_.cols(); }
    const Matrix& values() const noexcept { return values_; }
    double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }
    const std::vector<std::string>& column_names() const noexcept { return column_names_; }

    std::vector<double> column(std::size_t j) const { return values_.column(j); }

    /// New DataMatrix holding only the listed columns, in the given order.
    DataMatrix select_columns(std::span<const std::size_t> columns) const;

private:
    Matrix values_;
    std::vector<std::string> column_names_;
};

enum class SymKind { Covariance, Correlation, Generic };

/// Square symmetric matrix. Construction symmetrizes the input and checks
/// the constraints implied by the kind.
class SymMatrix {
public:
    explicit SymMatrix(Matrix entries, SymKind kind = SymKind::Generic);

    std::size_t dim() const noexcept { return entries_.rows(); }
    SymKind kind() const noexcept { return kind_; }
    const Matrix& entries() const noexcept { return entries_; }
    double operator()(std::size_t i, std::size_t j) const { return entries_(i, j); }

    /// Principal sub-matrix on the listed indices, keeping the kind.
    SymMatrix restrict_to(std::span<const std::size_t> indices) const;

private:
    Matrix entries_;
    SymKind kind_;
};

/// Eigenvalues in descending order; column k of `eigenvectors` pairs with
/// eigenvalue k.
struct EigenSystem {
    std::vector<double> eigenvalues;
    Matrix eigenvectors;

    std::size_t dim() const noexcept { return eigenvalues.size(); }
};

} // namespace depfid
