#pragma once

#include "gaussent/real.hpp"

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace gaussent {

using Vector = std::vector<Real>;

// Dense row-major matrix of Real.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols); // zeros at default precision
    Matrix(std::size_t rows, std::size_t cols, int digits);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix identity(std::size_t n, int digits);
    static Matrix diagonal(const Vector& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    Real& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Real& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    int digits() const; // smallest entry precision
    void set_digits(int digits);

    Vector row(std::size_t i) const;
    Vector col(std::size_t j) const;
    void set_row(std::size_t i, const Vector& v);
    void set_col(std::size_t j, const Vector& v);

    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const Matrix& b);
    Matrix select(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const;
    Matrix select(const std::vector<std::size_t>& idx) const { return select(idx, idx); }

    Matrix transpose() const;
    Matrix symmetrized() const;
    Real trace() const;
    Real max_abs() const;
    Real frobenius() const;

    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(const Real& s);

    std::string str(int sig_digits = 8) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Real> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(Matrix a, const Real& s);
Matrix operator*(const Real& s, Matrix a);
Vector operator*(const Matrix& a, const Vector& v);

Matrix direct_sum(const Matrix& a, const Matrix& b);
Matrix outer(const Vector& u, const Vector& v);

Real dot(const Vector& a, const Vector& b);
Real norm(const Vector& v);
Vector scaled(const Vector& v, const Real& s);
Vector axpy(const Vector& y, const Real& a, const Vector& x); // y + a x

// max |a_ij - b_ij|
Real max_abs_diff(const Matrix& a, const Matrix& b);

} // namespace gaussent
