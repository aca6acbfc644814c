#pragma once

#include <cassert>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "scnet/errors.hpp"

namespace scnet {

// Dense row-major matrix of doubles. Shapes are part of the value, so a
// 2x3 matrix never compares equal to a 3x2 one.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    Matrix(std::initializer_list<std::initializer_list<double>> rows)
    {
        rows_ = rows.size();
        cols_ = rows.size() == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (auto const& r : rows) {
            if (r.size() != cols_) {
                throw DimensionError("ragged matrix initializer");
            }
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] bool has_shape(std::size_t r, std::size_t c) const noexcept { return rows_ == r && cols_ == c; }

    double& operator()(std::size_t r, std::size_t c) noexcept
    {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }
    double operator()(std::size_t r, std::size_t c) const noexcept
    {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }

    [[nodiscard]] std::vector<double> const& values() const noexcept { return data_; }
    [[nodiscard]] std::vector<double>& values() noexcept { return data_; }

    Matrix& operator*=(double alpha) noexcept
    {
        for (auto& v : data_) { v *= alpha; }
        return *this;
    }

    Matrix& operator+=(Matrix const& other)
    {
        if (!other.has_shape(rows_, cols_)) {
            throw DimensionError("matrix addition with mismatched shapes");
        }
        for (std::size_t n = 0; n < data_.size(); ++n) { data_[n] += other.data_[n]; }
        return *this;
    }

    friend Matrix operator*(double alpha, Matrix m) noexcept { return m *= alpha; }
    friend Matrix operator+(Matrix a, Matrix const& b) { return a += b; }

    friend bool operator==(Matrix const&, Matrix const&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

} // namespace scnet
