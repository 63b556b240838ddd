#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace scn {

/// Dense row-major matrix of doubles. The carrier for features, weights,
/// logits and gradients throughout the library.
class Tensor2D {
public:
    Tensor2D() = default;
    Tensor2D(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    /// Build from nested braces; all rows must have equal length.
    static Tensor2D from_rows(std::initializer_list<std::initializer_list<double>> rows);

    /// Identity matrix of size n.
    static Tensor2D identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool same_shape(const Tensor2D& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }
    bool all_finite() const;

    bool operator==(const Tensor2D& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Matrix product a(n x k) * b(k x m). Accumulation runs left-to-right over k
/// so results are bit-reproducible. Throws ShapeError on k mismatch and
/// NumericError if the result contains non-finite entries.
Tensor2D matmul(const Tensor2D& a, const Tensor2D& b);

/// a^T * b without materializing the transpose: (k x n)^T is a(n x k).
Tensor2D matmul_transpose_a(const Tensor2D& a, const Tensor2D& b);

/// a * b^T without materializing the transpose.
Tensor2D matmul_transpose_b(const Tensor2D& a, const Tensor2D& b);

Tensor2D transpose(const Tensor2D& a);

/// Throws NumericError naming `what` if any entry is NaN or infinite.
void check_finite(const Tensor2D& t, const char* what);
void check_finite(const std::vector<double>& v, const char* what);

}  // namespace scn
