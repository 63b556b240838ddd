#include "scn/tensor.hpp"

#include <cmath>
#include <string>

#include "scn/errors.hpp"

namespace scn {

Tensor2D Tensor2D::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    Tensor2D t(rows.size(), rows.size() ? rows.begin()->size() : 0);
    std::size_t r = 0;
    for (const auto& row : rows) {
        if (row.size() != t.cols_)
            throw ShapeError("from_rows: ragged row " + std::to_string(r) + " of length " +
                             std::to_string(row.size()) + ", expected " + std::to_string(t.cols_));
        std::size_t c = 0;
        for (double v : row) t(r, c++) = v;
        ++r;
    }
    return t;
}

Tensor2D Tensor2D::identity(std::size_t n) {
    Tensor2D t(n, n);
    for (std::size_t i = 0; i < n; ++i) t(i, i) = 1.0;
    return t;
}

bool Tensor2D::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

void check_finite(const Tensor2D& t, const char* what) {
    if (!t.all_finite()) throw NumericError(std::string(what) + ": non-finite entry");
}

void check_finite(const std::vector<double>& v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw NumericError(std::string(what) + ": non-finite entry");
}

namespace {

std::string shape_str(const Tensor2D& t) {
    return std::to_string(t.rows()) + "x" + std::to_string(t.cols());
}

}  // namespace

Tensor2D matmul(const Tensor2D& a, const Tensor2D& b) {
    if (a.cols() != b.rows())
        throw ShapeError("matmul: " + shape_str(a) + " * " + shape_str(b) +
                         " (inner dimensions differ)");
    Tensor2D c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
            c(i, j) = acc;
        }
    }
    check_finite(c, "matmul");
    return c;
}

Tensor2D matmul_transpose_a(const Tensor2D& a, const Tensor2D& b) {
    if (a.rows() != b.rows())
        throw ShapeError("matmul_transpose_a: " + shape_str(a) + "^T * " + shape_str(b) +
                         " (inner dimensions differ)");
    Tensor2D c(a.cols(), b.cols());
    for (std::size_t i = 0; i < a.cols(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.rows(); ++k) acc += a(k, i) * b(k, j);
            c(i, j) = acc;
        }
    }
    check_finite(c, "matmul_transpose_a");
    return c;
}

Tensor2D matmul_transpose_b(const Tensor2D& a, const Tensor2D& b) {
    if (a.cols() != b.cols())
        throw ShapeError("matmul_transpose_b: " + shape_str(a) + " * " + shape_str(b) +
                         "^T (inner dimensions differ)");
    Tensor2D c(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.rows(); ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(j, k);
            c(i, j) = acc;
        }
    }
    check_finite(c, "matmul_transpose_b");
    return c;
}

Tensor2D transpose(const Tensor2D& a) {
    Tensor2D t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

}  // namespace scn
