#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <iostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "normlab/util.hpp"

namespace normlab {

/// Dense real matrix, row-major. Entries are checked finite on construction.
class DenseMatrix {
  public:
    DenseMatrix() = default;

    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {
        if (rows == 0 || cols == 0) throw InputError("matrix dimensions must be positive");
    }

    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
        : rows_(rows), cols_(cols), a_(std::move(entries)) {
        if (rows == 0 || cols == 0) throw InputError("matrix dimensions must be positive");
        if (a_.size() != rows * cols) throw InputError("entry count does not match shape");
        check_finite();
    }

    static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
        const std::size_t m = rows.size();
        if (m == 0) throw InputError("matrix dimensions must be positive");
        const std::size_t n = rows.begin()->size();
        std::vector<double> a;
        a.reserve(m * n);
        for (const auto& r : rows) {
            if (r.size() != n) throw InputError("ragged row in matrix literal");
            a.insert(a.end(), r.begin(), r.end());
        }
        return DenseMatrix(m, n, std::move(a));
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return a_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return a_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const { return {a_.data() + i * cols_, cols_}; }
    std::span<double> row(std::size_t i) { return {a_.data() + i * cols_, cols_}; }

    std::vector<double> col(std::size_t j) const {
        std::vector<double> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = a_[i * cols_ + j];
        return c;
    }

    const std::vector<double>& data() const noexcept { return a_; }

    DenseMatrix transpose() const {
        DenseMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    /// Entrywise square A o A.
    DenseMatrix hadamard_square() const {
        DenseMatrix s(rows_, cols_);
        for (std::size_t k = 0; k < a_.size(); ++k) s.a_[k] = a_[k] * a_[k];
        return s;
    }

    /// Entrywise product; shapes must match.
    DenseMatrix hadamard(const DenseMatrix& other) const {
        if (rows_ != other.rows_ || cols_ != other.cols_)
            throw InputError("hadamard product shape mismatch");
        DenseMatrix out(rows_, cols_);
        for (std::size_t k = 0; k < a_.size(); ++k) out.a_[k] = a_[k] * other.a_[k];
        return out;
    }

    DenseMatrix scaled(double c) const {
        DenseMatrix out(rows_, cols_);
        for (std::size_t k = 0; k < a_.size(); ++k) out.a_[k] = c * a_[k];
        return out;
    }

    /// y = B x; x must have cols() entries, y gets rows() entries.
    void multiply(std::span<const double> x, std::span<double> y) const {
        for (std::size_t i = 0; i < rows_; ++i) {
            const double* r = a_.data() + i * cols_;
            double s = 0.0;
            for (std::size_t j = 0; j < cols_; ++j) s += r[j] * x[j];
            y[i] = s;
        }
    }

    /// w = B^T z.
    void multiply_transposed(std::span<const double> z, std::span<double> w) const {
        for (std::size_t j = 0; j < cols_; ++j) w[j] = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) {
            const double* r = a_.data() + i * cols_;
            const double zi = z[i];
            if (zi == 0.0) continue;
            for (std::size_t j = 0; j < cols_; ++j) w[j] += zi * r[j];
        }
    }

    bool is_zero() const noexcept {
        for (double v : a_)
            if (v != 0.0) return false;
        return true;
    }

    bool is_nonnegative() const noexcept {
        for (double v : a_)
            if (v < 0.0) return false;
        return true;
    }

    double max_abs() const noexcept {
        double m = 0.0;
        for (double v : a_) m = std::max(m, std::fabs(v));
        return m;
    }

    bool operator==(const DenseMatrix& o) const noexcept {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    /// Plain CSV, one row per line, comma-separated decimals, no header.
    static DenseMatrix from_csv(std::istream& in);
    static DenseMatrix load_csv(const std::string& path);
    void to_csv(std::ostream& out) const;
    void save_csv(const std::string& path) const;

  private:
    void check_finite() const {
        for (double v : a_)
            if (!std::isfinite(v)) throw InputError("matrix entries must be finite");
    }

    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

inline DenseMatrix DenseMatrix::from_csv(std::istream& in) {
    std::vector<double> a;
    std::size_t rows = 0, cols = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::size_t n = 0;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t pos = 0;
                a.push_back(std::stod(cell, &pos));
            } catch (const std::exception&) {
                throw InputError("bad CSV cell '" + cell + "'");
            }
            ++n;
        }
        if (rows == 0)
            cols = n;
        else if (n != cols)
            throw InputError("ragged CSV row (expected " + std::to_string(cols) + " cells)");
        ++rows;
    }
    if (rows == 0) throw InputError("empty CSV matrix");
    return DenseMatrix(rows, cols, std::move(a));
}

inline DenseMatrix DenseMatrix::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read matrix file '" + path + "'");
    return from_csv(in);
}

inline void DenseMatrix::to_csv(std::ostream& out) const {
    char buf[40];
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", (*this)(i, j));
            out << (j ? "," : "") << buf;
        }
        out << '\n';
    }
}

inline void DenseMatrix::save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write matrix file '" + path + "'");
    to_csv(out);
}

}  // namespace normlab
