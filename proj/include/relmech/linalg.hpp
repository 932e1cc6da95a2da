#pragma once
#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>

#include "relmech/errors.hpp"

namespace relmech {

// Charts used here never exceed this dimension; storage is fixed-width.
inline constexpr std::size_t kMaxDim = 8;

// Point coordinates or vector components in the active chart.
class Coords {
public:
    Coords() = default;

    explicit Coords(std::size_t n, double fill = 0.0) : n_(checked(n)) {
        std::fill_n(v_.begin(), n_, fill);
    }

    Coords(std::initializer_list<double> values) : n_(checked(values.size())) {
        std::copy(values.begin(), values.end(), v_.begin());
    }

    static Coords from(std::span<const double> values) {
        Coords c(values.size());
        std::copy(values.begin(), values.end(), c.v_.begin());
        return c;
    }

    static Coords unit(std::size_t n, std::size_t axis) {
        Coords c(n);
        c[axis] = 1.0;
        return c;
    }

    std::size_t size() const { return n_; }
    double& operator[](std::size_t i) { return v_[i]; }
    double operator[](std::size_t i) const { return v_[i]; }

    double* begin() { return v_.data(); }
    double* end() { return v_.data() + n_; }
    const double* begin() const { return v_.data(); }
    const double* end() const { return v_.data() + n_; }
    std::span<const double> span() const { return {v_.data(), n_}; }

    bool all_finite() const {
        return std::all_of(begin(), end(), [](double x) { return std::isfinite(x); });
    }

    Coords& operator+=(const Coords& o) {
        require_same_size(o);
        for (std::size_t i = 0; i < n_; ++i) v_[i] += o.v_[i];
        return *this;
    }
    Coords& operator-=(const Coords& o) {
        require_same_size(o);
        for (std::size_t i = 0; i < n_; ++i) v_[i] -= o.v_[i];
        return *this;
    }
    Coords& operator*=(double k) {
        for (std::size_t i = 0; i < n_; ++i) v_[i] *= k;
        return *this;
    }

    friend bool operator==(const Coords& a, const Coords& b) {
        return a.n_ == b.n_ && std::equal(a.begin(), a.end(), b.begin());
    }

private:
    static std::size_t checked(std::size_t n) {
        if (n > kMaxDim) {
            throw PreconditionError("dimension " + std::to_string(n) + " exceeds maximum " +
                                    std::to_string(kMaxDim));
        }
        return n;
    }
    void require_same_size(const Coords& o) const {
        if (o.n_ != n_) throw PreconditionError("component arrays differ in dimension");
    }

    std::array<double, kMaxDim> v_{};
    std::size_t n_ = 0;
};

inline Coords operator+(Coords a, const Coords& b) { return a += b; }
inline Coords operator-(Coords a, const Coords& b) { return a -= b; }
inline Coords operator*(Coords a, double k) { return a *= k; }
inline Coords operator*(double k, Coords a) { return a *= k; }
inline Coords operator-(Coords a) {
    for (double& x : a) x = -x;
    return a;
}

inline double max_norm(const Coords& a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

inline double max_abs_diff(const Coords& a, const Coords& b) {
    if (a.size() != b.size()) throw PreconditionError("component arrays differ in dimension");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Dense row-major n x n matrix, n <= kMaxDim.
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n) : n_(n) {
        if (n > kMaxDim) throw PreconditionError("matrix dimension exceeds maximum");
    }

    static SquareMatrix identity(std::size_t n) {
        SquareMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static SquareMatrix diagonal(std::initializer_list<double> d) {
        SquareMatrix m(d.size());
        std::size_t i = 0;
        for (double x : d) {
            m(i, i) = x;
            ++i;
        }
        return m;
    }

    std::size_t size() const { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * kMaxDim + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * kMaxDim + j]; }

    bool all_finite() const {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                if (!std::isfinite((*this)(i, j))) return false;
        return true;
    }

    SquareMatrix& operator+=(const SquareMatrix& o) {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) (*this)(i, j) += o(i, j);
        return *this;
    }
    SquareMatrix& operator*=(double k) {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) (*this)(i, j) *= k;
        return *this;
    }

private:
    std::array<double, kMaxDim * kMaxDim> a_{};
    std::size_t n_ = 0;
};

inline SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b) { return a += b; }
inline SquareMatrix operator*(SquareMatrix a, double k) { return a *= k; }

inline SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
    const std::size_t n = a.size();
    SquareMatrix c(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

inline Coords operator*(const SquareMatrix& m, const Coords& v) {
    if (m.size() != v.size()) throw PreconditionError("matrix/vector dimension mismatch");
    Coords r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < v.size(); ++j) acc += m(i, j) * v[j];
        r[i] = acc;
    }
    return r;
}

inline double max_abs_diff(const SquareMatrix& a, const SquareMatrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

// Determinant by partial-pivot elimination.
inline double determinant(SquareMatrix m) {
    const std::size_t n = m.size();
    double det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
        if (m(piv, col) == 0.0) return 0.0;
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
            det = -det;
        }
        det *= m(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = m(r, col) / m(col, col);
            for (std::size_t j = col; j < n; ++j) m(r, j) -= f * m(col, j);
        }
    }
    return det;
}

// Gamma^out_{in1 in2} at one point, stored densely.
class ConnectionCoefficients {
public:
    ConnectionCoefficients() = default;
    explicit ConnectionCoefficients(std::size_t n) : n_(n) {
        if (n > kMaxDim) throw PreconditionError("connection dimension exceeds maximum");
    }

    std::size_t size() const { return n_; }
    double& operator()(std::size_t out, std::size_t in1, std::size_t in2) {
        return g_[(out * kMaxDim + in1) * kMaxDim + in2];
    }
    double operator()(std::size_t out, std::size_t in1, std::size_t in2) const {
        return g_[(out * kMaxDim + in1) * kMaxDim + in2];
    }

private:
    std::array<double, kMaxDim * kMaxDim * kMaxDim> g_{};
    std::size_t n_ = 0;
};

}  // namespace relmech
