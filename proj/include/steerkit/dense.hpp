#pragma once

// Dense complex matrices, used only as an independent cross-check of the
// Pauli 4-vector arithmetic. Nothing on the production path depends on them.

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "steerkit/effect.hpp"
#include "steerkit/vec3.hpp"

namespace steerkit {

using cplx = std::complex<double>;

struct Mat2 {
    std::array<cplx, 4> m{};  // row major

    cplx& operator()(int i, int j) { return m[static_cast<std::size_t>(2 * i + j)]; }
    const cplx& operator()(int i, int j) const { return m[static_cast<std::size_t>(2 * i + j)]; }

    Mat2 operator+(const Mat2& o) const {
        Mat2 r;
        for (int i = 0; i < 4; ++i) r.m[i] = m[i] + o.m[i];
        return r;
    }
    Mat2 operator-(const Mat2& o) const {
        Mat2 r;
        for (int i = 0; i < 4; ++i) r.m[i] = m[i] - o.m[i];
        return r;
    }
    Mat2 operator*(cplx s) const {
        Mat2 r;
        for (int i = 0; i < 4; ++i) r.m[i] = m[i] * s;
        return r;
    }
    Mat2 operator*(const Mat2& o) const {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                r(i, j) = (*this)(i, 0) * o(0, j) + (*this)(i, 1) * o(1, j);
        return r;
    }
    Mat2 transpose() const {
        Mat2 r = *this;
        std::swap(r.m[1], r.m[2]);
        return r;
    }
    cplx trace() const { return m[0] + m[3]; }
    double hermiticity_violation() const {
        double v = std::abs(m[1] - std::conj(m[2]));
        v = std::max(v, std::abs(m[0].imag()));
        v = std::max(v, std::abs(m[3].imag()));
        return v;
    }
    double max_abs_diff(const Mat2& o) const {
        double v = 0.0;
        for (int i = 0; i < 4; ++i) v = std::max(v, std::abs(m[i] - o.m[i]));
        return v;
    }
};

inline Mat2 pauli_x() { return {{cplx(0), cplx(1), cplx(1), cplx(0)}}; }
inline Mat2 pauli_y() { return {{cplx(0), cplx(0, -1), cplx(0, 1), cplx(0)}}; }
inline Mat2 pauli_z() { return {{cplx(1), cplx(0), cplx(0), cplx(-1)}}; }
inline Mat2 identity2() { return {{cplx(1), cplx(0), cplx(0), cplx(1)}}; }

inline Mat2 to_matrix(const Effect& e) {
    Mat2 r;
    r(0, 0) = cplx(e.t + e.b.z);
    r(0, 1) = cplx(e.b.x, -e.b.y);
    r(1, 0) = cplx(e.b.x, e.b.y);
    r(1, 1) = cplx(e.t - e.b.z);
    return r;
}

inline Effect from_matrix(const Mat2& m, double tol = kOracleTol) {
    if (m.hermiticity_violation() > tol)
        throw std::invalid_argument("from_matrix: matrix is not Hermitian");
    Effect e;
    e.t = 0.5 * (m(0, 0).real() + m(1, 1).real());
    e.b.x = m(1, 0).real();
    e.b.y = m(1, 0).imag();
    e.b.z = 0.5 * (m(0, 0).real() - m(1, 1).real());
    return e;
}

// Eigenvalues of a Hermitian 2x2 from the matrix entries.
inline std::array<double, 2> hermitian_eigenvalues(const Mat2& m) {
    double h = 0.5 * (m(0, 0).real() + m(1, 1).real());
    double g = 0.5 * (m(0, 0).real() - m(1, 1).real());
    double d = std::sqrt(g * g + std::norm(m(0, 1)));
    return {h - d, h + d};
}

struct Mat4 {
    std::array<cplx, 16> m{};

    cplx& operator()(int i, int j) { return m[static_cast<std::size_t>(4 * i + j)]; }
    const cplx& operator()(int i, int j) const { return m[static_cast<std::size_t>(4 * i + j)]; }

    Mat4 operator+(const Mat4& o) const {
        Mat4 r;
        for (int i = 0; i < 16; ++i) r.m[i] = m[i] + o.m[i];
        return r;
    }
    Mat4 operator*(cplx s) const {
        Mat4 r;
        for (int i = 0; i < 16; ++i) r.m[i] = m[i] * s;
        return r;
    }
    cplx trace() const { return m[0] + m[5] + m[10] + m[15]; }
};

inline Mat4 kron(const Mat2& a, const Mat2& b) {
    Mat4 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    r(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return r;
}

// Trace out the first (Alice's) qubit.
inline Mat2 partial_trace_first(const Mat4& m) {
    Mat2 r;
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
            r(k, l) = m(0 * 2 + k, 0 * 2 + l) + m(1 * 2 + k, 1 * 2 + l);
    return r;
}

}  // namespace steerkit
