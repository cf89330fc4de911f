#include "sgr/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sgr/error.hpp"

namespace sgr {

namespace {

double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

}  // namespace

SpectralDecomposition sym_eig(const Matrix& m) {
    require(m.rows() == m.cols(), "sym_eig: matrix not square");
    const std::size_t n = m.rows();
    {
        double asym = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double d = m(i, j) - m(j, i);
                asym += d * d;
            }
        require(std::sqrt(asym) <= 1e-9, "sym_eig: matrix not symmetric");
    }

    Matrix a = m;
    Matrix v = Matrix::identity(n);
    const double tol = 1e-12 * std::max(1.0, frobenius_norm(m));
    const int max_sweeps = 100;
    bool converged = n < 2 || off_diagonal_norm(a) <= tol;

    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                const double app = a(p, p);
                const double aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = akp - s * (akq + tau * akp);
                    a(p, k) = a(k, p);
                    a(k, q) = akq + s * (akp - tau * akq);
                    a(q, k) = a(k, q);
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = vkp - s * (vkq + tau * vkp);
                    v(k, q) = vkq + s * (vkp - tau * vkq);
                }
            }
        }
        converged = off_diagonal_norm(a) <= tol;
    }
    require(converged, "sym_eig: no convergence after ", max_sweeps, " sweeps");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    SpectralDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = Matrix(n, n);
    for (std::size_t col = 0; col < n; ++col) {
        const std::size_t src = order[col];
        out.eigenvalues[col] = a(src, src);
        double sign = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (std::fabs(v(k, src)) > 1e-12) {
                sign = v(k, src) > 0.0 ? 1.0 : -1.0;
                break;
            }
        }
        for (std::size_t k = 0; k < n; ++k) out.eigenvectors(k, col) = sign * v(k, src);
    }
    return out;
}

std::size_t zero_eigenvalue_count(const SpectralDecomposition& d) {
    if (d.eigenvalues.empty()) return 0;
    const double lmax = std::fabs(d.eigenvalues.back());
    const double thresh = 1e-8 * std::max(1.0, lmax);
    std::size_t count = 0;
    for (double l : d.eigenvalues)
        if (std::fabs(l) < thresh) ++count;
    return count;
}

namespace {

Matrix pinv_from_powers(const SpectralDecomposition& d, double power) {
    const std::size_t zeros = zero_eigenvalue_count(d);
    require(zeros >= 1, "laplacian_pinv: no zero eigenvalue, input is not a Laplacian");
    require(zeros == 1, "laplacian_pinv: disconnected graph (", zeros, " zero eigenvalues)");
    const std::size_t n = d.eigenvalues.size();
    Matrix out(n, n);
    for (std::size_t i = 1; i < n; ++i) {
        const double scale = std::pow(d.eigenvalues[i], power);
        for (std::size_t r = 0; r < n; ++r) {
            const double fr = d.eigenvectors(r, i) * scale;
            if (fr == 0.0) continue;
            for (std::size_t c = 0; c < n; ++c) out(r, c) += fr * d.eigenvectors(c, i);
        }
    }
    return out;
}

}  // namespace

Matrix laplacian_pinv(const SpectralDecomposition& d) { return pinv_from_powers(d, -1.0); }

Matrix laplacian_pinv(const Matrix& laplacian) { return laplacian_pinv(sym_eig(laplacian)); }

Matrix laplacian_pinv_sqrt(const SpectralDecomposition& d) { return pinv_from_powers(d, -0.5); }

Matrix cdist(const Matrix& z, bool squared) {
    const std::size_t n = z.rows();
    Matrix d(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < z.cols(); ++k) {
                const double diff = z(i, k) - z(j, k);
                s += diff * diff;
            }
            const double val = squared ? s : std::sqrt(s);
            d(i, j) = val;
            d(j, i) = val;
        }
    }
    return d;
}

bool psd_dominates(const Matrix& hi, const Matrix& lo) {
    require(hi.same_shape(lo), "psd_dominates: shape mismatch");
    Matrix diff = hi;
    diff -= lo;
    auto d = sym_eig(diff);
    return d.eigenvalues.front() >= -1e-9;
}

}  // namespace sgr
