#include "hdinfer/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hdinfer {

double norm(const Vector& v, NormKind which) {
    double acc = 0.0;
    switch (which) {
        case NormKind::L1:
            for (double x : v) acc += std::fabs(x);
            return acc;
        case NormKind::L2:
            for (double x : v) acc += x * x;
            return std::sqrt(acc);
        case NormKind::LInf:
            for (double x : v) acc = std::max(acc, std::fabs(x));
            return acc;
    }
    return acc;
}

double std_normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

namespace {

// Wichura's PPND16-style rational approximation.
double normal_quantile_seed(double p) {
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2509.0809287301226727 * r + 33430.575583588128105) * r +
                     67265.770927008700853) *
                        r +
                    45921.953931549871457) *
                       r +
                   13731.693765509461125) *
                      r +
                  1971.5909503065514427) *
                     r +
                 133.14166789178437745) *
                    r +
                3.387132872796366608) /
               (((((((5226.495278852545703 * r + 28729.085735721942674) * r +
                     39307.89580009271061) *
                        r +
                    21213.794301586595867) *
                       r +
                   5394.1960214247511077) *
                      r +
                  687.1870074920579083) *
                     r +
                 42.313330701600911252) *
                    r +
                1.0);
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r +
                    0.24178072517745061177) *
                       r +
                   1.27045825245236838258) *
                      r +
                  3.64784832476320460504) *
                     r +
                 5.7694972214606914055) *
                    r +
                4.6303378461565452959) *
                   r +
               1.42343711074968357734) /
              (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r +
                    0.0151986665636164571966) *
                       r +
                   0.14810397642748007459) *
                      r +
                  0.68976733498510000455) *
                     r +
                 1.6763848301838038494) *
                    r +
                2.05319162663775882187) *
                   r +
               1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                    0.0012426609473880784386) *
                       r +
                   0.026532189526576123093) *
                      r +
                  0.29656057182850489123) *
                     r +
                 1.7848265399172913358) *
                    r +
                5.4637849111641143699) *
                   r +
               6.6579046435011037772) /
              (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r +
                    1.8463183175100546818e-5) *
                       r +
                   7.868691311456132591e-4) *
                      r +
                  0.0148753612908506148525) *
                     r +
                 0.13692988092273580531) *
                    r +
                0.59983220655588793769) *
                   r +
               1.0);
    }
    return (q < 0.0) ? -val : val;
}

}  // namespace

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("std_normal_quantile: p must lie in (0,1)");
    double x = normal_quantile_seed(p);
    // One Newton step sharpens the approximation to near machine precision.
    const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    if (pdf > 1e-300) x -= (std_normal_cdf(x) - p) / pdf;
    return x;
}

double empirical_quantile(const Vector& samples, double level) {
    if (samples.empty()) throw std::invalid_argument("empirical_quantile: empty sample");
    if (!(level > 0.0 && level <= 1.0))
        throw std::invalid_argument("empirical_quantile: level must lie in (0,1]");
    Vector sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t b = sorted.size();
    std::size_t k = static_cast<std::size_t>(std::ceil(level * static_cast<double>(b)));
    if (k < 1) k = 1;
    if (k > b) k = b;
    return sorted[k - 1];
}

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 33;
    z *= 0xff51afd7ed558ccdULL;
    z ^= z >> 33;
    z *= 0xc4ceb9fe1a85ec53ULL;
    z ^= z >> 33;
    return z;
}

}  // namespace

std::uint64_t Rng::next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t Rng::uniform_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_below: n must be positive");
    // Rejection sampling removes modulo bias.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % n;
}

double Rng::normal() { return std_normal_quantile(uniform()); }

double Rng::exponential() { return -std::log(uniform()); }

double Rng::student_t4() {
    // t(4) = N(0,1) / sqrt(chi2(4)/4); chi2(4) = -2 log(U1 U2).
    const double z = normal();
    const double chi2 = -2.0 * std::log(uniform() * uniform());
    return z / std::sqrt(chi2 / 4.0);
}

Rng Rng::fork(std::uint64_t stream) const {
    return Rng(mix64(state_ ^ mix64(stream + 0x632be59bd9b4e019ULL)));
}

Vector mat_vec(const Matrix& a, const Vector& x) {
    if (x.size() != a.cols) throw std::invalid_argument("mat_vec: dimension mismatch");
    Vector y(a.rows, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) {
        double acc = 0.0;
        const double* row = &a.data[i * a.cols];
        for (std::size_t j = 0; j < a.cols; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
    return y;
}

Vector vec_mat(const Vector& y, const Matrix& a) {
    if (y.size() != a.rows) throw std::invalid_argument("vec_mat: dimension mismatch");
    Vector out(a.cols, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double yi = y[i];
        if (yi == 0.0) continue;
        const double* row = &a.data[i * a.cols];
        for (std::size_t j = 0; j < a.cols; ++j) out[j] += yi * row[j];
    }
    return out;
}

Matrix mat_mul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("mat_mul: dimension mismatch");
    Matrix c(a.rows, b.cols, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            const double* brow = &b.data[k * b.cols];
            double* crow = &c.data[i * c.cols];
            for (std::size_t j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols, a.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
    return t;
}

Vector solve_linear_system(Matrix a, Vector b) {
    if (a.rows != a.cols || b.size() != a.rows)
        throw std::invalid_argument("solve_linear_system: dimension mismatch");
    const std::size_t n = a.rows;
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::fabs(a(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::fabs(a(r, col));
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        if (best < 1e-13)
            throw std::runtime_error("solve_linear_system: matrix is singular");
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
            std::swap(b[col], b[pivot]);
        }
        const double d = a(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a(r, col) / d;
            if (f == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
            b[r] -= f * b[col];
        }
    }
    Vector x(n, 0.0);
    for (std::size_t ii = n; ii-- > 0;) {
        double acc = b[ii];
        for (std::size_t j = ii + 1; j < n; ++j) acc -= a(ii, j) * x[j];
        x[ii] = acc / a(ii, ii);
    }
    return x;
}

Matrix invert(const Matrix& a) {
    if (a.rows != a.cols) throw std::invalid_argument("invert: matrix must be square");
    const std::size_t n = a.rows;
    Matrix inv(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        Vector e(n, 0.0);
        e[j] = 1.0;
        Vector col = solve_linear_system(a, e);
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
}

Vector symmetric_eigenvalues(Matrix a) {
    if (a.rows != a.cols)
        throw std::invalid_argument("symmetric_eigenvalues: matrix must be square");
    const std::size_t n = a.rows;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::fabs(apq) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    Vector eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

Vector singular_values(const Matrix& a) {
    // Singular values are the square roots of the eigenvalues of the smaller Gram matrix.
    const Matrix at = transpose(a);
    const Matrix gram = (a.rows <= a.cols) ? mat_mul(a, at) : mat_mul(at, a);
    Vector eig = symmetric_eigenvalues(gram);
    for (double& v : eig) v = std::sqrt(std::max(v, 0.0));
    return eig;
}

}  // namespace hdinfer
