#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace hdinfer {

using Vector = std::vector<double>;

// Dense row-major matrix.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    Vector data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
};

enum class NormKind { L1, L2, LInf };

double norm(const Vector& v, NormKind which);

// Standard normal CDF, accurate to ~1e-15 on the whole real line.
double std_normal_cdf(double x);

// Inverse standard normal CDF on (0,1); rational approximation seed
// polished by one Newton step against std_normal_cdf.
double std_normal_quantile(double p);

// The ceil(B*level)-th order statistic of the samples.
double empirical_quantile(const Vector& samples, double level);

// Counter-based splittable generator (splitmix64 core). Identical seeds
// give identical streams; fork(k) derives an independent child stream.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    // Uniform on the open interval (0,1).
    double uniform();
    std::uint64_t uniform_below(std::uint64_t n);
    double normal();
    double exponential();
    double student_t4();

    Rng fork(std::uint64_t stream) const;

  private:
    std::uint64_t state_;
};

Vector mat_vec(const Matrix& a, const Vector& x);
// y' A for a row vector y (length a.rows).
Vector vec_mat(const Vector& y, const Matrix& a);
Matrix mat_mul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

// Gaussian elimination with partial pivoting; throws std::runtime_error
// on (numerically) singular input.
Vector solve_linear_system(Matrix a, Vector b);
Matrix invert(const Matrix& a);

// Eigenvalues of a symmetric matrix via cyclic Jacobi, ascending order.
Vector symmetric_eigenvalues(Matrix a);

// Singular values of a (possibly rectangular) matrix, ascending.
Vector singular_values(const Matrix& a);

}  // namespace hdinfer
