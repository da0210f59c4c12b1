#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>

namespace arps {

/// Largest supported system dimension. Storage is inline so the hot
/// integration loop never touches the heap.
inline constexpr std::size_t kMaxDim = 16;

/// Dense real vector of runtime length m <= kMaxDim.
class Vec {
public:
    Vec() = default;
    explicit Vec(std::size_t m);
    Vec(std::initializer_list<double> values);

    std::size_t size() const noexcept { return m_; }

    double& operator[](std::size_t i) noexcept { return v_[i]; }
    double operator[](std::size_t i) const noexcept { return v_[i]; }

    std::span<double> span() noexcept { return {v_.data(), m_}; }
    std::span<const double> span() const noexcept { return {v_.data(), m_}; }

    double* begin() noexcept { return v_.data(); }
    double* end() noexcept { return v_.data() + m_; }
    const double* begin() const noexcept { return v_.data(); }
    const double* end() const noexcept { return v_.data() + m_; }

    Vec& operator+=(const Vec& rhs) noexcept;
    Vec& operator-=(const Vec& rhs) noexcept;
    Vec& operator*=(double s) noexcept;

    friend bool operator==(const Vec& a, const Vec& b) noexcept;

private:
    std::size_t m_ = 0;
    std::array<double, kMaxDim> v_{};
};

Vec operator+(Vec a, const Vec& b) noexcept;
Vec operator-(Vec a, const Vec& b) noexcept;
Vec operator*(double s, Vec v) noexcept;
double dot(const Vec& a, const Vec& b) noexcept;
bool is_finite(const Vec& v) noexcept;

/// Dense real m x m matrix, row-major.
class Mat {
public:
    Mat() = default;
    explicit Mat(std::size_t m);
    Mat(std::initializer_list<std::initializer_list<double>> rows);

    static Mat identity(std::size_t m);

    std::size_t size() const noexcept { return m_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return a_[i * kMaxDim + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return a_[i * kMaxDim + j]; }

    Mat transpose() const noexcept;

    friend bool operator==(const Mat& a, const Mat& b) noexcept;

private:
    // Only the leading m x m block is meaningful; the rest stays uninitialized.
    std::size_t m_ = 0;
    std::array<double, kMaxDim * kMaxDim> a_;
};

Mat operator+(const Mat& a, const Mat& b) noexcept;
Mat operator*(const Mat& a, const Mat& b) noexcept;
Mat operator*(double s, const Mat& a) noexcept;
Vec operator*(const Mat& a, const Vec& v) noexcept;

/// Euclidean norm.
double norm2(const Vec& v) noexcept;

/// Induced infinity norm: largest absolute row sum.
double mat_inf_norm(const Mat& a) noexcept;

/// Inverse by Gauss-Jordan elimination with partial pivoting. Throws
/// Error{SingularMatrix} when |det A| < 1e-12 * (max |a_ij|)^m.
Mat invert(const Mat& a);

/// True when `a` passes the singularity test used by invert().
bool is_singular(const Mat& a) noexcept;

/// Smallest eigenvalue of the symmetric part (A + A^T) / 2. Closed form for
/// m <= 2, cyclic Jacobi otherwise.
double min_eig_sym_part(const Mat& a) noexcept;

enum class Mode { ReachingPhase, AdaptivePhase };

const char* to_string(Mode mode) noexcept;

struct StateVector {
    Vec sigma;
    double t = 0.0;
};

/// Adaptive integrator state threaded through a simulation. beta_hat feeds
/// the reaching-phase law, k_hat the baseline law; t_bar is set exactly when
/// mode switches to AdaptivePhase.
struct GainState {
    double beta_hat = 0.0;
    double k_hat = 0.0;
    Mode mode = Mode::ReachingPhase;
    std::optional<double> t_bar;
};

}  // namespace arps
