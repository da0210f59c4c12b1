#include "arps/core.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "arps/error.hpp"

namespace arps {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::SingularMatrix: return "SingularMatrix";
        case ErrorCode::DeadzoneHit: return "DeadzoneHit";
        case ErrorCode::TimeHorizonExceeded: return "TimeHorizonExceeded";
        case ErrorCode::BarrierBreached: return "BarrierBreached";
        case ErrorCode::NonFiniteState: return "NonFiniteState";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

const char* to_string(Mode mode) noexcept {
    return mode == Mode::ReachingPhase ? "RP" : "ASP";
}

namespace {

void check_dim(std::size_t m) {
    if (m > kMaxDim) {
        throw Error(ErrorCode::InvalidArgument,
                    "dimension " + std::to_string(m) + " exceeds kMaxDim");
    }
}

}  // namespace

Vec::Vec(std::size_t m) : m_(m) { check_dim(m); }

Vec::Vec(std::initializer_list<double> values) : m_(values.size()) {
    check_dim(m_);
    std::copy(values.begin(), values.end(), v_.begin());
}

Vec& Vec::operator+=(const Vec& rhs) noexcept {
    assert(rhs.m_ == m_);
    for (std::size_t i = 0; i < m_; ++i) v_[i] += rhs.v_[i];
    return *this;
}

Vec& Vec::operator-=(const Vec& rhs) noexcept {
    assert(rhs.m_ == m_);
    for (std::size_t i = 0; i < m_; ++i) v_[i] -= rhs.v_[i];
    return *this;
}

Vec& Vec::operator*=(double s) noexcept {
    for (std::size_t i = 0; i < m_; ++i) v_[i] *= s;
    return *this;
}

bool operator==(const Vec& a, const Vec& b) noexcept {
    return a.m_ == b.m_ && std::equal(a.begin(), a.end(), b.begin());
}

Vec operator+(Vec a, const Vec& b) noexcept { return a += b; }
Vec operator-(Vec a, const Vec& b) noexcept { return a -= b; }
Vec operator*(double s, Vec v) noexcept { return v *= s; }

double dot(const Vec& a, const Vec& b) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

bool is_finite(const Vec& v) noexcept {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

Mat::Mat(std::size_t m) : m_(m) {
    check_dim(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) (*this)(i, j) = 0.0;
}

Mat::Mat(std::initializer_list<std::initializer_list<double>> rows) : m_(rows.size()) {
    check_dim(m_);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != m_) {
            throw Error(ErrorCode::InvalidArgument, "matrix rows must be square");
        }
        std::size_t j = 0;
        for (double x : row) (*this)(i, j++) = x;
        ++i;
    }
}

Mat Mat::identity(std::size_t m) {
    Mat id(m);
    for (std::size_t i = 0; i < m; ++i) id(i, i) = 1.0;
    return id;
}

Mat Mat::transpose() const noexcept {
    Mat t(m_);
    for (std::size_t i = 0; i < m_; ++i)
        for (std::size_t j = 0; j < m_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool operator==(const Mat& a, const Mat& b) noexcept {
    if (a.m_ != b.m_) return false;
    for (std::size_t i = 0; i < a.m_; ++i)
        for (std::size_t j = 0; j < a.m_; ++j)
            if (a(i, j) != b(i, j)) return false;
    return true;
}

Mat operator+(const Mat& a, const Mat& b) noexcept {
    Mat c = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) c(i, j) += b(i, j);
    return c;
}

Mat operator*(const Mat& a, const Mat& b) noexcept {
    const std::size_t m = a.size();
    Mat c(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < m; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Mat operator*(double s, const Mat& a) noexcept {
    Mat c = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) c(i, j) *= s;
    return c;
}

Vec operator*(const Mat& a, const Vec& v) noexcept {
    const std::size_t m = a.size();
    Vec out(m);
    for (std::size_t i = 0; i < m; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) acc += a(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

double norm2(const Vec& v) noexcept { return std::sqrt(dot(v, v)); }

double mat_inf_norm(const Mat& a) noexcept {
    double best = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) row += std::abs(a(i, j));
        best = std::max(best, row);
    }
    return best;
}

namespace {

double max_abs_entry(const Mat& a) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) s = std::max(s, std::abs(a(i, j)));
    return s;
}

// Gauss-Jordan on [work | inv]. Returns the determinant of the input; `inv`
// holds the inverse only when the returned determinant is nonzero.
double gauss_jordan(Mat work, Mat& inv) noexcept {
    const std::size_t m = work.size();
    inv = Mat::identity(m);
    double det = 1.0;
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < m; ++r)
            if (std::abs(work(r, col)) > std::abs(work(pivot, col))) pivot = r;
        const double p = work(pivot, col);
        if (p == 0.0) return 0.0;
        if (pivot != col) {
            for (std::size_t j = 0; j < m; ++j) {
                std::swap(work(col, j), work(pivot, j));
                std::swap(inv(col, j), inv(pivot, j));
            }
            det = -det;
        }
        det *= p;
        for (std::size_t j = 0; j < m; ++j) {
            work(col, j) /= p;
            inv(col, j) /= p;
        }
        for (std::size_t r = 0; r < m; ++r) {
            if (r == col) continue;
            const double factor = work(r, col);
            if (factor == 0.0) continue;
            for (std::size_t j = 0; j < m; ++j) {
                work(r, j) -= factor * work(col, j);
                inv(r, j) -= factor * inv(col, j);
            }
        }
    }
    return det;
}

bool below_threshold(const Mat& a, double det) noexcept {
    const double scale = std::pow(max_abs_entry(a), static_cast<double>(a.size()));
    return std::abs(det) < 1e-12 * scale || scale == 0.0;
}

}  // namespace

bool is_singular(const Mat& a) noexcept {
    Mat inv;
    return below_threshold(a, gauss_jordan(a, inv));
}

Mat invert(const Mat& a) {
    if (a.size() == 2) {
        const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
        if (below_threshold(a, det)) throw Error(ErrorCode::SingularMatrix, "matrix is singular");
        return Mat{{a(1, 1) / det, -a(0, 1) / det}, {-a(1, 0) / det, a(0, 0) / det}};
    }
    Mat inv;
    const double det = gauss_jordan(a, inv);
    if (below_threshold(a, det)) throw Error(ErrorCode::SingularMatrix, "matrix is singular");
    return inv;
}

namespace {

double jacobi_min_eig(Mat s) noexcept {
    const std::size_t m = s.size();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        double diag = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            diag += s(i, i) * s(i, i);
            for (std::size_t j = i + 1; j < m; ++j) off += s(i, j) * s(i, j);
        }
        if (off <= 1e-12 * 1e-12 * std::max(diag, 1e-300)) break;
        for (std::size_t p = 0; p + 1 < m; ++p) {
            for (std::size_t q = p + 1; q < m; ++q) {
                const double apq = s(p, q);
                if (apq == 0.0) continue;
                const double theta = (s(q, q) - s(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (std::size_t k = 0; k < m; ++k) {
                    const double skp = s(k, p);
                    const double skq = s(k, q);
                    s(k, p) = c * skp - sn * skq;
                    s(k, q) = sn * skp + c * skq;
                }
                for (std::size_t k = 0; k < m; ++k) {
                    const double spk = s(p, k);
                    const double sqk = s(q, k);
                    s(p, k) = c * spk - sn * sqk;
                    s(q, k) = sn * spk + c * sqk;
                }
            }
        }
    }
    double lo = s(0, 0);
    for (std::size_t i = 1; i < m; ++i) lo = std::min(lo, s(i, i));
    return lo;
}

}  // namespace

double min_eig_sym_part(const Mat& a) noexcept {
    const std::size_t m = a.size();
    if (m == 0) return 0.0;
    if (m == 1) return a(0, 0);
    if (m == 2) {
        const double p = a(0, 0);
        const double r = a(1, 1);
        const double q = 0.5 * (a(0, 1) + a(1, 0));
        const double mean = 0.5 * (p + r);
        const double half_diff = 0.5 * (p - r);
        return mean - std::hypot(half_diff, q);
    }
    return jacobi_min_eig(0.5 * (a + a.transpose()));
}

}  // namespace arps
