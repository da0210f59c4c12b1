#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "arps/core.hpp"
#include "arps/error.hpp"
#include "arps/integrator.hpp"
#include "arps/numfmt.hpp"

using namespace arps;

namespace {

Mat random_mat(std::mt19937_64& rng, std::size_t m) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Mat a(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) a(i, j) = u(rng);
    // Diagonal shift keeps the condition number modest.
    for (std::size_t i = 0; i < m; ++i) a(i, i) += static_cast<double>(m);
    return a;
}

void check_identity(const Mat& p, double tol) {
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j)
            CHECK(std::abs(p(i, j) - (i == j ? 1.0 : 0.0)) < tol);
}

}  // namespace

TEST_CASE("norm2 examples") {
    CHECK(norm2(Vec{0.0, 0.0}) == 0.0);
    CHECK(norm2(Vec{3.0, 4.0}) == 5.0);
    CHECK(norm2(symmetric_initial(1, 1)) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(norm2(symmetric_initial(4, 9)) == doctest::Approx(9e4).epsilon(1e-15));
}

TEST_CASE("norm2 triangle inequality and homogeneity") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-100.0, 100.0);
    for (int k = 0; k < 1000; ++k) {
        const std::size_t m = 1 + k % 6;
        Vec a(m), b(m);
        for (std::size_t i = 0; i < m; ++i) {
            a[i] = u(rng);
            b[i] = u(rng);
        }
        CHECK(norm2(a + b) <= norm2(a) + norm2(b) + 1e-12);
        const double s = u(rng);
        CHECK(norm2(s * a) == doctest::Approx(std::abs(s) * norm2(a)).epsilon(1e-13));
    }
}

TEST_CASE("mat_inf_norm examples") {
    CHECK(mat_inf_norm(Mat::identity(2)) == 1.0);
    CHECK(mat_inf_norm(Mat{{1, -2}, {0, 3}}) == 3.0);
    CHECK(mat_inf_norm(Mat{{0.5, 0.3}, {0, 0.3}}) == doctest::Approx(0.8));
}

TEST_CASE("invert examples") {
    CHECK(invert(Mat::identity(2)) == Mat::identity(2));
    const Mat g_inv = invert(Mat{{2, -3}, {0, 3}});
    CHECK(g_inv(0, 0) == doctest::Approx(0.5));
    CHECK(g_inv(0, 1) == doctest::Approx(0.5));
    CHECK(g_inv(1, 0) == doctest::Approx(0.0));
    CHECK(g_inv(1, 1) == doctest::Approx(1.0 / 3.0));
    try {
        invert(Mat{{1, 1}, {1, 1}});
        FAIL("expected SingularMatrix");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SingularMatrix);
    }
    CHECK(is_singular(Mat{{1, 1}, {1, 1}}));
    CHECK_FALSE(is_singular(Mat{{2, -3}, {0, 3}}));
}

TEST_CASE("singularity threshold is scale invariant") {
    const Mat tiny = 1e-9 * Mat{{2, -3}, {0, 3}};
    CHECK_FALSE(is_singular(tiny));
    check_identity(tiny * invert(tiny), 1e-10);
    Mat near(2);
    near(0, 0) = 1.0;
    near(0, 1) = 1.0;
    near(1, 0) = 1.0;
    near(1, 1) = 1.0 + 1e-14;
    CHECK(is_singular(near));
}

TEST_CASE("invert round trip on random well-conditioned matrices") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 500; ++k) {
        const std::size_t m = 1 + k % 8;
        const Mat a = random_mat(rng, m);
        const Mat inv = invert(a);
        check_identity(inv * a, 1e-10);
        check_identity(a * inv, 1e-10);
    }
}

TEST_CASE("min_eig_sym_part examples") {
    CHECK(min_eig_sym_part(Mat::identity(2)) == doctest::Approx(1.0));
    CHECK(min_eig_sym_part(Mat(2)) == doctest::Approx(0.0));
    CHECK(min_eig_sym_part(Mat{{0.5, 0}, {0, -0.3}}) == doctest::Approx(-0.3));
    CHECK(min_eig_sym_part(Mat{{-2.5}}) == -2.5);
    // Antisymmetric part is invisible.
    CHECK(min_eig_sym_part(Mat{{0, 5}, {-5, 0}}) == doctest::Approx(0.0));
}

TEST_CASE("min_eig_sym_part is unchanged by symmetrising") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 300; ++k) {
        const std::size_t m = 1 + k % 6;
        const Mat a = random_mat(rng, m);
        const Mat sym = 0.5 * (a + a.transpose());
        CHECK(min_eig_sym_part(a) == doctest::Approx(min_eig_sym_part(sym)).epsilon(1e-10));
    }
}

TEST_CASE("jacobi agrees with a 3x3 diagonal oracle") {
    // Rotate diag(3, -1, 0.5) by a fixed orthogonal matrix.
    const double c = std::cos(0.7), s = std::sin(0.7);
    const Mat q{{c, -s, 0}, {s, c, 0}, {0, 0, 1}};
    const Mat d{{3, 0, 0}, {0, -1, 0}, {0, 0, 0.5}};
    const Mat a = q * d * q.transpose();
    CHECK(min_eig_sym_part(a) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("mode names") {
    CHECK(std::string(to_string(Mode::ReachingPhase)) == "RP");
    CHECK(std::string(to_string(Mode::AdaptivePhase)) == "ASP");
}

TEST_CASE("17-digit formatting round trips") {
    for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0}) {
        CHECK(std::stod(format_g17(v)) == v);
    }
    CHECK(format_g17(0.5) == "0.5");
}
