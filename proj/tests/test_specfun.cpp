#include <doctest.h>

#include "ygraph/errors.hpp"
#include "ygraph/specfun.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/airy.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <limits>

using namespace ygraph;

namespace {
const double s13 = std::cbrt(1.0 / 3.0);
double oracle_A(double x) { return s13 * boost::math::airy_ai(s13 * x); }
double oracle_Ap(double x) { return s13 * s13 * boost::math::airy_ai_prime(s13 * x); }
} // namespace

TEST_CASE("A(0) and A'(0) anchors")
{
    CHECK(airy_scaled(0.0) == doctest::Approx(1.0 / (3.0 * std::tgamma(2.0 / 3.0))).epsilon(1e-12));
    CHECK(std::fabs(airy_scaled(0.0) - 0.24616270387388277) < 1e-12);
    CHECK(std::fabs(airy_scaled_deriv(0.0) + 1.0 / (3.0 * std::tgamma(1.0 / 3.0))) < 1e-12);
    CHECK(std::fabs(airy_scaled_deriv(0.0) + 0.12442739130246508) < 1e-12);
}

TEST_CASE("scaling relation to the standard Airy function on [-10,10]")
{
    for (int i = 0; i < 100; ++i) {
        double x = -10.0 + 20.0 * i / 99.0;
        CHECK(std::fabs(airy_scaled(x) - oracle_A(x)) < 1e-9);
    }
}

TEST_CASE("absolute accuracy on |x| <= 30")
{
    double worst = 0, worstd = 0;
    for (int i = 0; i <= 6000; ++i) {
        double x = -30.0 + 60.0 * i / 6000.0;
        worst = std::max(worst, std::fabs(airy_scaled(x) - oracle_A(x)));
        worstd = std::max(worstd, std::fabs(airy_scaled_deriv(x) - oracle_Ap(x)));
    }
    CHECK(worst < 1e-10);
    CHECK(worstd < 1e-9);
}

TEST_CASE("A'(5) against the differentiated scaling relation")
{
    CHECK(std::fabs(airy_scaled_deriv(5.0) - oracle_Ap(5.0)) < 1e-9);
}

TEST_CASE("centered difference of A at 0")
{
    double h = 1e-4;
    CHECK(std::fabs((airy_scaled(h) - airy_scaled(-h)) / (2 * h) - airy_scaled_deriv(0.0)) < 1e-7);
}

TEST_CASE("ODE residual A'' = (x/3) A by 5-point differences")
{
    double h = 1e-2, worst = 0;
    for (int i = 0; i < 200; ++i) {
        double x = -8.0 + 16.0 * i / 199.0;
        double d2 = (-airy_scaled(x + 2 * h) + 16 * airy_scaled(x + h) - 30 * airy_scaled(x) + 16 * airy_scaled(x - h) -
                     airy_scaled(x - 2 * h)) /
                    (12 * h * h);
        worst = std::max(worst, std::fabs(d2 - x / 3.0 * airy_scaled(x)));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("positive-axis bound and monotone decay")
{
    double prev = airy_scaled(1.0);
    for (int i = 0; i <= 3000; ++i) {
        double x = 0.01 * i;
        CHECK(std::fabs(airy_scaled(x)) <= airy_scaled(0.0) + 0.1);
        if (x > 1.0) {
            double a = airy_scaled(x);
            CHECK(a <= prev);
            prev = a;
        }
    }
    CHECK(airy_scaled(-1.0) != doctest::Approx(airy_scaled(1.0)));
}

TEST_CASE("integral over the positive axis is 1/3")
{
    boost::math::quadrature::exp_sinh<double> q;
    double v = q.integrate([](double x) { return airy_scaled(x); });
    CHECK(std::fabs(v - 1.0 / 3.0) < 1e-8);
}

TEST_CASE("total integral is 1 with an asymptotic tail for x < 0")
{
    const double X = 200.0;
    double neg = 0;
    const int panels = 4000;
    for (int p = 0; p < panels; ++p) {
        double a = -X + X * p / panels, b = -X + X * (p + 1) / panels;
        neg += boost::math::quadrature::gauss<double, 20>::integrate([](double x) { return airy_scaled(x); }, a, b);
    }
    // int_{-inf}^{-X} A = -3A'(-X)/X + 3A(-X)/X^2 + O(X^{-13/4}), from A = 3A''/x.
    neg += -3.0 * airy_scaled_deriv(-X) / X + 3.0 * airy_scaled(-X) / (X * X);
    boost::math::quadrature::exp_sinh<double> q;
    double pos = q.integrate([](double x) { return airy_scaled(x); });
    CHECK(std::fabs(neg - 2.0 / 3.0) < 1e-6);
    CHECK(std::fabs(neg + pos - 1.0) < 1e-6);
}

TEST_CASE("gamma against an extended-precision oracle")
{
    using big = boost::multiprecision::cpp_bin_float_50;
    CHECK(gamma_fn(1.0) == 1.0);
    CHECK(std::fabs(gamma_fn(0.5) - std::sqrt(M_PI)) < 1e-14);
    CHECK(std::fabs(gamma_fn(2.0 / 3.0) - 1.3541179394264) < 1e-12);
    double worst = 0;
    for (int i = 0; i <= 4000; ++i) {
        double z = -10.0 + 40.0 * i / 4000.0 + 1e-3;
        if (std::fabs(z - std::round(z)) < 1e-9 && z <= 0) continue;
        double ref = static_cast<double>(boost::math::tgamma(big(z)));
        worst = std::max(worst, std::fabs(gamma_fn(z) / ref - 1.0));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("domain errors")
{
    CHECK_THROWS_AS(gamma_fn(0.0), DomainError);
    CHECK_THROWS_AS(gamma_fn(-3.0), DomainError);
    CHECK_THROWS_WITH_AS(gamma_fn(-3.0), doctest::Contains("-3"), DomainError);
    CHECK_THROWS_AS(airy_scaled(std::numeric_limits<double>::quiet_NaN()), DomainError);
    CHECK_THROWS_AS(airy_scaled_deriv(INFINITY), DomainError);
}
