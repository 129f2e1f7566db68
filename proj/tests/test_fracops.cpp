#include <doctest.h>

#include "ygraph/errors.hpp"
#include "ygraph/fracops.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>

using namespace ygraph;

namespace {

TimeTrace sample(double dt, double T, auto fn)
{
    TimeTrace f{dt, {}, true};
    std::size_t n = std::size_t(std::llround(T / dt)) + 1;
    for (std::size_t i = 0; i < n; ++i) f.samples.push_back(fn(dt * double(i)));
    return f;
}

double test_fn(double t) { return t <= 0 ? 0.0 : t * t * std::exp(-t); }

double sup(const std::vector<double>& v)
{
    double m = 0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

} // namespace

TEST_CASE("order zero is the identity")
{
    auto f = sample(1e-2, 1.0, [](double t) { return std::sin(3 * t) + 0.5; });
    auto g = riemann_liouville(f, 0.0);
    CHECK(g.samples == f.samples);
}

TEST_CASE("order one is the running integral")
{
    auto f = sample(1e-3, 1.0, [](double) { return 1.0; });
    auto g = riemann_liouville(f, 1.0);
    double err = 0;
    for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::fabs(g.samples[i] - g.t(i)));
    CHECK(err < 1e-10);
}

TEST_CASE("power law for alpha = 1/2 on f = t")
{
    auto f = sample(1e-3, 1.0, [](double t) { return t; });
    auto g = riemann_liouville(f, 0.5);
    const double c = 4.0 / (3.0 * std::sqrt(M_PI));
    CHECK(std::fabs(c - 0.7522528) < 1e-7);
    double err = 0;
    for (std::size_t i = 100; i < g.size(); ++i) {
        double t = g.t(i), ex = c * std::pow(t, 1.5);
        err = std::max(err, std::fabs(g.samples[i] / ex - 1.0));
    }
    CHECK(err < 1e-6);
}

TEST_CASE("power law cross-checked by a quadrature oracle")
{
    // I_a t^2 e^{-t} at t = 0.8 for a = 0.37 by direct tanh-sinh quadrature.
    const double a = 0.37, t = 0.8;
    boost::math::quadrature::tanh_sinh<double> q;
    double ref = q.integrate([&](double u) { return std::pow(u, a - 1) * test_fn(t - u); }, 0.0, t) /
                 boost::math::tgamma(a);
    auto f = sample(1e-3, 1.0, test_fn);
    auto g = riemann_liouville(f, a);
    double e1 = std::fabs(g.samples[800] - ref);
    CHECK(e1 < 1e-6);
    auto f2 = sample(5e-4, 1.0, test_fn);
    auto g2 = riemann_liouville(f2, a);
    double e2 = std::fabs(g2.samples[1600] - ref);
    CHECK(e1 / e2 > 3.5);
}

TEST_CASE("order -1 differentiates")
{
    auto f = sample(1e-3, 1.0, [](double t) { return t * t; });
    auto g = riemann_liouville(f, -1.0);
    double err = 0;
    for (std::size_t i = 100; i < g.size(); ++i) err = std::max(err, std::fabs(g.samples[i] - 2 * g.t(i)));
    CHECK(err < 1e-6);
}

TEST_CASE("semigroup law")
{
    auto f = sample(1e-3, 1.0, test_fn);
    const double pairs[3][2] = {{1.0 / 3, 2.0 / 3}, {1.0 / 3, -1.0 / 3}, {2.0 / 3, -2.0 / 3}};
    for (auto& p : pairs) {
        auto lhs = riemann_liouville(riemann_liouville(f, p[1]), p[0]);
        auto rhs = riemann_liouville(f, p[0] + p[1]);
        std::vector<double> d(lhs.size());
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = lhs.samples[i] - rhs.samples[i];
        CAPTURE(p[0]);
        CAPTURE(p[1]);
        CHECK(sup(d) <= 1e-5 * sup(f.samples));
    }
}

TEST_CASE("negative order against the closed form")
{
    // I_{-1/3} t^2 = Gamma(3)/Gamma(8/3) t^{5/3}
    auto f = sample(1e-3, 1.0, [](double t) { return t * t; });
    auto g = riemann_liouville(f, -1.0 / 3.0);
    const double c = 2.0 / std::tgamma(8.0 / 3.0);
    double err = 0;
    for (std::size_t i = std::size_t(boundary_layer(-1.0 / 3.0)); i < g.size(); ++i)
        err = std::max(err, std::fabs(g.samples[i] - c * std::pow(g.t(i), 5.0 / 3.0)));
    CHECK(err < 1e-5);
}

TEST_CASE("support preservation")
{
    auto f = sample(1e-3, 1.0, [](double t) { return t < 0.3 ? 0.0 : (t - 0.3) * (t - 0.3); });
    for (double a : {0.5, 1.0 / 3, -1.0 / 3, -2.0 / 3, -1.0, 2.5}) {
        auto g = riemann_liouville(f, a);
        for (std::size_t i = 0; i < 299; ++i) CHECK(std::fabs(g.samples[i]) <= 1e-12);
    }
}

TEST_CASE("linearity")
{
    auto f = sample(1e-3, 1.0, test_fn);
    auto h = sample(1e-3, 1.0, [](double t) { return std::sin(2 * t) * t; });
    for (double a : {0.4, -0.6}) {
        TimeTrace c = f;
        for (std::size_t i = 0; i < c.size(); ++i) c.samples[i] = 2.0 * f.samples[i] - 3.0 * h.samples[i];
        auto lc = riemann_liouville(c, a), lf = riemann_liouville(f, a), lh = riemann_liouville(h, a);
        double scale = sup(lc.samples), err = 0;
        for (std::size_t i = 0; i < c.size(); ++i)
            err = std::max(err, std::fabs(lc.samples[i] - (2.0 * lf.samples[i] - 3.0 * lh.samples[i])));
        CHECK(err <= 1e-12 * scale);
    }
}

TEST_CASE("complex traces match the real and imaginary parts")
{
    auto f = sample(1e-3, 1.0, test_fn);
    CTimeTrace z{f.dt, {}, true};
    for (double v : f.samples) z.samples.emplace_back(v, -2.0 * v);
    auto gz = riemann_liouville(z, 0.25);
    auto gr = riemann_liouville(f, 0.25);
    for (std::size_t i = 0; i < f.size(); ++i) {
        CHECK(gz.samples[i].real() == doctest::Approx(gr.samples[i]).epsilon(1e-14));
        CHECK(gz.samples[i].imag() == doctest::Approx(-2.0 * gr.samples[i]).epsilon(1e-14));
    }
}

TEST_CASE("serial and parallel kernels agree")
{
    auto f = sample(1e-3, 2.0, test_fn);
    std::vector<double> a(f.size()), b(f.size());
    kernels::rl_positive_serial<double>(f.samples, f.dt, 0.3, a);
    kernels::rl_positive<double>(f.samples, f.dt, 0.3, b);
    CHECK(a == b);
}

TEST_CASE("contract and domain errors")
{
    auto f = sample(1e-2, 1.0, test_fn);
    CHECK_THROWS_AS(riemann_liouville(f, 3.5), DomainError);
    f.causal = false;
    CHECK_THROWS_AS(riemann_liouville(f, 0.5), ContractError);
}
