#include <doctest.h>

#include "ygraph/errors.hpp"
#include "ygraph/linops.hpp"
#include "ygraph/specfun.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>

using namespace ygraph;

namespace {

GridFunction make_grid(double a, double b, double h, auto fn)
{
    GridFunction g{a, h, {}};
    std::size_t n = std::size_t(std::llround((b - a) / h)) + 1;
    for (std::size_t i = 0; i < n; ++i) g.samples.push_back(fn(a + h * double(i)));
    return g;
}

double l2(const GridFunction& f)
{
    double s = 0;
    for (double v : f.samples) s += v * v;
    return std::sqrt(s * f.spacing);
}

double maxdiff(const std::vector<double>& a, const std::vector<double>& b)
{
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

double gauss(double x) { return std::exp(-x * x); }

} // namespace

TEST_CASE("group at t = 0 is the identity")
{
    auto g = make_grid(-20, 20, 0.05, gauss);
    auto r = airy_group(g, 0.0);
    CHECK(maxdiff(g.samples, r.samples) <= 1e-12);
}

TEST_CASE("group is unitary and has the semigroup property")
{
    // window wide enough to hold the dispersive tail at t = 0.7
    auto g = make_grid(-300, 60, 0.05, [](double x) { return gauss(x - 1) * std::cos(2 * x); });
    auto a = airy_group(g, 0.7);
    CHECK(std::fabs(l2(a) / l2(g) - 1.0) <= 1e-10);
    auto b = airy_group(airy_group(g, 0.3), 0.4);
    CHECK(maxdiff(a.samples, b.samples) <= 1e-10);
}

TEST_CASE("group commutes with spatial differentiation")
{
    auto g = make_grid(-200, 40, 0.05, [](double x) { return std::exp(-x * x / 2); });
    auto lhs = spectral_derivative(airy_group(g, 0.5), 1);
    auto rhs = airy_group(spectral_derivative(g, 1), 0.5);
    CHECK(maxdiff(lhs.samples, rhs.samples) <= 1e-8);
}

TEST_CASE("fundamental solution: group applied to a narrow unit-mass Gaussian")
{
    // A width-1e-2 Gaussian sampled at h = 0.05 is a discrete delta whose
    // spectrum is flat up to the Nyquist frequency pi/h. Frequencies there
    // travel at 3 (pi/h)^2 ~ 1.2e4 per unit time, so the periodization must
    // be longer than that to keep wrap-around out of the window.
    const double h = 0.05;
    const std::size_t N = 1u << 18;
    const double L = h * double(N / 2);
    GridFunction d{-L, h, std::vector<double>(N)};
    double mass = 0;
    for (std::size_t i = 0; i < N; ++i) {
        double x = d.x(i);
        d.samples[i] = std::exp(-x * x / (2e-4));
        mass += d.samples[i] * h;
    }
    for (auto& v : d.samples) v /= mass;
    GroupOptions opt;
    opt.pad_factor = 1.0;
    auto r = airy_group(d, 1.0, opt);
    double err = 0;
    for (std::size_t i = 0; i < N; ++i) {
        double x = r.x(i);
        if (std::fabs(x) <= 10) err = std::max(err, std::fabs(r.samples[i] - airy_scaled(x)));
    }
    CHECK(err <= 1e-3);
}

TEST_CASE("decay contract")
{
    auto g = make_grid(-5, 5, 0.05, [](double x) { return std::exp(-x * x / 8); });
    CHECK_THROWS_AS(airy_group(g, 0.1), ContractError);
    CHECK_THROWS_WITH_AS(airy_group(g, 0.1), doctest::Contains("left"), ContractError);
}

TEST_CASE("Duhamel operator: zero data and t = 0")
{
    SpaceTimeField w{-10, 0.05, 0.01, std::vector<std::vector<double>>(11, std::vector<double>(401, 0.0))};
    auto k = duhamel_inhomog(w, 0.1);
    CHECK(maxdiff(k.samples, std::vector<double>(401, 0.0)) == 0.0);
    for (auto& l : w.levels)
        for (std::size_t i = 0; i < l.size(); ++i) l[i] = gauss(w.x(i));
    auto k0 = duhamel_inhomog(w, 0.0);
    CHECK(maxdiff(k0.samples, std::vector<double>(401, 0.0)) == 0.0);
    CHECK_THROWS_AS(duhamel_inhomog(w, 0.5), DomainError);
}

TEST_CASE("Duhamel operator solves the forced linear equation")
{
    const double h = 0.02, dt = 2e-3;
    const std::size_t nt = 251;
    SpaceTimeField w{-15, h, dt, {}};
    const std::size_t nx = std::size_t(std::llround(30 / h)) + 1;
    for (std::size_t n = 0; n < nt; ++n) {
        std::vector<double> l(nx);
        double t = dt * double(n);
        for (std::size_t i = 0; i < nx; ++i) l[i] = std::exp(-w.x(i) * w.x(i) / 2) * (1 + std::sin(3 * t));
        w.levels.push_back(l);
    }
    auto K = duhamel_inhomog_all(w);
    double res = 0, scale = 0;
    for (std::size_t n = 1; n + 1 < nt; n += 25) {
        for (std::size_t i = 2; i + 2 < nx; ++i) {
            double dtK = (K.levels[n + 1][i] - K.levels[n - 1][i]) / (2 * dt);
            const auto& u = K.levels[n];
            double d3 = (u[i + 2] - 2 * u[i + 1] + 2 * u[i - 1] - u[i - 2]) / (2 * h * h * h);
            res = std::max(res, std::fabs(dtK + d3 - w.levels[n][i]));
            scale = std::max(scale, std::fabs(w.levels[n][i]));
        }
    }
    CHECK(res <= 5e-3 * scale);

    auto single = duhamel_inhomog(w, dt * 137);
    CHECK(maxdiff(single.samples, K.levels[137]) <= 1e-12);
    auto single2 = duhamel_inhomog(w, dt * 200);
    CHECK(maxdiff(single2.samples, K.levels[200]) <= 1e-12);
}

TEST_CASE("Duhamel operator is linear")
{
    const std::size_t nx = 601, nt = 21;
    SpaceTimeField a{-15, 0.05, 0.01, {}}, b = a, c = a;
    for (std::size_t n = 0; n < nt; ++n) {
        std::vector<double> la(nx), lb(nx), lc(nx);
        for (std::size_t i = 0; i < nx; ++i) {
            double x = a.x(i), t = 0.01 * double(n);
            la[i] = gauss(x) * (1 + t);
            lb[i] = gauss(x - 2) * std::cos(t);
            lc[i] = 2 * la[i] - 0.5 * lb[i];
        }
        a.levels.push_back(la);
        b.levels.push_back(lb);
        c.levels.push_back(lc);
    }
    auto ka = duhamel_inhomog(a, 0.2), kb = duhamel_inhomog(b, 0.2), kc = duhamel_inhomog(c, 0.2);
    double err = 0, scale = 0;
    for (std::size_t i = 0; i < nx; ++i) {
        err = std::max(err, std::fabs(kc.samples[i] - (2 * ka.samples[i] - 0.5 * kb.samples[i])));
        scale = std::max(scale, std::fabs(kc.samples[i]));
    }
    CHECK(err <= 1e-12 * scale);
}

TEST_CASE("serial and parallel Duhamel accumulation agree")
{
    std::vector<std::vector<cplx>> W(5, std::vector<cplx>(64));
    for (std::size_t j = 0; j < 5; ++j)
        for (std::size_t k = 0; k < 64; ++k) W[j][k] = cplx(std::sin(double(j + k)), std::cos(double(j * k)));
    auto xi = fft_frequencies(64, 0.1);
    std::vector<double> c{1.0 / 3, 4.0 / 3, 2.0 / 3, 4.0 / 3, 1.0 / 3};
    std::vector<cplx> s1, s2;
    kernels::duhamel_accumulate_serial(W, c, xi, 0.01, 0.04, s1);
    kernels::duhamel_accumulate(W, c, xi, 0.01, 0.04, s2);
    CHECK(s1 == s2);
}

TEST_CASE("traces at zero")
{
    auto q = make_grid(-1, 1, 1e-3, [](double x) { return x * x; });
    CHECK(std::fabs(trace_at_zero(q, 2, Side::Centered) - 2.0) <= 1e-6);
    CHECK(std::fabs(trace_at_zero(q, 2, Side::Left) - 2.0) <= 1e-6);
    CHECK(std::fabs(trace_at_zero(q, 2, Side::Right) - 2.0) <= 1e-6);

    auto a = make_grid(-5, 5, 1e-2, [](double x) { return airy_scaled(x); });
    CHECK(std::fabs(trace_at_zero(a, 1, Side::Centered) + 0.12442739130246508) <= 1e-6);
    CHECK(std::fabs(trace_at_zero(a, 1, Side::Right) + 0.12442739130246508) <= 1e-6);

    auto step = make_grid(-1, 1, 0.01, [](double x) { return x > 0 ? 1.0 : 0.0; });
    CHECK(std::fabs(trace_at_zero(step, 0, Side::Left)) <= 1e-12);
    CHECK(std::fabs(trace_at_zero(step, 0, Side::Right) - 1.0) <= 1e-12);
    CHECK(std::fabs(jump_size(step) - 1.0) <= 1e-12);

    auto off = make_grid(-1.005, 0.995, 0.01, [](double x) { return x > 0 ? 1.0 : 0.0; });
    CHECK(std::fabs(jump_size(off) - 1.0) <= 1e-12);

    auto pos = make_grid(0.5, 2, 0.01, gauss);
    CHECK_THROWS_AS(trace_at_zero(pos, 0, Side::Centered), DomainError);
    auto tight = make_grid(-0.02, 1, 0.01, gauss);
    CHECK_THROWS_AS(jump_size(tight), DomainError);
}

TEST_CASE("traces of a space-time field")
{
    SpaceTimeField f{-1, 0.01, 0.1, {}};
    for (int n = 0; n < 4; ++n) {
        std::vector<double> l(201);
        for (std::size_t i = 0; i < l.size(); ++i) l[i] = (1 + n) * f.x(i);
        f.levels.push_back(l);
    }
    auto tr = trace_at_zero(f, 1, Side::Right);
    for (int n = 0; n < 4; ++n) CHECK(tr.samples[std::size_t(n)] == doctest::Approx(1 + n));
}

TEST_CASE("discrete Sobolev norm")
{
    const double c = std::pow(2.0 / M_PI, 0.25);
    auto g = make_grid(-20, 20, 0.02, [&](double x) { return c * std::exp(-x * x); });
    CHECK(std::fabs(sobolev_norm(g, 0.0) - 1.0) <= 1e-8);
    CHECK(sobolev_norm(g, 1.0) >= sobolev_norm(g, 0.0));

    auto e = make_grid(-30, 30, 0.02, [](double x) { return std::exp(-x * x / 2); });
    boost::math::quadrature::exp_sinh<double> q;
    double ref = 2.0 * q.integrate([](double xi) { return (1 + xi) * (1 + xi) * std::exp(-xi * xi); });
    CHECK(std::fabs(sobolev_norm(e, 1.0) - std::sqrt(ref)) <= 1e-6);
    CHECK_THROWS_AS(sobolev_norm(e, 3.0), DomainError);
}
