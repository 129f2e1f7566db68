#include "doctest.h"

#include "ygraph/errors.hpp"
#include "ygraph/vertex.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace ygraph;

namespace {

constexpr double kPi = std::numbers::pi;

// Laplace expansion along the first row; independent of Eigen's LU.
cplx cofactor_det(const Matrix4c& m)
{
    auto det3 = [&](int skip) {
        int c[3], k = 0;
        for (int j = 0; j < 4; ++j)
            if (j != skip) c[k++] = j;
        auto e = [&](int r, int j) { return m(r, c[j]); };
        return e(1, 0) * (e(2, 1) * e(3, 2) - e(2, 2) * e(3, 1)) - e(1, 1) * (e(2, 0) * e(3, 2) - e(2, 2) * e(3, 0)) +
               e(1, 2) * (e(2, 0) * e(3, 1) - e(2, 1) * e(3, 0));
    };
    cplx d = 0;
    for (int j = 0; j < 4; ++j) d += (j % 2 ? -1.0 : 1.0) * m(0, j) * det3(j);
    return d;
}

// I_alpha (t^k e^{-t}) by its power series.
double series_rl(int k, double alpha, double t)
{
    double s = 0, sign = 1, fact = 1;
    for (int n = 0; n < 80; ++n) {
        if (n > 0) {
            fact *= n;
            sign = -sign;
        }
        const double p = n + k;
        s += sign / fact * std::exp(std::lgamma(p + 1) - std::lgamma(p + 1 + alpha)) * std::pow(t, p + alpha);
    }
    return s;
}

GridFunction gaussian(double L, double h, double amp, double x0, double width)
{
    GridFunction g{-L, h, {}};
    const std::size_t n = std::size_t(std::lround(2 * L / h)) + 1;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = g.x(i) - x0;
        g.samples.push_back(amp * std::exp(-x * x / (width * width)));
    }
    return g;
}

std::array<GridFunction, 3> generic_data()
{
    return {gaussian(30, 0.05, 1.0, -4.0, 1.0), gaussian(30, 0.05, 0.8, 3.0, 1.0),
            gaussian(30, 0.05, -0.5, 3.5, 0.7)};
}

CTimeTrace ctrace(double dt, std::size_t n, auto f)
{
    CTimeTrace g{dt, std::vector<cplx>(n), true};
    for (std::size_t i = 0; i < n; ++i) g.samples[i] = f(dt * double(i));
    return g;
}

} // namespace

TEST_CASE("matrix entries")
{
    VertexCoupling c{CouplingKind::Type1, 1, 1, 0, 0, 1, 1};
    auto m = build_matrix(c, {0, 0, 0, 0, 0}).entries;
    CHECK(std::abs(m(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(m(0, 1) + 1.0) < 1e-15);
    CHECK(std::abs(m(0, 2)) == 0.0);
    CHECK(std::abs(m(0, 3) - 1.0) < 1e-15);
    CHECK(std::abs(m(3, 0) + 2.0) < 1e-15);

    auto same = build_matrix(c, {0.2, 0.2, 0.1, 0.3, 0}).entries;
    CHECK((same.col(0) - same.col(3)).norm() == 0.0);

    VertexCoupling c2{CouplingKind::Type2, 1, 1, 0, 0, 2, 3};
    auto m2 = build_matrix(c2, {0.1, 0.2, 0.3, 0, 0}).entries;
    CHECK(std::abs(m2(3, 2) + 3.0) < 1e-14);
    CHECK(std::abs(m2(3, 1)) == 0.0);
    CHECK(std::abs(m2(2, 2)) == 0.0);

    // Phases e^{i pi (l - j)} in the plus columns.
    auto m3 = build_matrix(VertexCoupling{CouplingKind::Type1, 2, 1, 1.5, 0, 1, 1}, {0, 0, 0.25, 0, 0}).entries;
    CHECK(std::abs(m3(0, 1) + 2.0 * std::polar(1.0, kPi / 4)) < 1e-14);
    CHECK(std::abs(m3(2, 1) + 1.5 * std::polar(1.0, kPi * (0.25 - 1))) < 1e-14);
}

TEST_CASE("determinant")
{
    VertexCoupling c{CouplingKind::Type1, 1, 1, 0, 0, 1, 1};
    CHECK(std::abs(det_m(build_matrix(c, {0.3, 0.3, 0.1, 0.2, 0}))) <= 1e-12);

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> lam(0, 0.5), coef(-2, 2);
    for (int k = 0; k < 20; ++k) {
        VertexCoupling r{k % 2 ? CouplingKind::Type1 : CouplingKind::Type2, coef(rng), coef(rng), coef(rng),
                         coef(rng), coef(rng), coef(rng)};
        const auto m = build_matrix(r, {lam(rng), lam(rng), lam(rng), lam(rng), 0});
        const cplx ref = cofactor_det(m.entries);
        CHECK(std::abs(det_m(m) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));

        // Swapping l1 and l2 swaps two columns.
        auto l = m.lambda;
        std::swap(l.l1, l.l2);
        CHECK(std::abs(det_m(build_matrix(r, l)) + det_m(m)) <= 1e-12 * std::max(1.0, std::abs(ref)));
    }
}

TEST_CASE("closed form at the anchors")
{
    const double eps = 0.1;
    const double expected = 6.0 * std::sqrt(3.0) * std::sin(eps);
    for (auto kind : {CouplingKind::Type1, CouplingKind::Type2}) {
        const auto c = VertexCoupling::special(kind, 1, 1, 0, 0);
        const cplx d = det_m(build_matrix(c, anchor_lambda(eps, AnchorBranch::Low)));
        CHECK(std::abs(d - expected) <= 1e-12);
        CHECK(std::abs(closed_form_det(1, 1, 0, 0, eps, AnchorBranch::Low) - expected) <= 1e-14);
    }
    CHECK(std::abs(closed_form_det(1, 1, 0, 0, eps, AnchorBranch::Low) - 1.0374992995529935) < 1e-12);

    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> al(0.5, 3), be(-2, 2), ep(0.01, 0.45);
    for (int k = 0; k < 50; ++k) {
        const double a2 = al(rng), a3 = al(rng), b2 = be(rng), b3 = be(rng), e = ep(rng);
        for (auto kind : {CouplingKind::Type1, CouplingKind::Type2})
            for (auto br : {AnchorBranch::Low, AnchorBranch::High}) {
                const auto m = build_matrix(VertexCoupling::special(kind, a2, a3, b2, b3), anchor_lambda(e, br));
                const cplx cf = closed_form_det(a2, a3, b2, b3, e, br);
                CHECK(std::abs(det_m(m) - cf) <= 1e-10 * std::abs(cf));
                CHECK(std::abs(cofactor_det(m.entries) - cf) <= 1e-10 * std::abs(cf));
            }
    }

    // 2 sqrt(3) * 2 * sin(0.2) * 2.75.
    const cplx v = closed_form_det(2, 1, 1, 0, 0.2, AnchorBranch::Low);
    CHECK(std::abs(v - 11.0 * std::sqrt(3.0) * std::sin(0.2)) < 1e-13);
    CHECK(std::abs(v.real() - 3.7852) < 1e-4);
    const auto m = build_matrix(VertexCoupling::special(CouplingKind::Type1, 2, 1, 1, 0), anchor_lambda(0.2, AnchorBranch::Low));
    CHECK(std::abs(det_m(m) - v) <= 1e-12);

    CHECK(closed_form_det(1, 1, 0, 0, 0.0, AnchorBranch::High) == cplx(0));

    // Factor 1 + 1 + 1 - 3/2 - 3/2 = 0.
    for (auto kind : {CouplingKind::Type1, CouplingKind::Type2})
        for (auto br : {AnchorBranch::Low, AnchorBranch::High}) {
            const auto md = build_matrix(VertexCoupling::special(kind, 1, 1, -1.5, -1.5), anchor_lambda(eps, br));
            CHECK(std::abs(det_m(md)) <= 1e-10);
            CHECK_FALSE(is_invertible(md));
        }

    CHECK_THROWS_AS(closed_form_det(0, 1, 0, 0, eps, AnchorBranch::Low), DomainError);
    CHECK_THROWS_AS(VertexCoupling::special(CouplingKind::Type1, 1, 0, 0, 0), DomainError);
}

TEST_CASE("admissible scan")
{
    const auto c = VertexCoupling::special(CouplingKind::Type1, 1, 1, 0, 0);
    auto rep = admissible_scan(0.0, c, 40);
    CHECK(rep.lo == 0.0);
    CHECK(rep.hi == 0.5);
    CHECK_FALSE(rep.window_empty);
    REQUIRE(rep.samples.size() == 41);
    CHECK(rep.samples[0].anchor);
    CHECK(rep.samples[0].invertible);
    CHECK(std::abs(rep.samples[0].det - 6.0 * std::sqrt(3.0) * std::sin(0.1)) < 1e-12);
    // Samples near the anchor inherit invertibility.
    for (int k = 1; k <= 4; ++k) CHECK(rep.samples[std::size_t(k)].invertible);
    // The family crosses l = l2 where columns 1 and 4 coincide.
    std::size_t kmin = 1;
    for (std::size_t k = 1; k < rep.samples.size(); ++k)
        if (std::abs(rep.samples[k].det) < std::abs(rep.samples[kmin].det)) kmin = k;
    CHECK(std::fabs(rep.samples[kmin].lambda - 0.3 / kPi) <= 0.5 / 41);
    CHECK(std::abs(rep.samples[kmin].det) < 0.1 * std::abs(rep.samples[0].det));
    CHECK(rep.lipschitz > 0);
    CHECK(std::isfinite(rep.lipschitz));
    for (const auto& s : rep.samples) {
        const double d = 1e-4;
        const double l = s.lambda;
        const cplx dp = det_m(build_matrix(c, {l + d, s.lambda2, l + d, l + d, 0}));
        CHECK(std::abs(dp - s.det) <= 1.01 * rep.lipschitz * d + 1e-12);
    }

    auto hi = admissible_scan(1.2, c, 10);
    CHECK(std::abs(hi.lo - 0.2) < 1e-15);
    CHECK(hi.hi == 0.5);
    CHECK(hi.samples[0].lambda == 0.5);
    CHECK(std::abs(hi.samples[0].lambda2 - (0.5 - 0.3 / kPi)) < 1e-15);
    CHECK(hi.samples[0].invertible);

    auto deg = admissible_scan(0.0, VertexCoupling::special(CouplingKind::Type1, 1, 1, -1.5, -1.5), 10);
    CHECK_FALSE(deg.samples[0].invertible);

    std::ostringstream os;
    rep.write_csv(os);
    CHECK(os.str().rfind("lambda,lambda2,det_re,det_im,abs_det,threshold,invertible,anchor\n", 0) == 0);

    CHECK_THROWS_AS(admissible_scan(0.5, c, 10), DomainError);
    CHECK_THROWS_AS(admissible_scan(1.6, c, 10), DomainError);
    CHECK_THROWS_AS(admissible_scan(-0.6, c, 10), DomainError);
}

TEST_CASE("solve gamma")
{
    const auto c = VertexCoupling::special(CouplingKind::Type1, 1.3, 0.7, 0.4, -0.2);
    const auto m = build_matrix(c, {0.05, 0.4, 0.1, 0.2, 0});
    const std::size_t n = 50;
    const double dt = 0.01;

    std::array<CTimeTrace, 4> zero;
    for (auto& z : zero) z = ctrace(dt, n, [](double) { return cplx(0); });
    for (const auto& g : solve_gamma(m, zero))
        for (auto x : g.samples) CHECK(x == cplx(0));

    // Round trip through F = M gamma*.
    std::array<CTimeTrace, 4> star = {ctrace(dt, n, [](double t) { return cplx(std::sin(t), 0.3 * t); }),
                                      ctrace(dt, n, [](double t) { return cplx(t * t, -1); }),
                                      ctrace(dt, n, [](double t) { return cplx(std::exp(-t), t); }),
                                      ctrace(dt, n, [](double t) { return cplx(0.5, std::cos(3 * t)); })};
    std::array<CTimeTrace, 4> F;
    for (auto& f : F) f = ctrace(dt, n, [](double) { return cplx(0); });
    const int col[4] = {0, 2, 3, 1}; // natural index of each column
    for (std::size_t i = 0; i < n; ++i)
        for (int r = 0; r < 4; ++r)
            for (int k = 0; k < 4; ++k) F[r].samples[i] += m.entries(r, k) * star[col[k]].samples[i];
    const auto g = solve_gamma(m, F);
    for (int k = 0; k < 4; ++k)
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(g[k].samples[i] - star[k].samples[i]) <= 1e-10);

    // Diagonal matrix with a hand inverse.
    BoundaryMatrix dm = m;
    dm.entries.setZero();
    const cplx diag[4] = {2.0, cplx(0, 4), -1.0, 0.5};
    for (int k = 0; k < 4; ++k) dm.entries(k, k) = diag[k];
    std::array<CTimeTrace, 4> ones;
    for (auto& o : ones) o = ctrace(dt, 3, [](double) { return cplx(1); });
    const auto gd = solve_gamma(dm, ones);
    CHECK(std::abs(gd[0].samples[1] - 0.5) < 1e-12);
    CHECK(std::abs(gd[2].samples[1] - cplx(0, -0.25)) < 1e-12);
    CHECK(std::abs(gd[3].samples[1] + 1.0) < 1e-12);
    CHECK(std::abs(gd[1].samples[1] - 2.0) < 1e-12);

    const auto singular = build_matrix(VertexCoupling::special(CouplingKind::Type1, 1, 1, -1.5, -1.5),
                                       anchor_lambda(0.1, AnchorBranch::Low));
    CHECK_THROWS_AS(solve_gamma(singular, zero), NumericalError);
    auto bad = zero;
    bad[2].samples.pop_back();
    CHECK_THROWS_AS(solve_gamma(m, bad), ContractError);
}

TEST_CASE("right-hand side rows")
{
    const double dt = 0.002;
    const std::size_t n = 501;
    auto tr = [&](auto f) {
        TimeTrace g{dt, std::vector<double>(n), true};
        for (std::size_t i = 0; i < n; ++i) g.samples[i] = f(dt * double(i));
        return g;
    };
    const auto zero = tr([](double) { return 0.0; });
    std::array<std::array<TimeTrace, 3>, 3> t{{{zero, zero, zero}, {zero, zero, zero}, {zero, zero, zero}}};
    t[0][0] = tr([](double s) { return std::cos(s); });
    t[1][0] = tr([](double s) { return s; });
    t[1][1] = tr([](double s) { return s * s * std::exp(-s); });
    t[2][2] = tr([](double s) { return s * s * s * std::exp(-s); });

    VertexCoupling c{CouplingKind::Type1, 2.0, 3.0, 0.5, 0.7, 1.5, 0.25};
    const auto F = build_rhs(c, t);
    for (std::size_t i = 0; i < n; i += 50) {
        const double s = dt * double(i);
        CHECK(std::abs(F[0].samples[i] + (std::cos(s) - 2.0 * s)) < 1e-14);
        CHECK(std::abs(F[1].samples[i] + std::cos(s)) < 1e-14);
        CHECK(std::abs(F[2].samples[i] - 0.5 * series_rl(2, 1.0 / 3, s)) < 1e-5);
        CHECK(std::abs(F[3].samples[i] - 0.25 * series_rl(3, 2.0 / 3, s)) < 1e-5);
    }

    VertexCoupling c2{CouplingKind::Type2, 2.0, 3.0, 0.5, 0.7, 1.5, 0.25};
    const auto F2 = build_rhs(c2, t);
    for (std::size_t i = 0; i < n; i += 50) {
        const double s = dt * double(i);
        CHECK(std::abs(F2[0].samples[i] + (std::cos(s) - 2.0 * s)) < 1e-14);
        CHECK(std::abs(F2[1].samples[i] - 0.5 * series_rl(2, 1.0 / 3, s)) < 1e-5);
        CHECK(std::abs(F2[2].samples[i]) < 1e-14);
        CHECK(std::abs(F2[3].samples[i] - 0.25 * series_rl(3, 2.0 / 3, s)) < 1e-5);
    }
}

TEST_CASE("linear construction: zero and remote data")
{
    const auto c = VertexCoupling::special(CouplingKind::Type1, 1, 1, 0, 0);
    const LambdaVector l{0.05, 0.4, 0.05, 0.05, 0};
    AssemblyOptions opt;
    opt.dt = 0.005;
    opt.stride = 10;

    const auto z = gaussian(30, 0.05, 0.0, 0.0, 1.0);
    const auto sz = assemble_linear_solution({z, z, z}, c, l, 0.5, opt);
    for (const auto& s : sz.traj.states)
        for (const auto* f : {&s.u, &s.v, &s.w})
            for (double x : f->samples) CHECK(x == 0.0);
    const auto rz = verify_vertex_conditions(sz.traj, c);
    CHECK(rz.max_relative == 0.0);

    const auto u0 = gaussian(30, 0.05, 1.0, -15.0, 1.0);
    const auto sr = assemble_linear_solution({u0, z, z}, c, l, 0.5, opt);
    double gmax = 0;
    for (const auto& g : sr.gamma)
        for (auto x : g.samples) gmax = std::max(gmax, std::abs(x));
    CHECK(gmax <= 1e-4);
    const auto fr = free_evolution(u0, 0.05, 11);
    double err = 0;
    for (std::size_t n = 0; n < sr.traj.states.size(); ++n) {
        const auto& s = sr.traj.states[n];
        for (std::size_t i = 0; i < s.u.size(); ++i) err = std::max(err, std::fabs(s.u.samples[i] - fr.levels[n][i]));
        for (std::size_t i = 0; i < s.v.size(); ++i)
            err = std::max(err, std::fabs(s.v.samples[i] - fr.levels[n][i + s.u.size() - 1]));
    }
    CHECK(err <= 1e-3);
}

TEST_CASE("linear construction satisfies the vertex conditions")
{
    const auto data = generic_data();
    const LambdaVector l{0.05, 0.4, 0.05, 0.05, 0};
    for (auto kind : {CouplingKind::Type1, CouplingKind::Type2}) {
        CAPTURE(to_string(kind));
        const auto c = VertexCoupling::special(kind, 1.2, 0.8, 0.3, -0.4);
        REQUIRE(is_invertible(build_matrix(c, l)));
        const auto sol = assemble_linear_solution(data, c, l, 0.5);
        CHECK(sol.imag_residual <= 1e-10);
        REQUIRE(sol.traj.states.size() == 11);
        CHECK(std::abs(sol.traj.states.back().t - 0.5) < 1e-12);
        const auto rep = verify_vertex_conditions(sol.traj, c, 0.1, 0.5);
        CHECK(rep.t.size() == 9);
        CHECK(rep.max_relative <= 2e-2);
        for (double s : rep.scale) CHECK(s > 1e-2);

        // The diagnostics carry the same traces.
        const auto& d = sol.traj.diagnostics.back();
        CHECK(d.mass_u > 0);
        CHECK(d.residual <= 2e-2 * std::max({rep.scale[0], rep.scale[2], rep.scale[3]}));
    }
}

TEST_CASE("vertex check detects uncoupled fields")
{
    const auto data = generic_data();
    Trajectory tr;
    const double dt = 0.05;
    std::array<SpaceTimeField, 3> f;
    for (int e = 0; e < 3; ++e) f[e] = free_evolution(data[e], dt, 11);
    for (std::size_t n = 0; n < 11; ++n) {
        GraphState s;
        s.t = dt * double(n);
        s.u = restrict_left(f[0].level(n));
        s.v = restrict_right(f[1].level(n));
        s.w = restrict_right(f[2].level(n));
        tr.states.push_back(s);
    }
    const auto c = VertexCoupling::special(CouplingKind::Type1, 1, 1, 0, 0);
    const auto rep = verify_vertex_conditions(tr, c, 0.1, 0.5);
    CHECK(rep.max_relative > 0.3);
}

TEST_CASE("assembly errors")
{
    const auto data = generic_data();
    const auto c = VertexCoupling::special(CouplingKind::Type1, 1, 1, 0, 0);
    // l1 = l2 makes M singular.
    CHECK_THROWS_AS(assemble_linear_solution(data, c, {0.2, 0.2, 0.1, 0.1, 0}, 0.2), NumericalError);

    // Above s = 1/2 the traces of the data must satisfy u0(0) = a2 v0(0) = a3 w0(0).
    auto bumped = data;
    for (std::size_t i = 0; i < bumped[1].size(); ++i) {
        const double x = bumped[1].x(i);
        bumped[1].samples[i] = data[1].samples[i] + 0.5 * std::exp(-x * x);
    }
    CHECK_THROWS_AS(assemble_linear_solution(bumped, c, {0.55, 0.45, 0.55, 0.55, 1.0}, 0.2), ContractError);

    auto shifted = data;
    for (auto& d : shifted) d.origin += 0.02;
    CHECK_THROWS_AS(assemble_linear_solution(shifted, c, {0.05, 0.4, 0.05, 0.05, 0}, 0.2), DomainError);
    CHECK_THROWS_AS(assemble_linear_solution(data, c, {0.05, 0.4, 0.05, 0.05, 0}, -1.0), DomainError);
}
