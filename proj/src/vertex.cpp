#include "ygraph/vertex.hpp"

#include "ygraph/errors.hpp"
#include "ygraph/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

namespace ygraph {

namespace {

constexpr double pi = std::numbers::pi;

cplx phase(double x) { return std::polar(1.0, pi * x); }

double two_sin(double l, double offset) { return 2.0 * std::sin(pi * l / 3.0 + offset); }

void require_finite(double x, const char* name)
{
    if (!std::isfinite(x)) throw DomainError(std::string("vertex coupling: ") + name + " is not finite");
}

} // namespace

VertexCoupling VertexCoupling::special(CouplingKind kind, double alpha2, double alpha3, double beta2, double beta3)
{
    if (alpha2 == 0 || alpha3 == 0) throw DomainError("special coupling: alpha2 and alpha3 must be nonzero");
    VertexCoupling c;
    c.kind = kind;
    c.b2 = beta2;
    c.b3 = beta3;
    if (kind == CouplingKind::Type1) {
        c.a2 = alpha2, c.a3 = alpha3;
        c.c2 = 1.0 / alpha2, c.c3 = 1.0 / alpha3;
    } else {
        c.a2 = 1.0 / alpha2, c.a3 = 1.0 / alpha3;
        c.c2 = alpha2, c.c3 = alpha3;
    }
    return c;
}

void VertexCoupling::validate() const
{
    require_finite(a2, "a2");
    require_finite(a3, "a3");
    require_finite(b2, "b2");
    require_finite(b3, "b3");
    require_finite(c2, "c2");
    require_finite(c3, "c3");
}

std::array<double, 2> LambdaVector::window(double s) { return {std::max(s - 1.0, 0.0), std::min(s + 0.5, 0.5)}; }

bool LambdaVector::admissible() const
{
    const auto [lo, hi] = window(s);
    for (double l : {l1, l2, l3, l4})
        if (!(l > lo && l < hi)) return false;
    return true;
}

BoundaryMatrix build_matrix(const VertexCoupling& c, const LambdaVector& l)
{
    c.validate();
    const double p6 = pi / 6, p2 = pi / 2;
    Matrix4c m;
    if (c.kind == CouplingKind::Type1) {
        m << two_sin(l.l1, p6), -c.a2 * phase(l.l3), 0.0, two_sin(l.l2, p6),
            two_sin(l.l1, p6), 0.0, -c.a3 * phase(l.l4), two_sin(l.l2, p6),
            two_sin(l.l1, -p6), -c.b2 * phase(l.l3 - 1), -c.b3 * phase(l.l4 - 1), two_sin(l.l2, -p6),
            two_sin(l.l1, -p2), -c.c2 * phase(l.l3 - 2), -c.c3 * phase(l.l4 - 2), two_sin(l.l2, -p2);
    } else {
        m << two_sin(l.l1, p6), -c.a2 * phase(l.l3), -c.a3 * phase(l.l4), two_sin(l.l2, p6),
            two_sin(l.l1, -p6), -c.b2 * phase(l.l3 - 1), -c.b3 * phase(l.l4 - 1), two_sin(l.l2, -p6),
            two_sin(l.l1, -p2), -c.c2 * phase(l.l3 - 2), 0.0, two_sin(l.l2, -p2),
            two_sin(l.l1, -p2), 0.0, -c.c3 * phase(l.l4 - 2), two_sin(l.l2, -p2);
    }
    return {m, l, c};
}

cplx det_m(const BoundaryMatrix& m) { return m.entries.partialPivLu().determinant(); }

double invertibility_threshold(const BoundaryMatrix& m)
{
    double p = 1e-8;
    for (int r = 0; r < 4; ++r) p *= m.entries.row(r).norm();
    return p;
}

bool is_invertible(const BoundaryMatrix& m) { return std::abs(det_m(m)) > invertibility_threshold(m); }

LambdaVector anchor_lambda(double eps, AnchorBranch b)
{
    const double d = 3.0 * eps / pi;
    if (b == AnchorBranch::Low) return {0.0, d, 0.0, 0.0, 0.0};
    return {0.5, 0.5 - d, 0.5, 0.5, 1.0};
}

cplx closed_form_det(double alpha2, double alpha3, double beta2, double beta3, double eps, AnchorBranch)
{
    if (alpha2 == 0 || alpha3 == 0) throw DomainError("closed_form_det: alpha2 and alpha3 must be nonzero");
    if (!(eps >= 0 && eps < 0.5)) throw DomainError("closed_form_det: eps must lie in [0, 1/2)");
    const double factor =
        1.0 + 1.0 / (alpha2 * alpha2) + 1.0 / (alpha3 * alpha3) + beta3 / alpha3 + beta2 / alpha2;
    return 2.0 * std::sqrt(3.0) * alpha2 * alpha3 * std::sin(eps) * factor;
}

void ScanReport::write_csv(std::ostream& os) const
{
    os << "lambda,lambda2,det_re,det_im,abs_det,threshold,invertible,anchor\n";
    os.precision(12);
    for (const auto& s : samples)
        os << s.lambda << ',' << s.lambda2 << ',' << s.det.real() << ',' << s.det.imag() << ','
           << std::abs(s.det) << ',' << s.threshold << ',' << int(s.invertible) << ',' << int(s.anchor) << '\n';
}

ScanReport admissible_scan(double s, const VertexCoupling& c, std::size_t resolution, double eps)
{
    if (!(s > -0.5 && s < 1.5) || s == 0.5) throw DomainError("admissible_scan: s must lie in (-1/2, 3/2), s != 1/2");
    if (resolution == 0) throw DomainError("admissible_scan: resolution must be positive");
    c.validate();
    ScanReport rep;
    rep.s = s;
    rep.eps = eps;
    const auto w = LambdaVector::window(s);
    rep.lo = w[0], rep.hi = w[1];
    rep.window_empty = !(rep.lo < rep.hi);
    const bool high = s >= 1.0;
    const double l2 = high ? 0.5 - 3.0 * eps / pi : 3.0 * eps / pi;
    const double anchor = high ? 0.5 : 0.0;

    const std::size_t n = rep.window_empty ? 1 : resolution + 1;
    rep.samples.resize(n);
    std::vector<double> lip(n, 0.0);
    const double delta = 1e-3;
#pragma omp parallel for num_threads(max_threads())
    for (std::size_t k = 0; k < n; ++k) {
        const double l = k == 0 ? anchor : rep.lo + (rep.hi - rep.lo) * double(k) / double(resolution + 1);
        const auto m = build_matrix(c, {l, l2, l, l, s});
        const auto mp = build_matrix(c, {l + delta, l2, l + delta, l + delta, s});
        ScanSample& out = rep.samples[k];
        out.lambda = l;
        out.lambda2 = l2;
        out.det = det_m(m);
        out.threshold = invertibility_threshold(m);
        out.invertible = std::abs(out.det) > out.threshold;
        out.anchor = k == 0;
        lip[k] = std::abs(det_m(mp) - out.det) / delta;
    }
    rep.lipschitz = *std::max_element(lip.begin(), lip.end());
    for (std::size_t k = 1; k < n; ++k) rep.invertible_count += rep.samples[k].invertible;
    return rep;
}

std::array<CTimeTrace, 4> solve_gamma(const BoundaryMatrix& m, const std::array<CTimeTrace, 4>& f)
{
    const cplx d = det_m(m);
    if (!(std::abs(d) > invertibility_threshold(m))) {
        std::ostringstream os;
        os << "solve_gamma: boundary matrix is singular, |det| = " << std::abs(d);
        throw NumericalError(os.str());
    }
    const std::size_t n = f[0].size();
    for (const auto& r : f)
        if (r.size() != n || r.dt != f[0].dt) throw ContractError("solve_gamma: F rows on different time grids");

    const auto lu = m.entries.partialPivLu();
    std::array<CTimeTrace, 4> g;
    for (auto& x : g) x = {f[0].dt, std::vector<cplx>(n), true};
    constexpr int slot[4] = {0, 2, 3, 1}; // column order (g1, g3, g4, g2)
    for (std::size_t i = 0; i < n; ++i) {
        Vector4c F;
        for (int r = 0; r < 4; ++r) F(r) = f[r].samples[i];
        const Vector4c x = lu.solve(F);
        const double res = (m.entries * x - F).norm();
        if (!(res <= 1e-10 * F.norm() + 1e-300)) {
            std::ostringstream os;
            os << "solve_gamma: residual " << res << " at sample " << i << " exceeds 1e-10 |F|";
            throw NumericalError(os.str());
        }
        for (int r = 0; r < 4; ++r) g[slot[r]].samples[i] = x(r);
    }
    return g;
}

std::array<CTimeTrace, 4> build_rhs(const VertexCoupling& c, const std::array<std::array<TimeTrace, 3>, 3>& tr)
{
    const std::size_t n = tr[0][0].size();
    const double dt = tr[0][0].dt;
    for (const auto& e : tr)
        for (const auto& x : e)
            if (x.size() != n || x.dt != dt) throw ContractError("build_rhs: traces on different time grids");

    auto combo = [&](int j, double k2, double k3) {
        TimeTrace out{dt, std::vector<double>(n), true};
        for (std::size_t i = 0; i < n; ++i)
            out.samples[i] = tr[0][j].samples[i] - k2 * tr[1][j].samples[i] - k3 * tr[2][j].samples[i];
        return out;
    };
    auto row = [&](const TimeTrace& x, double smoothing) {
        const TimeTrace y = smoothing > 0 ? riemann_liouville(x, smoothing) : x;
        CTimeTrace out{dt, std::vector<cplx>(n), true};
        for (std::size_t i = 0; i < n; ++i) out.samples[i] = -y.samples[i];
        return out;
    };
    const double third = 1.0 / 3.0, two_thirds = 2.0 / 3.0;
    if (c.kind == CouplingKind::Type1)
        return {row(combo(0, c.a2, 0), 0), row(combo(0, 0, c.a3), 0), row(combo(1, c.b2, c.b3), third),
                row(combo(2, c.c2, c.c3), two_thirds)};
    return {row(combo(0, c.a2, c.a3), 0), row(combo(1, c.b2, c.b3), third), row(combo(2, c.c2, 0), two_thirds),
            row(combo(2, 0, c.c3), two_thirds)};
}

namespace {

/// Signed terms of each relation; the residual is their sum.
std::array<std::array<double, 3>, 4> relation_terms(const VertexCoupling& c, const VertexTraces& t)
{
    if (c.kind == CouplingKind::Type1)
        return {{{t.u[0], -c.a2 * t.v[0], 0.0},
                 {t.u[0], -c.a3 * t.w[0], 0.0},
                 {t.u[1], -c.b2 * t.v[1], -c.b3 * t.w[1]},
                 {t.u[2], -c.c2 * t.v[2], -c.c3 * t.w[2]}}};
    return {{{t.u[0], -c.a2 * t.v[0], -c.a3 * t.w[0]},
             {t.u[1], -c.b2 * t.v[1], -c.b3 * t.w[1]},
             {t.u[2], -c.c2 * t.v[2], 0.0},
             {t.u[2], -c.c3 * t.w[2], 0.0}}};
}

/// Derivative order of relation k.
int relation_order(const VertexCoupling& c, int k)
{
    if (c.kind == CouplingKind::Type1) return k < 2 ? 0 : k - 1;
    return k == 0 ? 0 : (k == 1 ? 1 : 2);
}

std::size_t zero_index(const GridFunction& f)
{
    const double k = -f.origin / f.spacing;
    const double r = std::round(k);
    if (!(f.origin < 0 && f.right() > 0) || std::fabs(k - r) > 1e-9)
        throw DomainError("assemble_linear_solution: data grid must straddle x = 0 with a node there");
    return std::size_t(r);
}

} // namespace

std::array<double, 4> coupling_residuals(const VertexCoupling& c, const VertexTraces& tr)
{
    std::array<double, 4> r{};
    const auto terms = relation_terms(c, tr);
    for (int k = 0; k < 4; ++k) r[k] = terms[k][0] + terms[k][1] + terms[k][2];
    return r;
}

VertexResidualReport verify_vertex_conditions(const Trajectory& traj, const VertexCoupling& c, double t_min,
                                              double t_max)
{
    VertexResidualReport rep;
    for (const auto& s : traj.states) {
        if (s.t < t_min - 1e-12 || s.t > t_max + 1e-12) continue;
        const auto tr = one_sided_traces(s);
        const auto terms = relation_terms(c, tr);
        rep.t.push_back(s.t);
        for (int k = 0; k < 4; ++k) {
            rep.residual[k].push_back(std::fabs(terms[k][0] + terms[k][1] + terms[k][2]));
            const int j = relation_order(c, k);
            rep.scale[k] = std::max({rep.scale[k], std::fabs(tr.u[j]), std::fabs(tr.v[j]), std::fabs(tr.w[j])});
        }
    }
    double sum = 0;
    std::size_t count = 0;
    for (int k = 0; k < 4; ++k) {
        if (rep.scale[k] == 0) continue;
        for (double r : rep.residual[k]) {
            const double rel = r / rep.scale[k];
            rep.max_relative = std::max(rep.max_relative, rel);
            sum += rel;
            ++count;
        }
    }
    rep.mean_relative = count ? sum / double(count) : 0.0;
    return rep;
}

LinearSolution assemble_linear_solution(const std::array<GridFunction, 3>& data, const VertexCoupling& c,
                                        const LambdaVector& l, double T, const AssemblyOptions& opt)
{
    if (!(T > 0) || !(opt.dt > 0) || opt.stride == 0)
        throw DomainError("assemble_linear_solution: T, dt and stride must be positive");
    const GridFunction& u0 = data[0];
    for (const auto& d : data)
        if (d.origin != u0.origin || d.spacing != u0.spacing || d.size() != u0.size())
            throw ContractError("assemble_linear_solution: data must share one grid");
    const std::size_t i0 = zero_index(u0);
    if (i0 < 8 || u0.size() - i0 < 9) throw DomainError("assemble_linear_solution: too few nodes on one side of 0");

    if (l.s > 0.5) {
        const double x = u0.samples[i0], y = data[1].samples[i0], z = data[2].samples[i0];
        const double scale = std::max({1.0, std::fabs(x), std::fabs(y), std::fabs(z)});
        const double mis = c.kind == CouplingKind::Type1
                               ? std::max(std::fabs(x - c.a2 * y), std::fabs(x - c.a3 * z))
                               : std::fabs(x - c.a2 * y - c.a3 * z);
        if (mis > 1e-8 * scale) {
            std::ostringstream os;
            os << "assemble_linear_solution: data violate the vertex compatibility condition (mismatch " << mis << ")";
            throw ContractError(os.str());
        }
    }

    const std::size_t steps = std::size_t(std::llround(T / opt.dt));
    std::array<SpaceTimeField, 3> free;
    for (int e = 0; e < 3; ++e) free[e] = free_evolution(data[e], opt.dt, steps + 1, opt.group);
    return assemble_from_fields(free, c, l, opt);
}

LinearSolution assemble_from_fields(const std::array<SpaceTimeField, 3>& free, const VertexCoupling& c,
                                    const LambdaVector& l, const AssemblyOptions& opt)
{
    const SpaceTimeField& f0 = free[0];
    if (opt.stride == 0 || f0.levels.size() < 2 || !(f0.dt > 0))
        throw DomainError("assemble_from_fields: need two or more levels and a positive stride");
    for (const auto& f : free)
        if (f.origin != f0.origin || f.spacing != f0.spacing || f.dt != f0.dt || f.levels.size() != f0.levels.size() ||
            f.nx() != f0.nx())
            throw ContractError("assemble_from_fields: fields must share one grid");
    const GridFunction u0 = f0.level(0);
    const std::size_t i0 = zero_index(u0);
    const double h = u0.spacing;
    if (i0 < 8 || u0.size() - i0 < 9) throw DomainError("assemble_from_fields: too few nodes on one side of 0");

    LinearSolution sol;
    sol.m = build_matrix(c, l);
    if (!is_invertible(sol.m)) {
        std::ostringstream os;
        os << "boundary matrix is singular, |det| = " << std::abs(det_m(sol.m));
        throw NumericalError(os.str());
    }

    const std::size_t steps = f0.levels.size() - 1;
    std::array<std::array<TimeTrace, 3>, 3> traces;
    for (int e = 0; e < 3; ++e)
        for (int j = 0; j < 3; ++j) traces[e][j] = trace_at_zero(free[e], j, Side::Centered);
    sol.rhs = build_rhs(c, traces);
    sol.gamma = solve_gamma(sol.m, sol.rhs);
    for (const auto& g : sol.gamma)
        for (const auto& x : g.samples)
            if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
                throw NumericalError("assemble_from_fields: non-finite boundary trace");

    // Each edge grid ends at the vertex; four nodes beyond it keep x = 0 interior.
    const GridLayout left{u0.origin, h, i0 + 5};
    const GridLayout right{u0.x(i0 - 4), h, u0.size() - i0 + 4};
    const TimeLevels out{f0.dt * double(opt.stride), steps / opt.stride + 1};

    auto field = [&](double lam, Sign sign, int g, const GridLayout& grid) {
        return forcing_class(lam, sign, sol.gamma[g], grid, out, 0, opt.forcing).field;
    };
    const CSpaceTimeField fu1 = field(l.l1, Sign::Minus, 0, left);
    const CSpaceTimeField fu2 = field(l.l2, Sign::Minus, 1, left);
    const CSpaceTimeField fv = field(l.l3, Sign::Plus, 2, right);
    const CSpaceTimeField fw = field(l.l4, Sign::Plus, 3, right);

    double imag_max = 0, real_max = 0;
    for (std::size_t n = 0; n < out.count; ++n) {
        const std::size_t lev = n * opt.stride;
        GraphState st;
        st.t = out.dt * double(n);
        st.u = {u0.origin, h, std::vector<double>(i0 + 1)};
        st.v = {0.0, h, std::vector<double>(u0.size() - i0)};
        st.w = st.v;
        for (std::size_t i = 0; i <= i0; ++i) {
            const cplx z = fu1.levels[n][i] + fu2.levels[n][i];
            st.u.samples[i] = z.real() + free[0].levels[lev][i];
            imag_max = std::max(imag_max, std::fabs(z.imag()));
            real_max = std::max(real_max, std::fabs(st.u.samples[i]));
        }
        for (std::size_t i = 0; i < st.v.size(); ++i) {
            const cplx zv = fv.levels[n][i + 4], zw = fw.levels[n][i + 4];
            st.v.samples[i] = zv.real() + free[1].levels[lev][i0 + i];
            st.w.samples[i] = zw.real() + free[2].levels[lev][i0 + i];
            imag_max = std::max({imag_max, std::fabs(zv.imag()), std::fabs(zw.imag())});
            real_max = std::max({real_max, std::fabs(st.v.samples[i]), std::fabs(st.w.samples[i])});
        }
        StepRecord rec;
        rec.step = lev;
        rec.t = st.t;
        rec.mass_u = l2_mass(st.u);
        rec.mass_v = l2_mass(st.v);
        rec.mass_w = l2_mass(st.w);
        rec.traces = one_sided_traces(st);
        rec.flux = energy_flux(rec.traces);
        for (double r : coupling_residuals(c, rec.traces)) rec.residual = std::max(rec.residual, std::fabs(r));
        sol.traj.states.push_back(std::move(st));
        sol.traj.diagnostics.push_back(rec);
    }
    sol.imag_residual = real_max > 0 ? imag_max / real_max : imag_max;
    return sol;
}

std::string to_string(CouplingKind k) { return k == CouplingKind::Type1 ? "type1" : "type2"; }

} // namespace ygraph
