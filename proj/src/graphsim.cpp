#include "ygraph/graphsim.hpp"

#include "ygraph/errors.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ygraph {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;
/// Sparse linear functional on the unknown vector.
using Lin = std::vector<std::pair<std::size_t, double>>;

Lin scaled(const Lin& a, double s)
{
    Lin r = a;
    for (auto& [i, c] : r) c *= s;
    return r;
}

Lin sum(std::initializer_list<Lin> parts)
{
    Lin r;
    for (const auto& p : parts) r.insert(r.end(), p.begin(), p.end());
    return r;
}

double eval_lin(const Lin& a, const Vec& U)
{
    double s = 0;
    for (const auto& [i, c] : a) s += c * U[Eigen::Index(i)];
    return s;
}

/// Trace stencils at an edge end. first = true: the end is node 0 and the
/// edge extends to the right; otherwise it is node n-1 with the edge to the left.
Lin end_trace(std::size_t offset, std::size_t n, double h, int j, bool first)
{
    auto node = [&](std::size_t k) { return first ? offset + k : offset + n - 1 - k; };
    if (j == 0) return {{node(0), 1.0}};
    if (j == 1) {
        const double s = first ? 1.0 : -1.0;
        return {{node(0), -1.5 * s / h}, {node(1), 2.0 * s / h}, {node(2), -0.5 * s / h}};
    }
    const double h2 = h * h;
    return {{node(0), 2.0 / h2}, {node(1), -5.0 / h2}, {node(2), 4.0 / h2}, {node(3), -1.0 / h2}};
}

/// Bordered Crank-Nicolson system for U_t = -D U - Sigma U with C U = 0.
class Engine {
public:
    Engine(std::size_t edges, std::size_t n, double h, double dt, const std::vector<double>& sigma,
           std::vector<Lin> cons)
        : edges_(edges), n_(n), h_(h), dt_(dt), cons_(std::move(cons))
    {
        const std::size_t N = edges * n, m = cons_.size();
        hw_.resize(Eigen::Index(N));
        const auto w = edge_norm_weights(n, h);
        for (std::size_t e = 0; e < edges; ++e)
            for (std::size_t i = 0; i < n; ++i) hw_[Eigen::Index(e * n + i)] = w[i];

        const double h3 = h * h * h;
        std::vector<Eigen::Triplet<double>> ta, tb;
        auto put = [&](std::size_t r, std::size_t c, double d) {
            const double hr = hw_[Eigen::Index(r)];
            ta.emplace_back(int(r), int(c), hr * 0.5 * dt * d);
            tb.emplace_back(int(r), int(c), -hr * 0.5 * dt * d);
        };
        const double closure[4] = {-1, 3, -3, 1}, centred[5] = {-0.5, 1, 0, -1, 0.5};
        for (std::size_t e = 0; e < edges; ++e) {
            const std::size_t o = e * n;
            for (std::size_t i = 0; i < n; ++i) {
                if (i < 2)
                    for (int k = 0; k < 4; ++k) put(o + i, o + std::size_t(k), closure[k] / h3);
                else if (i + 2 >= n)
                    for (int k = 0; k < 4; ++k) put(o + i, o + n - 4 + std::size_t(k), closure[k] / h3);
                else
                    for (int k = 0; k < 5; ++k)
                        if (centred[k] != 0) put(o + i, o + i - 2 + std::size_t(k), centred[k] / h3);
                const double hr = hw_[Eigen::Index(o + i)];
                ta.emplace_back(int(o + i), int(o + i), hr * (1.0 + 0.5 * dt * sigma[o + i]));
                tb.emplace_back(int(o + i), int(o + i), hr * (1.0 - 0.5 * dt * sigma[o + i]));
            }
        }
        for (std::size_t r = 0; r < m; ++r)
            for (const auto& [i, c] : cons_[r]) {
                ta.emplace_back(int(N + r), int(i), c);
                ta.emplace_back(int(i), int(N + r), c);
            }
        A_.resize(Eigen::Index(N + m), Eigen::Index(N + m));
        A_.setFromTriplets(ta.begin(), ta.end());
        B_.resize(Eigen::Index(N), Eigen::Index(N));
        B_.setFromTriplets(tb.begin(), tb.end());
        lu_.compute(A_);
        if (lu_.info() != Eigen::Success) {
            std::ostringstream os;
            os << "evolve: bordered system is singular at step 0 (" << lu_.lastErrorMessage() << ")";
            throw NumericalError(os.str());
        }
    }

    std::size_t size() const { return edges_ * n_; }
    const Vec& weights() const { return hw_; }
    const std::vector<Lin>& constraints() const { return cons_; }

    /// H-orthogonal projection onto C U = 0.
    void project(Vec& U) const
    {
        const std::size_t m = cons_.size();
        const auto mi = Eigen::Index(m);
        Eigen::MatrixXd G(mi, mi);
        Vec r = Vec::Zero(Eigen::Index(m));
        for (std::size_t a = 0; a < m; ++a) {
            r[Eigen::Index(a)] = eval_lin(cons_[a], U);
            for (std::size_t b = 0; b < m; ++b) {
                double s = 0;
                for (const auto& [i, ca] : cons_[a])
                    for (const auto& [j, cb] : cons_[b])
                        if (i == j) s += ca * cb / hw_[Eigen::Index(i)];
                G(Eigen::Index(a), Eigen::Index(b)) = s;
            }
        }
        const Vec mu = G.fullPivLu().solve(r);
        for (std::size_t a = 0; a < m; ++a)
            for (const auto& [i, c] : cons_[a]) U[Eigen::Index(i)] -= c * mu[Eigen::Index(a)] / hw_[Eigen::Index(i)];
    }

    /// d_x(U^2/2) per edge.
    Vec nonlinear(const Vec& U) const
    {
        Vec out(U.size());
        for (std::size_t e = 0; e < edges_; ++e) {
            const std::size_t o = e * n_;
            auto f = [&](std::size_t i) { return 0.5 * U[Eigen::Index(o + i)] * U[Eigen::Index(o + i)]; };
            out[Eigen::Index(o)] = (-1.5 * f(0) + 2.0 * f(1) - 0.5 * f(2)) / h_;
            for (std::size_t i = 1; i + 1 < n_; ++i) out[Eigen::Index(o + i)] = (f(i + 1) - f(i - 1)) / (2.0 * h_);
            out[Eigen::Index(o + n_ - 1)] = (0.5 * f(n_ - 3) - 2.0 * f(n_ - 2) + 1.5 * f(n_ - 1)) / h_;
        }
        return out;
    }

    /// One step; nl is the extrapolated nonlinear term or null.
    void step(Vec& U, const Vec* nl, std::size_t step_no) const
    {
        const std::size_t N = size(), m = cons_.size();
        Vec rhs = Vec::Zero(Eigen::Index(N + m));
        rhs.head(Eigen::Index(N)) = B_ * U;
        if (nl) rhs.head(Eigen::Index(N)) -= dt_ * hw_.cwiseProduct(*nl);
        const Vec x = lu_.solve(rhs);
        const double res = (A_ * x - rhs).norm(), scale = rhs.norm();
        if (!(res <= 1e-8 * scale + 1e-300)) {
            std::ostringstream os;
            os << "evolve: linear solve failed at step " << step_no << " (residual ratio "
               << (scale > 0 ? res / scale : res) << ")";
            throw NumericalError(os.str());
        }
        U = x.head(Eigen::Index(N));
    }

private:
    std::size_t edges_, n_;
    double h_, dt_;
    std::vector<Lin> cons_;
    Vec hw_;
    SpMat A_, B_;
    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu_;
};

std::array<Lin, 4> vertex_relations(const VertexCoupling& c, std::size_t n, double h)
{
    auto U = [&](int j) { return end_trace(0, n, h, j, false); };
    auto V = [&](int j) { return end_trace(n, n, h, j, true); };
    auto W = [&](int j) { return end_trace(2 * n, n, h, j, true); };
    if (c.kind == CouplingKind::Type1)
        return {sum({U(0), scaled(V(0), -c.a2)}), sum({U(0), scaled(W(0), -c.a3)}),
                sum({U(1), scaled(V(1), -c.b2), scaled(W(1), -c.b3)}),
                sum({U(2), scaled(V(2), -c.c2), scaled(W(2), -c.c3)})};
    return {sum({U(0), scaled(V(0), -c.a2), scaled(W(0), -c.a3)}),
            sum({U(1), scaled(V(1), -c.b2), scaled(W(1), -c.b3)}), sum({U(2), scaled(V(2), -c.c2)}),
            sum({U(2), scaled(W(2), -c.c3)})};
}

std::vector<double> sponge(const ScenarioConfig& cfg, std::size_t n)
{
    std::vector<double> s(3 * n, 0.0);
    const double width = cfg.sponge_fraction * cfg.L;
    if (!(width > 0) || !(cfg.sponge_strength > 0)) return s;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = cfg.h * double(i); // distance from the outer end of u
        if (d < width) {
            const double r = 1.0 - d / width;
            s[i] = cfg.sponge_strength * r * r;
            s[n + (n - 1 - i)] = s[2 * n + (n - 1 - i)] = s[i];
        }
    }
    return s;
}

void check_numeric(const ScenarioConfig& cfg, std::vector<std::string>& errs)
{
    auto need = [&](bool ok, const std::string& msg) {
        if (!ok) errs.push_back(msg);
    };
    need(cfg.L > 0, "L must be positive");
    need(cfg.h > 0, "h must be positive");
    need(cfg.dt > 0, "dt must be positive");
    need(cfg.T > 0, "T must be positive");
    if (cfg.L > 0 && cfg.h > 0) {
        need(cfg.h <= cfg.L / 100 * (1 + 1e-12), "h must not exceed L/100");
        const double r = cfg.L / cfg.h;
        need(std::fabs(r - std::round(r)) <= 1e-6 * r, "L must be a multiple of h");
    }
    need(cfg.dt <= cfg.h * (1 + 1e-12), "dt must not exceed h");
    need(cfg.sponge_fraction >= 0 && cfg.sponge_fraction <= 0.3, "sponge_fraction must lie in [0, 0.3]");
    need(cfg.sponge_strength >= 0, "sponge_strength must be non-negative");
    need(cfg.snapshot_every >= 1, "snapshot_every must be at least 1");
    try {
        cfg.coupling.validate();
    } catch (const DomainError& e) {
        errs.push_back(e.what());
    }
}

[[noreturn]] void raise(const std::vector<std::string>& errs)
{
    std::string msg = "invalid scenario:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw ContractError(msg);
}

StepRecord record(const Engine& eng, const std::array<Lin, 4>& rel, const Vec& U, std::size_t n, double h,
                  std::size_t step, double t)
{
    StepRecord r;
    r.step = step;
    r.t = t;
    const Vec& w = eng.weights();
    double m[3] = {0, 0, 0};
    for (std::size_t e = 0; e < 3; ++e)
        for (std::size_t i = 0; i < n; ++i) {
            const auto k = Eigen::Index(e * n + i);
            m[e] += w[k] * U[k] * U[k];
        }
    r.mass_u = m[0], r.mass_v = m[1], r.mass_w = m[2];
    for (int j = 0; j < 3; ++j) {
        r.traces.u[j] = eval_lin(end_trace(0, n, h, j, false), U);
        r.traces.v[j] = eval_lin(end_trace(n, n, h, j, true), U);
        r.traces.w[j] = eval_lin(end_trace(2 * n, n, h, j, true), U);
    }
    r.flux = energy_flux(r.traces);
    for (const auto& l : rel) r.residual = std::max(r.residual, std::fabs(eval_lin(l, U)));
    return r;
}

GraphState unpack(const Vec& U, std::size_t n, double L, double h, double t)
{
    GraphState s;
    s.t = t;
    s.u = {-L, h, std::vector<double>(U.data(), U.data() + n)};
    s.v = {0.0, h, std::vector<double>(U.data() + n, U.data() + 2 * n)};
    s.w = {0.0, h, std::vector<double>(U.data() + 2 * n, U.data() + 3 * n)};
    return s;
}

} // namespace

double Profile::operator()(double x) const
{
    if (kind == "zero") return 0.0;
    if (kind == "gaussian") {
        const double z = (x - center) / width;
        return amp * std::exp(-z * z);
    }
    if (kind == "soliton") {
        const double s = 1.0 / std::cosh(0.5 * std::sqrt(speed) * (x - center));
        return 3.0 * speed * s * s;
    }
    if (kind == "file") {
        if (table.empty() || x < table.front()[0] || x > table.back()[0]) return 0.0;
        auto it = std::lower_bound(table.begin(), table.end(), x,
                                   [](const std::array<double, 2>& p, double v) { return p[0] < v; });
        if (it == table.begin()) return (*it)[1];
        const auto& b = *it;
        const auto& a = *(it - 1);
        return a[1] + (b[1] - a[1]) * (x - a[0]) / (b[0] - a[0]);
    }
    throw ContractError("unknown profile kind '" + kind + "'");
}

Profile Profile::gaussian(double amp, double center, double width)
{
    Profile p;
    p.kind = "gaussian";
    p.amp = amp;
    p.center = center;
    p.width = width;
    return p;
}

Profile Profile::soliton(double speed, double center)
{
    Profile p;
    p.kind = "soliton";
    p.speed = speed;
    p.center = center;
    return p;
}

std::size_t ScenarioConfig::steps() const { return std::size_t(std::llround(T / dt)); }

std::size_t ScenarioConfig::nodes() const { return std::size_t(std::llround(L / h)) + 1; }

void ScenarioConfig::validate() const
{
    std::vector<std::string> errs;
    check_numeric(*this, errs);
    for (std::size_t e = 0; e < 3; ++e) {
        const auto& p = initial[e];
        if (p.kind != "zero" && p.kind != "gaussian" && p.kind != "soliton" && p.kind != "file")
            errs.push_back("unknown profile kind '" + p.kind + "'");
        if (p.kind == "soliton" && !(p.speed > 0)) errs.push_back("soliton speed must be positive");
        if (p.kind == "gaussian" && !(p.width > 0)) errs.push_back("gaussian width must be positive");
        if (p.kind == "file" && p.table.size() < 2) errs.push_back("profile file '" + p.file + "' has too few samples");
    }
    if (errs.empty()) {
        const double u = initial[0](0), v = initial[1](0), w = initial[2](0);
        const double scale = std::max({1.0, std::fabs(u), std::fabs(v), std::fabs(w)});
        const auto& c = coupling;
        if (c.kind == CouplingKind::Type1) {
            if (std::fabs(u - c.a2 * v) > 1e-8 * scale || std::fabs(u - c.a3 * w) > 1e-8 * scale) {
                std::ostringstream os;
                os << "initial data violate u0(0) = a2 v0(0) = a3 w0(0): u0(0) = " << u << ", a2 v0(0) = " << c.a2 * v
                   << ", a3 w0(0) = " << c.a3 * w;
                errs.push_back(os.str());
            }
        } else if (std::fabs(u - c.a2 * v - c.a3 * w) > 1e-8 * scale) {
            std::ostringstream os;
            os << "initial data violate u0(0) = a2 v0(0) + a3 w0(0): u0(0) = " << u
               << ", a2 v0(0) + a3 w0(0) = " << c.a2 * v + c.a3 * w;
            errs.push_back(os.str());
        }
    }
    if (!errs.empty()) raise(errs);
}

std::vector<double> edge_norm_weights(std::size_t n, double h)
{
    std::vector<double> w(n, h);
    if (n >= 4) w[1] = w[n - 2] = 0.5 * h;
    return w;
}

double edge_mass(const GridFunction& f)
{
    const auto w = edge_norm_weights(f.size(), f.spacing);
    double s = 0;
    for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * f.samples[i] * f.samples[i];
    return s;
}

GraphState initial_state(const ScenarioConfig& cfg)
{
    const std::size_t n = cfg.nodes();
    GraphState s;
    s.u = {-cfg.L, cfg.h, std::vector<double>(n)};
    s.v = {0.0, cfg.h, std::vector<double>(n)};
    s.w = s.v;
    for (std::size_t i = 0; i < n; ++i) {
        s.u.samples[i] = cfg.initial[0](s.u.x(i));
        s.v.samples[i] = cfg.initial[1](s.v.x(i));
        s.w.samples[i] = cfg.initial[2](s.w.x(i));
    }
    // The last u node is the vertex; avoid sampling at a rounded -L + (n-1) h.
    s.u.samples[n - 1] = cfg.initial[0](0.0);
    return s;
}

Trajectory evolve(const ScenarioConfig& cfg)
{
    cfg.validate();
    return evolve_from(cfg, initial_state(cfg));
}

Trajectory evolve_from(const ScenarioConfig& cfg, const GraphState& start)
{
    std::vector<std::string> errs;
    check_numeric(cfg, errs);
    if (!errs.empty()) raise(errs);
    const std::size_t n = cfg.nodes(), steps = cfg.steps();
    if (start.u.size() != n || start.v.size() != n || start.w.size() != n)
        throw ContractError("evolve: start state does not match the scenario grid");
    const double h = cfg.h;

    const auto rel = vertex_relations(cfg.coupling, n, h);
    std::vector<Lin> cons;
    cons.push_back(end_trace(0, n, h, 0, true)); // u(-L)
    for (std::size_t o : {n, 2 * n}) {
        cons.push_back(end_trace(o, n, h, 0, false));
        cons.push_back(end_trace(o, n, h, 1, false));
    }
    for (const auto& r : rel) cons.push_back(r);
    const Engine eng(3, n, h, cfg.dt, sponge(cfg, n), cons);

    Vec U(Eigen::Index(3 * n));
    std::copy(start.u.samples.begin(), start.u.samples.end(), U.data());
    std::copy(start.v.samples.begin(), start.v.samples.end(), U.data() + n);
    std::copy(start.w.samples.begin(), start.w.samples.end(), U.data() + 2 * n);
    eng.project(U);

    Trajectory tr;
    tr.nonlinear = cfg.mode == Mode::Nonlinear;
    tr.diagnostics.reserve(steps + 1);
    tr.states.push_back(unpack(U, n, cfg.L, h, 0.0));
    tr.diagnostics.push_back(record(eng, rel, U, n, h, 0, 0.0));

    Vec prev;
    for (std::size_t k = 1; k <= steps; ++k) {
        const double t = cfg.dt * double(k);
        if (tr.nonlinear) {
            Vec cur = eng.nonlinear(U);
            Vec ext = prev.size() ? Vec(1.5 * cur - 0.5 * prev) : cur;
            eng.step(U, &ext, k);
            prev = std::move(cur);
        } else {
            eng.step(U, nullptr, k);
        }
        const double peak = U.cwiseAbs().maxCoeff();
        if (!(peak <= 1e6)) {
            std::ostringstream os;
            os << "evolve: blow-up at step " << k << " (t = " << t << ", max |field| = " << peak << ")";
            throw NumericalError(os.str());
        }
        tr.diagnostics.push_back(record(eng, rel, U, n, h, k, t));
        if (k % cfg.snapshot_every == 0 || k == steps) tr.states.push_back(unpack(U, n, cfg.L, h, t));
    }
    return tr;
}

GridFunction soliton_exact(double c, double x0, double t, const GridLayout& grid)
{
    if (!(c > 0)) throw DomainError("soliton_exact: speed must be positive");
    GridFunction g{grid.origin, grid.spacing, std::vector<double>(grid.n)};
    const double k = 0.5 * std::sqrt(c);
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double s = 1.0 / std::cosh(k * (grid.x(i) - c * t - x0));
        g.samples[i] = 3.0 * c * s * s;
    }
    return g;
}

GridFunction single_line_evolve(const GridFunction& u0, double dt, double T, Mode mode)
{
    const std::size_t n = u0.size();
    if (n < 8 || !(u0.spacing > 0) || !(dt > 0) || !(T >= 0))
        throw DomainError("single_line_evolve: need at least 8 nodes and positive h, dt");
    const double h = u0.spacing;
    std::vector<Lin> cons = {end_trace(0, n, h, 0, true), end_trace(0, n, h, 0, false), end_trace(0, n, h, 1, false)};
    const Engine eng(1, n, h, dt, std::vector<double>(n, 0.0), cons);
    Vec U = Eigen::Map<const Vec>(u0.samples.data(), Eigen::Index(n));
    eng.project(U);
    Vec prev;
    const std::size_t steps = std::size_t(std::llround(T / dt));
    for (std::size_t k = 1; k <= steps; ++k) {
        if (mode == Mode::Nonlinear) {
            Vec cur = eng.nonlinear(U);
            Vec ext = prev.size() ? Vec(1.5 * cur - 0.5 * prev) : cur;
            eng.step(U, &ext, k);
            prev = std::move(cur);
        } else {
            eng.step(U, nullptr, k);
        }
    }
    return {u0.origin, h, std::vector<double>(U.data(), U.data() + n)};
}

EnergyReport energy_report(const Trajectory& traj)
{
    EnergyReport r;
    r.nonlinear_warning = traj.nonlinear;
    const auto& d = traj.diagnostics;
    if (d.empty()) return r;
    const double m0 = d[0].mass_u + d[0].mass_v + d[0].mass_w;
    double acc = 0;
    r.max_flux = d[0].flux;
    for (std::size_t k = 0; k < d.size(); ++k) {
        const double m = d[k].mass_u + d[k].mass_v + d[k].mass_w;
        if (k > 0) {
            acc += 0.5 * (d[k].t - d[k - 1].t) * (d[k].flux + d[k - 1].flux);
            if (m0 > 0) r.max_increase = std::max(r.max_increase, (m - r.mass.back()) / m0);
        }
        r.t.push_back(d[k].t);
        r.mass.push_back(m);
        r.mass_change.push_back(m - m0);
        r.flux.push_back(d[k].flux);
        r.flux_integral.push_back(acc);
        r.max_flux = std::max(r.max_flux, d[k].flux);
        if (m0 > 0) r.max_mismatch = std::max(r.max_mismatch, std::fabs(m - m0 - acc) / m0);
    }
    return r;
}

ScalingReport scaling_check(const ScenarioConfig& cfg, double lam, int refine)
{
    if (!(lam > 0 && lam <= 1)) throw DomainError("scaling_check: lam must lie in (0, 1]");
    if (refine < 1) throw DomainError("scaling_check: refine must be at least 1");
    cfg.validate();
    ScenarioConfig base = cfg;
    base.snapshot_every = cfg.steps();
    const Trajectory a = evolve_from(base, initial_state(cfg));

    const double l3 = lam * lam * lam;
    ScenarioConfig sc = base;
    sc.L = lam * cfg.L;
    sc.h = lam * cfg.h / refine;
    sc.dt = l3 * cfg.dt / refine;
    sc.T = l3 * cfg.T;
    sc.sponge_strength = cfg.sponge_strength / l3;
    sc.snapshot_every = sc.steps();
    const std::size_t n = sc.nodes();
    GraphState s1;
    s1.u = {-sc.L, sc.h, std::vector<double>(n)};
    s1.v = {0.0, sc.h, std::vector<double>(n)};
    s1.w = s1.v;
    const double amp = 1.0 / (lam * lam);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = sc.h * double(i);
        s1.u.samples[i] = amp * cfg.initial[0]((y - sc.L) / lam);
        s1.v.samples[i] = amp * cfg.initial[1](y / lam);
        s1.w.samples[i] = amp * cfg.initial[2](y / lam);
    }
    s1.u.samples[n - 1] = amp * cfg.initial[0](0.0);
    const Trajectory b = evolve_from(sc, s1);

    ScalingReport rep;
    rep.lam = lam;
    const GraphState& A = a.states.back();
    const GraphState& B = b.states.back();
    const std::array<const GridFunction*, 3> fa = {&A.u, &A.v, &A.w}, fb = {&B.u, &B.v, &B.w};
    const auto r = std::size_t(refine);
    // Per-edge errors relative to the whole graph norm: an edge the data never
    // reach has no scale of its own.
    const double ref = std::sqrt(edge_mass(A.u) + edge_mass(A.v) + edge_mass(A.w));
    for (int e = 0; e < 3; ++e) {
        GridFunction diff = *fa[e];
        for (std::size_t i = 0; i < diff.size(); ++i) diff.samples[i] -= lam * lam * fb[e]->samples[i * r];
        const double err = std::sqrt(edge_mass(diff));
        rep.discrepancy[e] = ref > 0 ? err / ref : err;
        rep.max_discrepancy = std::max(rep.max_discrepancy, rep.discrepancy[e]);
    }
    return rep;
}

} // namespace ygraph
