#include "ygraph/acceptance.hpp"
#include "ygraph/config.hpp"
#include "ygraph/csvio.hpp"
#include "ygraph/errors.hpp"
#include "ygraph/forcing.hpp"
#include "ygraph/fracops.hpp"
#include "ygraph/graphsim.hpp"
#include "ygraph/linops.hpp"
#include "ygraph/picard.hpp"
#include "ygraph/specfun.hpp"
#include "ygraph/vertex.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <type_traits>

using namespace ygraph;
namespace fs = std::filesystem;

namespace {

#ifndef YGRAPH_VERSION
#define YGRAPH_VERSION "dev"
#endif

struct Run {
    RunManifest m;
    fs::path out;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    Run(std::string command, fs::path dir) : out(std::move(dir))
    {
        m.command = std::move(command);
        m.version = YGRAPH_VERSION;
        if (!out.empty()) fs::create_directories(out);
    }

    void finish()
    {
        if (out.empty()) return;
        m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        write_manifest(out / "summary.json", m);
        std::printf("wrote %zu files to %s\n", m.outputs.size(), out.string().c_str());
    }
};

std::string num(double x) { return format_number(x); }

template <class T>
TimeTraceT<T> as_trace(const SampledCsv& c, const std::string& name)
{
    if (std::fabs(c.start) > 1e-12 * c.step) throw ContractError(name + ": trace must start at t = 0");
    TimeTraceT<T> g{c.step, {}, true};
    for (const auto& v : c.values) {
        if constexpr (std::is_same_v<T, double>)
            g.samples.push_back(v.real());
        else
            g.samples.push_back(v);
    }
    return g;
}

template <class T>
GridFunctionT<T> as_grid(const SampledCsv& c)
{
    GridFunctionT<T> f{c.start, c.step, {}};
    for (const auto& v : c.values) {
        if constexpr (std::is_same_v<T, double>)
            f.samples.push_back(v.real());
        else
            f.samples.push_back(v);
    }
    return f;
}

template <class T>
std::vector<cplx> to_complex(const std::vector<T>& v)
{
    return {v.begin(), v.end()};
}

struct CouplingArgs {
    std::string type = "1";
    std::vector<double> coeffs;
    double alpha2 = 1, alpha3 = 1, beta2 = 0, beta3 = 0;
    CLI::Option* special_opts[4] = {};

    void add(CLI::App* c)
    {
        c->add_option("--type", type, "1 | 2")->check(CLI::IsMember({"1", "2", "type1", "type2"}));
        auto* co = c->add_option("--coeffs", coeffs, "a2,a3,b2,b3,c2,c3")->expected(6)->delimiter(',');
        special_opts[0] = c->add_option("--alpha2", alpha2, "special coupling alpha2 (instead of --coeffs)");
        special_opts[1] = c->add_option("--alpha3", alpha3, "special coupling alpha3");
        special_opts[2] = c->add_option("--beta2", beta2, "special coupling beta2");
        special_opts[3] = c->add_option("--beta3", beta3, "special coupling beta3");
        for (auto* o : special_opts) o->excludes(co);
    }
    CouplingKind kind() const { return type == "1" || type == "type1" ? CouplingKind::Type1 : CouplingKind::Type2; }
    VertexCoupling coupling() const
    {
        if (coeffs.empty()) return VertexCoupling::special(kind(), alpha2, alpha3, beta2, beta3);
        VertexCoupling c{kind(), coeffs[0], coeffs[1], coeffs[2], coeffs[3], coeffs[4], coeffs[5]};
        c.validate();
        return c;
    }
    bool is_special() const { return coeffs.empty(); }
};

LambdaVector lambda_from(const std::vector<double>& v, double s)
{
    if (v.size() != 4) throw DomainError("--lambda needs four values l1,l2,l3,l4");
    return {v[0], v[1], v[2], v[3], s};
}

void print_report(const VertexResidualReport& rep, Run& run)
{
    const char* names[4] = {"relation_1", "relation_2", "relation_3", "relation_4"};
    for (int k = 0; k < 4; ++k) {
        double worst = 0;
        for (double r : rep.residual[k]) worst = std::max(worst, std::fabs(r) / rep.scale[k]);
        std::printf("%s relative residual %.3e\n", names[k], worst);
        run.m.metrics[std::string(names[k]) + "_relative"] = worst;
    }
    std::printf("max relative residual %.3e\n", rep.max_relative);
    run.m.metrics["max_relative_residual"] = rep.max_relative;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Y-junction KdV toolkit: Airy kernels, fractional integrals, boundary forcing, vertex matrices and "
                 "graph solvers."};
    app.require_subcommand(1);
    app.set_version_flag("--version", YGRAPH_VERSION);

    // airy
    double airy_x = 0;
    std::vector<double> airy_table;
    auto* airy = app.add_subcommand("airy", "A(x) = 3^{-1/3} Ai(3^{-1/3} x) and A'(x)");
    auto* ax = airy->add_option("--x", airy_x, "print A(x) and A'(x)");
    auto* at = airy->add_option("--table", airy_table, "a b n: CSV x,A,Aprime on n points of [a, b]")->expected(3);
    ax->excludes(at);
    airy->require_option(1);

    // fracint
    double fr_alpha = 0;
    std::string fr_in, fr_out;
    auto* fracint = app.add_subcommand("fracint", "Riemann-Liouville integral I_alpha of a causal trace");
    fracint->add_option("--alpha", fr_alpha, "order, |alpha| <= 3; negative orders differentiate")->required();
    fracint->add_option("--in", fr_in, "trace CSV t,value or t,re,im, uniform t from 0")->required();
    fracint->add_option("--out", fr_out, "output CSV, same header as the input")->required();

    // group
    double gr_t = 0;
    std::string gr_in, gr_out;
    auto* group = app.add_subcommand("group", "linear group e^{-t d_x^3} applied to a profile");
    group->add_option("--t", gr_t, "time")->required();
    group->add_option("--in", gr_in, "field CSV x,value or x,re,im on a uniform grid")->required();
    group->add_option("--out", gr_out, "output CSV, same header as the input")->required();

    // forcing
    double fo_lambda = 0;
    int fo_deriv = 0;
    std::vector<double> fo_grid = {5, 0.05}, fo_times;
    std::string fo_sign = "minus", fo_g, fo_out;
    auto* forcing = app.add_subcommand("forcing", "d_x^j V^lambda_{+-} g on [-L, L] at given times");
    forcing->add_option("--lambda", fo_lambda, "class order in (-2, 1); 0 gives V");
    forcing->add_option("--sign", fo_sign, "minus | plus")->check(CLI::IsMember({"minus", "plus"}));
    forcing->add_option("--g", fo_g, "trace CSV t,value or t,re,im")->required();
    forcing->add_option("--grid", fo_grid, "L,h")->expected(2)->delimiter(',');
    forcing->add_option("--times", fo_times, "output times, comma separated")->required()->delimiter(',');
    forcing->add_option("--deriv", fo_deriv, "x-derivative order 0..2")->check(CLI::Range(0, 2));
    forcing->add_option("--out", fo_out, "output CSV t,x,re,im")->required();

    // vertex
    auto* vertex = app.add_subcommand("vertex", "boundary matrix tools");
    vertex->require_subcommand(1);
    CouplingArgs vd_c, vs_c;
    double vd_eps = 0.1, vd_s = 0;
    std::string vd_branch = "low";
    std::vector<double> vd_lambda;
    auto* vdet = vertex->add_subcommand("det", "determinant of M at given lambda, or at an anchor by default");
    vd_c.add(vdet);
    vdet->add_option("--lambda", vd_lambda, "l1,l2,l3,l4")->expected(4)->delimiter(',');
    vdet->add_option("--s", vd_s, "regularity index s");
    vdet->add_option("--eps", vd_eps, "anchor offset epsilon (without --lambda)");
    vdet->add_option("--branch", vd_branch, "low | high anchor (without --lambda)")
        ->check(CLI::IsMember({"low", "high"}));

    double vs_s = 0, vs_eps = 0.1;
    std::size_t vs_res = 64;
    std::string vs_out;
    auto* vscan = vertex->add_subcommand("scan", "invertibility scan over the admissible window");
    vs_c.add(vscan);
    vscan->add_option("--s", vs_s, "regularity index in (-1/2, 3/2)");
    vscan->add_option("--eps", vs_eps, "anchor offset epsilon");
    vscan->add_option("--resolution", vs_res, "interior samples");
    vscan->add_option("--out", vs_out, "region CSV");

    std::string vc_cfg, vc_out;
    std::vector<double> vc_lambda = {0.05, 0.4, 0.05, 0.05};
    double vc_T = 0.5, vc_dt = 0.00125, vc_from = 0.1;
    auto* vcons = vertex->add_subcommand("construct", "linear solution from boundary forcing and gamma = M^{-1} F");
    vcons->add_option("--config", vc_cfg, "scenario file (coupling and initial data)")->required();
    vcons->add_option("--lambda", vc_lambda, "l1 l2 l3 l4")->expected(4)->delimiter(',');
    vcons->add_option("--T", vc_T, "final time");
    vcons->add_option("--dt", vc_dt, "gamma step");
    vcons->add_option("--from", vc_from, "check vertex relations for t >= this (skips the start-up layer)");
    vcons->add_option("--out", vc_out, "output directory");

    // simulate
    std::string sim_cfg, sim_out;
    auto* simulate = app.add_subcommand("simulate", "direct Crank-Nicolson graph solver");
    simulate->add_option("--config", sim_cfg, "scenario file")->required();
    simulate->add_option("--out", sim_out, "output directory")->required();

    // picard
    std::string pi_cfg, pi_out;
    std::size_t pi_iters = 4;
    PicardOptions pi_opt;
    auto* picard = app.add_subcommand("picard", "Picard iteration of the solution map");
    picard->add_option("--config", pi_cfg, "scenario file (T <= 0.5, small data)")->required();
    picard->add_option("--iters", pi_iters, "iterations, 1..10");
    picard->add_option("--L", pi_opt.L, "whole-line half-width");
    picard->add_option("--dx", pi_opt.h, "spacing");
    picard->add_option("--dt", pi_opt.dt, "gamma step");
    picard->add_option("--out", pi_out, "output directory");

    // scaling-check
    std::string sc_cfg, sc_out;
    double sc_lam = 0.5;
    int sc_refine = 1;
    auto* scaling = app.add_subcommand("scaling-check", "compare a run with its rescaled copy");
    scaling->add_option("--config", sc_cfg, "scenario file")->required();
    scaling->add_option("--lam", sc_lam, "scale in (0, 1]");
    scaling->add_option("--refine", sc_refine, "extra refinement of the scaled grid");
    scaling->add_option("--out", sc_out, "output directory");

    // accept
    AcceptanceOptions acc;
    auto* accept = app.add_subcommand("accept", "run the acceptance criteria");
    accept->add_flag("--quick", acc.quick, "shorter Picard horizon, no refined scaling runs");
    accept->add_option("--only", acc.only, "criterion ids")->check(CLI::Range(1, 11));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (airy->parsed()) {
            if (at->count()) {
                const auto n = std::size_t(std::llround(airy_table[2]));
                if (n < 2 || !(airy_table[1] > airy_table[0])) throw DomainError("airy --table needs a < b and n >= 2");
                std::printf("x,A,Aprime\n");
                for (std::size_t i = 0; i < n; ++i) {
                    const double x = airy_table[0] + (airy_table[1] - airy_table[0]) * double(i) / double(n - 1);
                    std::printf("%s,%s,%s\n", num(x).c_str(), num(airy_scaled(x)).c_str(),
                                num(airy_scaled_deriv(x)).c_str());
                }
            } else {
                std::printf("A(%s) = %.17g\nA'(%s) = %.17g\n", num(airy_x).c_str(), airy_scaled(airy_x),
                            num(airy_x).c_str(), airy_scaled_deriv(airy_x));
            }
            return 0;
        }
        if (fracint->parsed()) {
            const SampledCsv in = read_sampled_csv(fr_in, "t");
            if (in.complex) {
                const auto r = riemann_liouville(as_trace<cplx>(in, fr_in), fr_alpha);
                write_sampled_csv(fr_out, "t", 0, r.dt, r.samples, true);
            } else {
                const auto r = riemann_liouville(as_trace<double>(in, fr_in), fr_alpha);
                write_sampled_csv(fr_out, "t", 0, r.dt, to_complex(r.samples), false);
            }
            return 0;
        }
        if (group->parsed()) {
            const SampledCsv in = read_sampled_csv(gr_in, "x");
            if (in.complex) {
                const auto r = airy_group(as_grid<cplx>(in), gr_t);
                write_sampled_csv(gr_out, "x", r.origin, r.spacing, r.samples, true);
            } else {
                const auto r = airy_group(as_grid<double>(in), gr_t);
                write_sampled_csv(gr_out, "x", r.origin, r.spacing, to_complex(r.samples), false);
            }
            return 0;
        }
        if (forcing->parsed()) {
            const SampledCsv in = read_sampled_csv(fo_g, "t");
            const CTimeTrace g = as_trace<cplx>(in, fo_g);
            const double L = fo_grid[0], h = fo_grid[1];
            if (!(L > 0) || !(h > 0) || h > L) throw DomainError("--grid needs 0 < h <= L");
            const GridLayout grid{-L, h, std::size_t(std::llround(2 * L / h)) + 1};
            const Sign sign = fo_sign == "minus" ? Sign::Minus : Sign::Plus;
            std::ofstream os(fo_out);
            if (!os) throw ContractError("cannot write " + fo_out);
            os << "t,x,re,im\n";
            for (double t : fo_times) {
                if (!(t >= 0)) throw DomainError("--times must be non-negative");
                std::vector<cplx> level(grid.n, cplx(0));
                if (t > 0) level = forcing_class(fo_lambda, sign, g, grid, TimeLevels{t, 2}, fo_deriv).field.levels[1];
                for (std::size_t i = 0; i < grid.n; ++i)
                    os << num(t) << ',' << num(grid.x(i)) << ',' << num(level[i].real()) << ',' << num(level[i].imag())
                       << '\n';
            }
            return 0;
        }
        if (vdet->parsed()) {
            const auto c = vd_c.coupling();
            const auto branch = vd_branch == "low" ? AnchorBranch::Low : AnchorBranch::High;
            const LambdaVector l = vd_lambda.empty() ? anchor_lambda(vd_eps, branch) : lambda_from(vd_lambda, vd_s);
            const auto m = build_matrix(c, l);
            const cplx d = det_m(m);
            std::printf("lambda = (%s, %s, %s, %s)\n", num(l.l1).c_str(), num(l.l2).c_str(), num(l.l3).c_str(),
                        num(l.l4).c_str());
            std::printf("det = %.10g %+.10gi  |det| = %.10g\n", d.real(), d.imag(), std::abs(d));
            if (vd_lambda.empty() && vd_c.is_special()) {
                const cplx cf = closed_form_det(vd_c.alpha2, vd_c.alpha3, vd_c.beta2, vd_c.beta3, vd_eps, branch);
                std::printf("closed form = %.10g %+.10gi\n", cf.real(), cf.imag());
            }
            std::printf("invertible: %s (threshold %.3g)\n", is_invertible(m) ? "yes" : "no", invertibility_threshold(m));
            return 0;
        }
        if (vscan->parsed()) {
            const auto rep = admissible_scan(vs_s, vs_c.coupling(), vs_res, vs_eps);
            std::printf("window (%s, %s)%s; %zu of %zu samples invertible; Lipschitz estimate %.4g\n",
                        num(rep.lo).c_str(), num(rep.hi).c_str(), rep.window_empty ? " empty" : "",
                        rep.invertible_count, rep.samples.size(), rep.lipschitz);
            if (!vs_out.empty()) {
                std::ofstream os(vs_out);
                if (!os) throw ContractError("cannot write " + vs_out);
                rep.write_csv(os);
            }
            return 0;
        }
        if (vcons->parsed()) {
            Run run("vertex construct", vc_out);
            const ScenarioConfig cfg = parse_config(vc_cfg);
            const GraphState s0 = initial_state(cfg);
            const std::array<GridFunction, 3> data = {hestenes_extend(s0.u, true), hestenes_extend(s0.v, false),
                                                      hestenes_extend(s0.w, false)};
            AssemblyOptions opt;
            opt.dt = vc_dt;
            opt.stride = std::max<std::size_t>(1, std::size_t(std::llround(0.05 / vc_dt)));
            const auto sol = assemble_linear_solution(data, cfg.coupling, lambda_from(vc_lambda, 0), vc_T, opt);
            print_report(verify_vertex_conditions(sol.traj, cfg.coupling, vc_from), run);
            std::printf("imag residual %.3e\n", sol.imag_residual);
            run.m.metrics["imag_residual"] = sol.imag_residual;
            run.m.config_echo = config_text(cfg);
            if (!run.out.empty()) {
                for (const auto& st : sol.traj.states)
                    for (const auto& p : write_edge_snapshots(run.out, st)) run.m.outputs.push_back(p);
                run.m.outputs.push_back(write_diagnostics(run.out / "diagnostics.csv", sol.traj));
            }
            run.finish();
            return 0;
        }
        if (simulate->parsed()) {
            Run run("simulate", sim_out);
            const ScenarioConfig cfg = parse_config(sim_cfg);
            const Trajectory tr = evolve(cfg);
            for (const auto& st : tr.states)
                for (const auto& p : write_edge_snapshots(run.out, st)) run.m.outputs.push_back(p);
            run.m.outputs.push_back(write_diagnostics(run.out / "diagnostics.csv", tr));
            double res = 0;
            for (const auto& d : tr.diagnostics) res = std::max(res, d.residual);
            const auto& last = tr.diagnostics.back();
            run.m.metrics["max_coupling_residual"] = res;
            run.m.metrics["final_mass"] = last.mass_u + last.mass_v + last.mass_w;
            const auto er = energy_report(tr);
            run.m.metrics["energy_mismatch"] = er.max_mismatch;
            run.m.metrics["max_mass_increase"] = er.max_increase;
            run.m.config_echo = config_text(cfg);
            std::printf("%zu steps, final mass %.6g, max coupling residual %.2e, energy mismatch %.2e%s\n",
                        tr.diagnostics.size() - 1, run.m.metrics["final_mass"], res, er.max_mismatch,
                        er.nonlinear_warning ? " (nonlinear run: identity not expected)" : "");
            run.finish();
            return 0;
        }
        if (picard->parsed()) {
            Run run("picard", pi_out);
            const ScenarioConfig cfg = parse_config(pi_cfg);
            const PicardResult res = picard_iterate(cfg, pi_iters, pi_opt);
            std::printf("%s", res.history().c_str());
            for (std::size_t k = 0; k < res.distance.size(); ++k)
                run.m.metrics["distance_" + std::to_string(k + 1)] = res.distance[k];
            run.m.config_echo = config_text(cfg);
            if (!run.out.empty()) {
                const Trajectory& last = res.iterates.back();
                for (const auto& p : write_edge_snapshots(run.out, last.states.back())) run.m.outputs.push_back(p);
                run.m.outputs.push_back(write_diagnostics(run.out / "diagnostics.csv", last));
            }
            run.finish();
            if (res.diverged) {
                std::fprintf(stderr, "error: Picard iteration diverged\n");
                return 1;
            }
            return 0;
        }
        if (scaling->parsed()) {
            Run run("scaling-check", sc_out);
            const ScenarioConfig cfg = parse_config(sc_cfg);
            const auto rep = scaling_check(cfg, sc_lam, sc_refine);
            std::printf("lambda %s: discrepancy u %.3e, v %.3e, w %.3e\n", num(sc_lam).c_str(), rep.discrepancy[0],
                        rep.discrepancy[1], rep.discrepancy[2]);
            run.m.metrics["discrepancy_u"] = rep.discrepancy[0];
            run.m.metrics["discrepancy_v"] = rep.discrepancy[1];
            run.m.metrics["discrepancy_w"] = rep.discrepancy[2];
            run.m.config_echo = config_text(cfg);
            run.finish();
            return 0;
        }
        if (accept->parsed()) {
            acc.on_result = [](const CriterionResult& r) {
                std::printf("%s\n", format_result(r).c_str());
                std::fflush(stdout);
            };
            int failed = 0, total = 0;
            for (const auto& r : run_acceptance(acc)) {
                ++total;
                failed += !r.pass;
            }
            std::printf("%d of %d criteria passed\n", total - failed, total);
            return failed ? 1 : 0;
        }
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
