#include "polybound/bounds.hpp"
#include "polybound/dynsystem.hpp"
#include "polybound/numeric.hpp"
#include "polybound/svg.hpp"
#include "polybound/vs.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::json;
using namespace polybound;

namespace {

constexpr int kExitInfeasible = 1;
constexpr int kExitEngineLimit = 2;

// Accepts "16/3", "-7", and decimal literals like "1.62".
Rational parse_number(const std::string& text) {
    if (auto r = parse_rational(text)) return *r;
    auto dot = text.find('.');
    if (dot != std::string::npos) {
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        auto n = parse_rational(digits);
        if (n) {
            Rational den = 1;
            for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
            return *n / den;
        }
    }
    throw CLI::ValidationError("cannot parse number '" + text + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

DynSystem load_system(const std::string& spec, const std::vector<std::string>& param_flags) {
    DynSystem sys;
    if (spec == "lorenz") {
        sys = lorenz_classic();
    } else if (spec == "lorenz-symbolic") {
        sys = lorenz_symbolic();
    } else {
        sys = load_system_file(spec);
    }
    for (const auto& pf : param_flags) {
        auto eq = pf.find('=');
        if (eq == std::string::npos) {
            throw CLI::ValidationError("--param expects name=value, got '" + pf + "'");
        }
        sys = sys.with_param(var(pf.substr(0, eq)), parse_number(pf.substr(eq + 1)));
    }
    return sys;
}

void emit_json(const json& j, const std::string& json_out) {
    std::string text = j.dump(2) + "\n";
    std::cout << text;
    if (!json_out.empty()) {
        std::ofstream out(json_out);
        if (!out) throw std::runtime_error("cannot write " + json_out);
        out << text;
    }
}

void maybe_write_svg(const std::string& svg_out, const std::vector<EllipsoidBound>& cloud,
                     const std::vector<SvgOverlay>& overlays, const std::string& plane) {
    if (svg_out.empty()) return;
    std::ofstream out(svg_out);
    if (!out) throw std::runtime_error("cannot write " + svg_out);
    out << render_projection_svg(cloud, overlays, plane);
}

json ellipsoid_json(const EllipsoidBound& e) {
    return json{{"p1", e.p1}, {"p2", e.p2},     {"p3", e.p3},
                {"x30", e.x30}, {"c", e.c},     {"volume", ellipsoid_volume(e)}};
}

int cmd_qe(const std::string& formula_file, const std::string& json_out) {
    FormulaRef f = parse_formula(read_file(formula_file));
    QeOptions opts;
    // Strict mode: report out-of-range degrees instead of attempting rewrites,
    // so callers learn exactly which atom blocks the elimination.
    opts.allow_degree_rewrite = false;
    try {
        FormulaRef res = simplify_basic(qe(f, opts));
        std::cout << print_formula(res) << "\n";
        if (!json_out.empty()) {
            emit_json(json{{"result", print_formula(res)}}, json_out);
        }
        return 0;
    } catch (const DegreeTooHighError& e) {
        std::cerr << "degree limit: " << e.what() << "\n";
        std::cerr << "  variable:  " << var_name(e.report.variable) << "\n";
        std::cerr << "  degree:    " << e.report.max_degree << "\n";
        std::cerr << "  offending: " << e.report.offending.to_string() << "\n";
        return kExitEngineLimit;
    } catch (const QeOverflowError& e) {
        std::cerr << "formula growth limit: " << e.what() << "\n";
        return kExitEngineLimit;
    }
}

struct CandidateSpec {
    Rational p1 = 1, p2 = 1, p3 = 1, x30 = 0;
};

int run_bound(const std::string& system_spec, const std::vector<std::string>& params,
              const std::string& candidate, std::string method,
              const std::vector<std::string>& p_flags, const std::string& x30_flag, bool minimize,
              const std::string& tol_flag, const std::string& c_lo_flag,
              const std::string& c_hi_flag, const std::string& formula_kind,
              const std::string& json_out, const std::string& svg_out, const std::string& plane) {
    DynSystem sys = load_system(system_spec, params);

    // Numeric s, r, b for the closed forms and the fixed candidate centers.
    Rational s(10), r(28), b(8, 3);
    for (const auto& pf : params) {
        auto eq = pf.find('=');
        std::string name = pf.substr(0, eq);
        Rational val = parse_number(pf.substr(eq + 1));
        if (name == "s") s = val;
        if (name == "r") r = val;
        if (name == "b") b = val;
    }

    if (method == "auto") {
        if (candidate == "sphere-fixed" || candidate == "ellipse-fixed") method = "closed-form";
        else if (candidate == "sphere-center" || candidate == "ellipse-center") method = "biquadratic";
        else method = "bisection";
    }

    CandidateSpec cs;
    if (candidate == "sphere-fixed" || candidate == "sphere-center") {
        cs = {1, 1, 1, r + s};
    } else if (candidate == "ellipse-fixed" || candidate == "ellipse-center") {
        cs = {r, s, s, 2 * r};
    } else if (candidate == "custom") {
        if (p_flags.size() != 3) throw CLI::ValidationError("--candidate custom needs --p P1 P2 P3");
        cs.p1 = parse_number(p_flags[0]);
        cs.p2 = parse_number(p_flags[1]);
        cs.p3 = parse_number(p_flags[2]);
    } else {
        throw CLI::ValidationError("unknown candidate '" + candidate + "'");
    }
    if (!x30_flag.empty()) cs.x30 = parse_number(x30_flag);

    json out;
    out["candidate"] = candidate;
    auto t0 = std::chrono::steady_clock::now();
    double c_val = 0;
    std::string certificate;

    try {
        if (method == "closed-form") {
            RadicalValue rv = candidate == "ellipse-fixed" || candidate == "ellipse-center"
                                  ? closed_form_ellipse_bound(s, r, b)
                                  : closed_form_sphere_bound(s, r, b);
            c_val = rv.to_double();
            certificate = "closed-form";
            out["c_exact"] = rational_to_string(rv.q) + "*sqrt(" + rational_to_string(rv.d) + ")";
        } else if (method == "biquadratic") {
            VarId x30v = var("x30");
            Biquadratic bi = candidate == "ellipse-center" ? biquadratic_ellipse(x30v)
                                                           : biquadratic_sphere(x30v);
            if (minimize) {
                auto iv = bi.validity_interval();
                CenterMinimum cm = minimize_center(
                    [&](double x) { return bi.solve_largest_c(dyadic_from_double(x, 24)); },
                    iv.lo(), iv.hi());
                cs.x30 = dyadic_from_double(cm.x30, 24);
                c_val = cm.c;
            } else {
                auto c = bi.solve_largest_c(cs.x30);
                if (!c) {
                    std::cerr << "no bound exists at this center (outside validity interval)\n";
                    return kExitInfeasible;
                }
                c_val = *c;
            }
            certificate = "biquadratic";
        } else if (method == "bisection") {
            VarId cvar = var("c");
            auto cand = make_ellipsoid_candidate(cs.p1, cs.p2, cs.p3, cs.x30, cvar);
            BisectionOptions bo;
            bo.c_lo = c_lo_flag.empty() ? Rational(0) : parse_number(c_lo_flag);
            bo.c_hi = c_hi_flag.empty() ? Rational(1000) : parse_number(c_hi_flag);
            if (!tol_flag.empty()) bo.tol = parse_number(tol_flag);
            bo.variant = formula_kind == "convergence" ? BoundFormula::Convergence
                                                       : BoundFormula::Invariance;
            BoundResult br = bisection_bound(sys, cand, bo);
            if (!br.feasible) {
                std::cerr << "no feasible level found in the bracket\n";
                return kExitInfeasible;
            }
            c_val = br.c;
            certificate = "bisection";
        } else {
            throw CLI::ValidationError("unknown method '" + method + "'");
        }
    } catch (const DegreeTooHighError& e) {
        std::cerr << "degree limit: " << e.what() << "\n";
        return kExitEngineLimit;
    } catch (const QeOverflowError& e) {
        std::cerr << "formula growth limit: " << e.what() << "\n";
        return kExitEngineLimit;
    }

    double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    EllipsoidBound e{to_double(cs.p1), to_double(cs.p2), to_double(cs.p3), to_double(cs.x30),
                     c_val};
    out["params"] = {{"p1", e.p1}, {"p2", e.p2}, {"p3", e.p3}};
    out["c"] = c_val;
    out["x30"] = e.x30;
    out["volume"] = ellipsoid_volume(e);
    out["certificate"] = certificate;
    out["wall_time_ms"] = wall_ms;
    emit_json(out, json_out);
    maybe_write_svg(svg_out, {}, {{e, candidate, "#cc0000"}}, plane);
    return 0;
}

int run_montecarlo(const std::string& system_spec, const std::vector<std::string>& params, int n,
                   std::uint64_t seed, bool gap_mode, double gap, double p_lo, double p_hi,
                   double x30_lo, double x30_hi, const std::string& c_hi_flag,
                   const std::string& tol_flag, const std::string& json_out,
                   const std::string& svg_out, const std::string& plane) {
    if (n <= 0) {
        std::cerr << "no samples requested: the union of ellipsoids is empty\n";
        return kExitInfeasible;
    }
    DynSystem sys = load_system(system_spec, params);
    MonteCarloOptions mo;
    mo.n_samples = n;
    mo.seed = seed;
    mo.constrain_p2_eq_p3 = !gap_mode;
    mo.min_p_gap = gap_mode ? gap : 0.0;
    mo.p_lo = p_lo;
    mo.p_hi = p_hi;
    mo.x30_lo = x30_lo;
    mo.x30_hi = x30_hi;
    if (!c_hi_flag.empty()) mo.c_hi = parse_number(c_hi_flag);
    if (!tol_flag.empty()) mo.tol = parse_number(tol_flag);

    auto t0 = std::chrono::steady_clock::now();
    MonteCarloResult res = monte_carlo_search(sys, mo);
    double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    json out;
    out["samples_used"] = res.samples_used;
    out["n_feasible"] = static_cast<int>(res.feasible.size());
    out["wall_time_ms"] = wall_ms;
    json table = json::array();
    for (const auto& e : res.feasible) table.push_back(ellipsoid_json(e));
    out["feasible"] = table;
    if (res.best) out["best"] = ellipsoid_json(*res.best);
    emit_json(out, json_out);

    if (!svg_out.empty()) {
        if (res.feasible.empty()) {
            std::cerr << "no feasible ellipsoid: the union is empty, nothing to plot\n";
            return kExitInfeasible;
        }
        std::vector<SvgOverlay> overlays;
        if (res.best) overlays.push_back({*res.best, "best volume", "#cc0000"});
        maybe_write_svg(svg_out, res.feasible, overlays, plane);
    }
    return 0;
}

int run_plot(const std::string& results_file, const std::string& plane,
             const std::string& svg_out) {
    json in = json::parse(read_file(results_file));
    std::vector<EllipsoidBound> cloud;
    std::vector<SvgOverlay> overlays;
    auto to_e = [](const json& j) {
        return EllipsoidBound{j.at("p1"), j.at("p2"), j.at("p3"), j.at("x30"), j.at("c")};
    };
    if (in.contains("feasible")) {
        for (const auto& j : in["feasible"]) cloud.push_back(to_e(j));
    }
    if (in.contains("best")) overlays.push_back({to_e(in["best"]), "best volume", "#cc0000"});
    if (in.contains("params")) {
        // single bound result
        EllipsoidBound e{in["params"].at("p1"), in["params"].at("p2"), in["params"].at("p3"),
                         in.at("x30"), in.at("c")};
        overlays.push_back({e, in.value("candidate", "bound"), "#0044cc"});
    }
    if (cloud.empty() && overlays.empty()) {
        std::cerr << "results file contains no ellipsoids: the union is empty\n";
        return kExitInfeasible;
    }
    maybe_write_svg(svg_out, cloud, overlays, plane);
    return 0;
}

int run_verify(const std::string& system_spec, const std::vector<std::string>& params,
               const std::vector<std::string>& p_flags, const std::string& x30_flag,
               const std::string& c_flag, int starts, double T, double rel_tol, double h,
               std::uint64_t seed, const std::string& json_out) {
    DynSystem sys = load_system(system_spec, params);
    if (p_flags.size() != 3) throw CLI::ValidationError("verify needs --p P1 P2 P3");
    EllipsoidBound e;
    e.p1 = to_double(parse_number(p_flags[0]));
    e.p2 = to_double(parse_number(p_flags[1]));
    e.p3 = to_double(parse_number(p_flags[2]));
    e.x30 = x30_flag.empty() ? 0.0 : to_double(parse_number(x30_flag));
    e.c = to_double(parse_number(c_flag));

    InvarianceReport rep = check_positive_invariance(e, sys, starts, T, rel_tol, h, seed);
    json out;
    out["invariant"] = rep.invariant;
    out["max_v_excess"] = rep.max_v_excess;
    out["blow_up"] = rep.blow_up;
    if (rep.blow_up) out["blow_up_time"] = rep.blow_up_time;
    out["n_starts"] = starts;
    out["horizon"] = T;
    out["rel_tol"] = rel_tol;
    emit_json(out, json_out);
    return rep.invariant ? 0 : kExitInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polybound: invariant-set bounds for polynomial dynamical systems"};
    app.require_subcommand(1);

    std::string system_spec = "lorenz";
    std::vector<std::string> param_flags;
    std::string json_out, svg_out, plane = "x1x3";
    std::uint64_t seed = 1;

    auto add_common = [&](CLI::App* sub, bool with_system) {
        if (with_system) {
            sub->add_option("--system", system_spec,
                            "system file, or builtin 'lorenz' / 'lorenz-symbolic'");
            sub->add_option("--param", param_flags, "ground a system parameter, name=value");
        }
        sub->add_option("--json", json_out, "also write the JSON result to this file");
    };

    // qe
    std::string formula_file;
    auto* qe_cmd = app.add_subcommand("qe", "eliminate quantifiers from a formula file");
    qe_cmd->add_option("formula", formula_file, "formula file")->required();
    add_common(qe_cmd, false);

    // bound
    std::string candidate = "sphere-fixed", method = "auto", x30_flag, tol_flag;
    std::string c_lo_flag, c_hi_flag, formula_kind = "invariance";
    std::vector<std::string> p_flags;
    bool minimize = false;
    auto* bound_cmd = app.add_subcommand("bound", "compute an invariant level bound");
    add_common(bound_cmd, true);
    bound_cmd->add_option("--candidate", candidate,
                          "sphere-fixed | ellipse-fixed | sphere-center | ellipse-center | custom");
    bound_cmd->add_option("--method", method, "auto | closed-form | biquadratic | bisection");
    bound_cmd->add_option("--p", p_flags, "ellipsoid weights p1 p2 p3 (custom candidate)")
        ->expected(3);
    bound_cmd->add_option("--x30", x30_flag, "ellipsoid center on the x3 axis");
    bound_cmd->add_flag("--minimize", minimize, "minimize the bound over the center");
    bound_cmd->add_option("--tol", tol_flag, "bisection tolerance (default 1/1000)");
    bound_cmd->add_option("--c-lo", c_lo_flag, "bisection bracket lower end (default 0)");
    bound_cmd->add_option("--c-hi", c_hi_flag, "bisection bracket upper end (default 1000)");
    bound_cmd->add_option("--formula", formula_kind, "invariance | convergence");
    bound_cmd->add_option("--svg", svg_out, "write an SVG projection plot");
    bound_cmd->add_option("--plane", plane, "projection plane: x1x2 | x1x3 | x2x3");

    // montecarlo
    int mc_n = 500;
    bool gap_mode = false;
    double gap = 0.1, p_lo = 0.1, p_hi = 5.0, x30_lo = 10.0, x30_hi = 80.0;
    std::string mc_c_hi, mc_tol;
    auto* mc_cmd = app.add_subcommand("montecarlo", "random search over ellipsoid shapes");
    add_common(mc_cmd, true);
    mc_cmd->add_option("--n", mc_n, "number of samples (default 500)");
    mc_cmd->add_option("--seed", seed, "random seed (default 1)");
    mc_cmd->add_flag("--gap-mode", gap_mode, "sample p2 != p3 with a minimum gap");
    mc_cmd->add_option("--gap", gap, "minimum |p2-p3| in gap mode (default 0.1)");
    mc_cmd->add_option("--p-lo", p_lo, "lower end of the weight range");
    mc_cmd->add_option("--p-hi", p_hi, "upper end of the weight range");
    mc_cmd->add_option("--x30-lo", x30_lo, "lower end of the center range");
    mc_cmd->add_option("--x30-hi", x30_hi, "upper end of the center range");
    mc_cmd->add_option("--c-hi", mc_c_hi, "feasibility cap on c (default 1000)");
    mc_cmd->add_option("--tol", mc_tol, "per-sample bisection tolerance (default 1/16)");
    mc_cmd->add_option("--svg", svg_out, "write an SVG of the union of feasible ellipsoids");
    mc_cmd->add_option("--plane", plane, "projection plane: x1x2 | x1x3 | x2x3");

    // plot
    std::string results_file;
    auto* plot_cmd = app.add_subcommand("plot", "render a results JSON file as SVG");
    plot_cmd->add_option("results", results_file, "JSON produced by bound/montecarlo")->required();
    plot_cmd->add_option("--plane", plane, "projection plane: x1x2 | x1x3 | x2x3");
    plot_cmd->add_option("--svg", svg_out, "output SVG path")->required();

    // verify
    std::vector<std::string> v_p_flags;
    std::string v_x30, v_c;
    int starts = 100;
    double T = 50, rel_tol = 1e-4, step_h = 1e-3;
    auto* verify_cmd = app.add_subcommand("verify", "numeric positive-invariance check");
    add_common(verify_cmd, true);
    verify_cmd->add_option("--p", v_p_flags, "ellipsoid weights p1 p2 p3")->expected(3)->required();
    verify_cmd->add_option("--x30", v_x30, "ellipsoid center on the x3 axis");
    verify_cmd->add_option("--c", v_c, "level value c")->required();
    verify_cmd->add_option("--starts", starts, "number of boundary starts (default 100)");
    verify_cmd->add_option("--horizon", T, "integration horizon (default 50)");
    verify_cmd->add_option("--rel-tol", rel_tol, "allowed relative level excess (default 1e-4)");
    verify_cmd->add_option("--step", step_h, "integration step (default 1e-3)");
    verify_cmd->add_option("--seed", seed, "random seed (default 1)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (qe_cmd->parsed()) return cmd_qe(formula_file, json_out);
        if (bound_cmd->parsed()) {
            return run_bound(system_spec, param_flags, candidate, method, p_flags, x30_flag,
                             minimize, tol_flag, c_lo_flag, c_hi_flag, formula_kind, json_out,
                             svg_out, plane);
        }
        if (mc_cmd->parsed()) {
            return run_montecarlo(system_spec, param_flags, mc_n, seed, gap_mode, gap, p_lo, p_hi,
                                  x30_lo, x30_hi, mc_c_hi, mc_tol, json_out, svg_out, plane);
        }
        if (plot_cmd->parsed()) return run_plot(results_file, plane, svg_out);
        if (verify_cmd->parsed()) {
            return run_verify(system_spec, param_flags, v_p_flags, v_x30, v_c, starts, T, rel_tol,
                              step_h, seed, json_out);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    }
    return 0;
}
