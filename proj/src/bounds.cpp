#include "polybound/bounds.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace polybound {

double EllipsoidBound::value(double x1, double x2, double x3) const {
    return p1 * x1 * x1 + p2 * x2 * x2 + p3 * (x3 - x30) * (x3 - x30);
}

double RadicalValue::to_double() const {
    return polybound::to_double(q) * std::sqrt(polybound::to_double(d));
}

namespace {

// Candidate parameters (e.g. a free center coordinate) are constants along the
// flow; admit them as extra system parameters for the Lie derivative.
DynSystem augment_with_candidate_params(const DynSystem& sys, const Polynomial& V) {
    DynSystem out = sys;
    std::set<VarId> known(sys.state_vars.begin(), sys.state_vars.end());
    known.insert(sys.params.begin(), sys.params.end());
    for (VarId v : V.variables()) {
        if (!known.count(v)) out.params.push_back(v);
    }
    return out;
}

FormulaRef positivity_conditions(const DynSystem& sys, VarId level_var) {
    std::vector<FormulaRef> conds;
    for (VarId p : sys.params) conds.push_back(mk_atom(Polynomial::variable(p), Rel::Gt));
    conds.push_back(mk_atom(Polynomial::variable(level_var), Rel::Gt));
    return mk_and(std::move(conds));
}

FormulaRef close_over_states(const DynSystem& sys, FormulaRef body) {
    for (auto it = sys.state_vars.rbegin(); it != sys.state_vars.rend(); ++it) {
        body = mk_forall(*it, std::move(body));
    }
    return body;
}

}  // namespace

FormulaRef build_invariance_formula(const DynSystem& sys, const LyapunovCandidate& cand) {
    DynSystem aug = augment_with_candidate_params(sys, cand.V);
    Polynomial vdot = lie_derivative(cand.V, aug);
    Polynomial level = cand.V - Polynomial::variable(cand.level_var).pow(2);
    FormulaRef body = mk_and(positivity_conditions(sys, cand.level_var),
                             mk_or(mk_not(mk_atom(level, Rel::Gt)), mk_atom(vdot, Rel::Lt)));
    return close_over_states(sys, std::move(body));
}

FormulaRef build_convergence_formula(const DynSystem& sys, const LyapunovCandidate& cand,
                                     VarId alpha_var) {
    DynSystem aug = augment_with_candidate_params(sys, cand.V);
    Polynomial vdot = lie_derivative(cand.V, aug);
    Polynomial level = cand.V - Polynomial::variable(cand.level_var).pow(2);
    Polynomial decay = vdot + Polynomial::variable(alpha_var) * level;
    FormulaRef body = mk_and({mk_atom(Polynomial::variable(alpha_var), Rel::Gt),
                              positivity_conditions(sys, cand.level_var),
                              mk_atom(decay, Rel::Le)});
    return mk_exists(alpha_var, close_over_states(sys, std::move(body)));
}

LyapunovCandidate make_ellipsoid_candidate(const Rational& p1, const Rational& p2,
                                           const Rational& p3, const Rational& x30,
                                           VarId level_var) {
    Polynomial x1 = Polynomial::variable(var("x1"));
    Polynomial x2 = Polynomial::variable(var("x2"));
    Polynomial x3 = Polynomial::variable(var("x3"));
    return {p1 * x1 * x1 + p2 * x2 * x2 + p3 * (x3 - Polynomial(x30)).pow(2), level_var};
}

namespace {

void require_positive(const Rational& v, const char* name) {
    if (v <= 0) {
        throw std::invalid_argument(std::string("closed-form bound: parameter ") + name +
                                    " must be positive");
    }
}

}  // namespace

RadicalValue closed_form_sphere_bound(const Rational& s, const Rational& r, const Rational& b) {
    require_positive(s, "s");
    require_positive(r, "r");
    require_positive(b, "b");
    if (s >= 1 && b >= 2) return {(s + r) * b / 2, Rational(1) / (b - 1)};
    if (2 * s > b && b < 2) return {r + s, Rational(1)};
    return {(s + r) * b / 2, Rational(1) / (s * (b - s))};  // 2s <= b and s < 1
}

RadicalValue closed_form_ellipse_bound(const Rational& s, const Rational& r, const Rational& b) {
    require_positive(s, "s");
    require_positive(r, "r");
    require_positive(b, "b");
    if (s >= 1 && b >= 2) return {b * r, s / (b - 1)};
    if (2 * s > b && b < 2) return {2 * r, s};
    return {b * r, Rational(1) / (b - s)};  // 2s <= b and s < 1
}

Biquadratic biquadratic_sphere(VarId x30_var) {
    Polynomial x = Polynomial::variable(x30_var);
    Biquadratic bq;
    bq.x30_var = x30_var;
    bq.a0 = Rational(4096) * x.pow(4);
    bq.a1 = Rational(384) * x.pow(2) * (Rational(3) * x.pow(2) - Rational(228) * x + 4762);
    bq.validity_factor = x.pow(2) - Rational(76) * x + 1404;
    bq.a2 = Rational(9) * bq.validity_factor * (Rational(9) * x.pow(2) - Rational(684) * x + 13436);
    return bq;
}

Biquadratic biquadratic_ellipse(VarId x30_var) {
    Polynomial x = Polynomial::variable(x30_var);
    Biquadratic bq;
    bq.x30_var = x30_var;
    bq.a0 = Rational(3211264) * x.pow(4);
    bq.a1 = Rational(10752) * x.pow(2) * (Rational(3) * x.pow(2) - Rational(336) * x + 10612);
    bq.validity_factor = x.pow(2) - Rational(112) * x + 3024;
    bq.a2 =
        Rational(9) * bq.validity_factor * (Rational(9) * x.pow(2) - Rational(1008) * x + 29456);
    return bq;
}

std::optional<double> Biquadratic::solve_largest_c(const Rational& x30) const {
    std::map<VarId, Rational> at{{x30_var, x30}};
    if (validity_factor.evaluate(at) >= 0) return std::nullopt;
    Rational A2 = a2.evaluate(at), A1 = a1.evaluate(at), A0 = a0.evaluate(at);
    double best = -1;
    if (A2 == 0) {
        if (A1 == 0) return std::nullopt;
        best = to_double(-A0 / A1);
    } else {
        Rational disc = A1 * A1 - 4 * A2 * A0;
        if (disc < 0) return std::nullopt;
        double sq = std::sqrt(to_double(disc));
        double r1 = (-to_double(A1) + sq) / (2 * to_double(A2));
        double r2 = (-to_double(A1) - sq) / (2 * to_double(A2));
        best = std::max(r1, r2);
    }
    if (best < 0) return std::nullopt;
    return std::sqrt(best);
}

QuadraticRootPair Biquadratic::validity_interval() const {
    auto e = validity_factor.univariate_coeffs(x30_var);
    if (e.size() != 3 || !e[2].is_constant() || !e[1].is_constant() || !e[0].is_constant()) {
        throw std::logic_error("validity factor is not a univariate quadratic");
    }
    Rational lead = e[2].constant_value();
    Rational center = -e[1].constant_value() / (2 * lead);
    Rational rad_sq = center * center - e[0].constant_value() / lead;
    return {center, RadicalValue{Rational(1), rad_sq}};
}

CenterMinimum minimize_center(const std::function<std::optional<double>(double)>& bound_fn,
                              double lo, double hi, double tol) {
    if (!(lo < hi)) throw std::invalid_argument("minimize_center: empty bracket");
    constexpr double inf = std::numeric_limits<double>::infinity();
    auto F = [&](double x) {
        auto v = bound_fn(x);
        return v ? *v : inf;
    };
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = F(x1), f2 = F(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = F(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = F(x2);
        }
    }
    double xm = (a + b) / 2;
    double fm = F(xm);
    if (f1 < fm) {
        xm = x1;
        fm = f1;
    }
    if (f2 < fm) {
        xm = x2;
        fm = f2;
    }
    if (!std::isfinite(fm)) {
        throw std::invalid_argument("minimize_center: bound undefined on the whole bracket");
    }
    return {xm, fm};
}

namespace {

// Fixed positive alpha grid for the convergence fallback, ordered so that
// typically-successful magnitudes come first.
const std::vector<Rational>& alpha_probes() {
    static const std::vector<Rational> probes = {
        Rational(1),      Rational(2),      Rational(1, 2),  Rational(4),
        Rational(1, 4),   Rational(8),      Rational(1, 8),  Rational(1, 16),
        Rational(1, 32),  Rational(1, 64),  Rational(3),     Rational(5),
        Rational(1, 128), Rational(1, 256),
    };
    return probes;
}

}  // namespace

bool bound_feasible(const DynSystem& sys, const LyapunovCandidate& cand, const Rational& c_value,
                    BoundFormula variant, const QeOptions& opts) {
    if (variant == BoundFormula::Invariance) {
        FormulaRef f = substitute(build_invariance_formula(sys, cand), cand.level_var, c_value);
        return decide(f, opts);
    }
    VarId alpha = VarTable::instance().fresh("alpha");
    FormulaRef f = build_convergence_formula(sys, cand, alpha);
    try {
        return decide(substitute(f, cand.level_var, c_value), opts);
    } catch (const DegreeTooHighError&) {
        // Probe a fixed alpha grid: any witness proves the existential; a
        // miss reports infeasible, which only moves the threshold upward.
        FormulaRef body = f->kind() == FormulaKind::Exists ? f->child() : f;
        body = substitute(body, cand.level_var, c_value);
        for (const Rational& a : alpha_probes()) {
            if (decide(substitute(body, alpha, a), opts)) return true;
        }
        return false;
    }
}

BoundResult bisection_bound(const DynSystem& sys, const LyapunovCandidate& cand,
                            const BisectionOptions& opts) {
    auto t0 = std::chrono::steady_clock::now();
    if (!(opts.c_lo < opts.c_hi)) throw std::invalid_argument("bisection_bound: empty bracket");
    if (!bound_feasible(sys, cand, opts.c_hi, opts.variant, opts.qe)) {
        throw std::invalid_argument(
            "bisection_bound: formula infeasible at the upper bracket end; raise c_hi (or the "
            "family has no bound)");
    }
    if (bound_feasible(sys, cand, opts.c_lo, opts.variant, opts.qe)) {
        throw std::invalid_argument(
            "bisection_bound: formula already feasible at the lower bracket end; lower c_lo");
    }
    Rational lo = opts.c_lo, hi = opts.c_hi;
    while (hi - lo > opts.tol) {
        Rational mid = (lo + hi) / 2;
        if (bound_feasible(sys, cand, mid, opts.variant, opts.qe)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    BoundResult res;
    res.feasible = true;
    res.c = to_double(hi);
    res.certificate = Certificate::Bisection;
    res.wall_time_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
    return res;
}

double ellipsoid_volume(const EllipsoidBound& e) {
    return (4.0 * std::numbers::pi / 3.0) * e.c * e.c * e.c / std::sqrt(e.p1 * e.p2 * e.p3);
}

MonteCarloResult monte_carlo_search(const DynSystem& sys, const MonteCarloOptions& opts) {
    std::mt19937_64 gen(opts.seed);
    // Portable uniform doubles in [0,1): top 53 bits of the generator output.
    auto uniform = [&](double lo, double hi) {
        double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    };
    MonteCarloResult result;
    VarId c = var("c");
    double best_vol = std::numeric_limits<double>::infinity();
    for (int i = 0; i < opts.n_samples; ++i) {
        double p1 = uniform(opts.p_lo, opts.p_hi);
        double p2 = uniform(opts.p_lo, opts.p_hi);
        double p3;
        if (opts.constrain_p2_eq_p3) {
            p3 = p2;
        } else {
            p3 = uniform(opts.p_lo, opts.p_hi);
            while (opts.min_p_gap > 0 && std::abs(p2 - p3) < opts.min_p_gap) {
                p3 = uniform(opts.p_lo, opts.p_hi);
            }
        }
        double x30 = uniform(opts.x30_lo, opts.x30_hi);
        // 8 fractional bits keep the exact-arithmetic probes cheap while the
        // 1/256 grid is far finer than the volume tolerance cares about.
        Rational p1q = dyadic_from_double(p1, 8), p2q = dyadic_from_double(p2, 8);
        Rational p3q = opts.constrain_p2_eq_p3 ? p2q : dyadic_from_double(p3, 8);
        Rational x30q = dyadic_from_double(x30, 8);
        LyapunovCandidate cand = make_ellipsoid_candidate(p1q, p2q, p3q, x30q, c);
        ++result.samples_used;
        if (!bound_feasible(sys, cand, opts.c_hi, BoundFormula::Invariance, opts.qe)) continue;
        BisectionOptions bopts;
        bopts.c_lo = 0;
        bopts.c_hi = opts.c_hi;
        bopts.tol = opts.tol;
        bopts.qe = opts.qe;
        BoundResult br = bisection_bound(sys, cand, bopts);
        EllipsoidBound e{to_double(p1q), to_double(p2q), to_double(p3q), to_double(x30q), br.c};
        result.feasible.push_back(e);
        double vol = ellipsoid_volume(e);
        if (vol < best_vol) {
            best_vol = vol;
            result.best = e;
        }
    }
    return result;
}

bool union_contains(const std::vector<EllipsoidBound>& es, const std::array<double, 3>& pt) {
    return std::any_of(es.begin(), es.end(),
                       [&](const EllipsoidBound& e) { return e.contains(pt[0], pt[1], pt[2]); });
}

namespace {

struct Ellipse2D {
    double cu = 0, cw = 0;  // center
    double a = 0, b = 0;    // semi-axes
    bool strictly_inside(double u, double w) const {
        double du = (u - cu) / a, dw = (w - cw) / b;
        return du * du + dw * dw < 1.0 - 1e-9;
    }
};

Ellipse2D project(const EllipsoidBound& e, int axis_u, int axis_w) {
    auto semi = [&](int axis) {
        double p = axis == 0 ? e.p1 : axis == 1 ? e.p2 : e.p3;
        return e.c / std::sqrt(p);
    };
    Ellipse2D out;
    out.a = semi(axis_u);
    out.b = semi(axis_w);
    out.cu = axis_u == 2 ? e.x30 : 0.0;
    out.cw = axis_w == 2 ? e.x30 : 0.0;
    return out;
}

}  // namespace

std::vector<Polyline> union_projection_outline(const std::vector<EllipsoidBound>& es,
                                               const std::string& plane, int resolution) {
    if (es.empty()) throw std::invalid_argument("union_projection_outline: empty ellipsoid list");
    if (resolution < 8) throw std::invalid_argument("union_projection_outline: resolution too low");
    int axis_u, axis_w;
    if (plane == "x1x2") {
        axis_u = 0;
        axis_w = 1;
    } else if (plane == "x1x3") {
        axis_u = 0;
        axis_w = 2;
    } else if (plane == "x2x3") {
        axis_u = 1;
        axis_w = 2;
    } else {
        throw std::invalid_argument("union_projection_outline: plane must be x1x2, x1x3 or x2x3");
    }
    std::vector<Ellipse2D> ellipses;
    ellipses.reserve(es.size());
    for (const auto& e : es) ellipses.push_back(project(e, axis_u, axis_w));

    std::vector<Polyline> out;
    const double tau = 2.0 * std::numbers::pi;
    for (std::size_t k = 0; k < ellipses.size(); ++k) {
        const Ellipse2D& el = ellipses[k];
        std::vector<bool> keep(static_cast<std::size_t>(resolution));
        std::vector<std::array<double, 2>> pts(static_cast<std::size_t>(resolution));
        for (int i = 0; i < resolution; ++i) {
            double th = tau * i / resolution;
            double u = el.cu + el.a * std::cos(th);
            double w = el.cw + el.b * std::sin(th);
            pts[static_cast<std::size_t>(i)] = {u, w};
            bool covered = false;
            for (std::size_t m = 0; m < ellipses.size() && !covered; ++m) {
                if (m != k && ellipses[m].strictly_inside(u, w)) covered = true;
            }
            keep[static_cast<std::size_t>(i)] = !covered;
        }
        if (std::all_of(keep.begin(), keep.end(), [](bool b) { return b; })) {
            Polyline closed;
            closed.points = pts;
            closed.points.push_back(pts.front());
            out.push_back(std::move(closed));
            continue;
        }
        // Emit maximal kept arcs, stitched across the wrap-around point.
        int n = resolution;
        int start = 0;
        while (start < n && keep[static_cast<std::size_t>(start)]) ++start;
        if (start == n) continue;  // unreachable: handled above
        Polyline current;
        for (int off = 1; off <= n; ++off) {
            int i = (start + off) % n;
            if (keep[static_cast<std::size_t>(i)]) {
                current.points.push_back(pts[static_cast<std::size_t>(i)]);
            } else if (!current.points.empty()) {
                out.push_back(std::move(current));
                current = {};
            }
        }
        if (!current.points.empty()) out.push_back(std::move(current));
    }
    return out;
}

}  // namespace polybound
