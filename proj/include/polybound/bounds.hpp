#ifndef POLYBOUND_BOUNDS_HPP
#define POLYBOUND_BOUNDS_HPP

#include "polybound/dynsystem.hpp"
#include "polybound/formula.hpp"
#include "polybound/vs.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace polybound {

// Level-set family V(x) <= c^2 of a scalar polynomial candidate function.
struct LyapunovCandidate {
    Polynomial V;
    VarId level_var;  // the symbol c
};

// Axis-aligned ellipsoid p1*x1^2 + p2*x2^2 + p3*(x3-x30)^2 <= c^2.
struct EllipsoidBound {
    double p1 = 1, p2 = 1, p3 = 1;
    double x30 = 0;
    double c = 0;

    double value(double x1, double x2, double x3) const;
    bool contains(double x1, double x2, double x3) const { return value(x1, x2, x3) <= c * c; }
};

// Exact radical number q * sqrt(d) with rational q and d >= 0.
struct RadicalValue {
    Rational q;
    Rational d{1};

    Rational square() const { return q * q * d; }
    double to_double() const;
};

// Both roots of a monic quadratic: center +- radius.
struct QuadraticRootPair {
    Rational center;
    RadicalValue radius;
    double lo() const { return to_double(center) - radius.to_double(); }
    double hi() const { return to_double(center) + radius.to_double(); }
};

// Bound equation a2*c^4 + a1*c^2 + a0 = 0, quadratic in c^2, with exact
// coefficient polynomials in the center variable. The equation certifies a
// bound only where the sign-critical factor of a2 is negative.
struct Biquadratic {
    VarId x30_var;
    Polynomial a0, a1, a2;
    Polynomial validity_factor;  // bound exists iff validity_factor(x30) < 0

    // sqrt of the largest nonnegative real root in c^2 at the given center,
    // or nullopt outside the validity interval / with no real root.
    std::optional<double> solve_largest_c(const Rational& x30) const;

    // Exact roots of the (monic, quadratic) validity factor.
    QuadraticRootPair validity_interval() const;
};

enum class Certificate { ClosedForm, Biquadratic, Bisection };

struct BoundResult {
    bool feasible = true;
    double c = 0;
    Certificate certificate = Certificate::Bisection;
    std::optional<double> x30;
    std::optional<double> volume;
    double wall_time_ms = 0;
};

// forall x: params,c > 0 and (V > c^2 implies Vdot < 0). Free variables are
// the system parameters, the level symbol and any candidate parameters.
FormulaRef build_invariance_formula(const DynSystem& sys, const LyapunovCandidate& cand);

// exists alpha forall x: alpha,params,c > 0 and Vdot <= -alpha*(V - c^2).
FormulaRef build_convergence_formula(const DynSystem& sys, const LyapunovCandidate& cand,
                                     VarId alpha_var);

// V = p1*x1^2 + p2*x2^2 + p3*(x3 - x30)^2 over the standard state variables.
LyapunovCandidate make_ellipsoid_candidate(const Rational& p1, const Rational& p2,
                                           const Rational& p3, const Rational& x30,
                                           VarId level_var);

// Spherical bound around (0,0,r+s) (three-region closed form):
//   (s+r)b/(2*sqrt(b-1))   for s >= 1 and b >= 2
//   r+s                    for 2s > b and b < 2
//   (s+r)b/(2*sqrt(s(b-s)))for 2s <= b and s < 1
// Throws std::invalid_argument on nonpositive inputs.
RadicalValue closed_form_sphere_bound(const Rational& s, const Rational& r, const Rational& b);

// Elliptical bound for V = r*x1^2 + s*x2^2 + s*(x3-2r)^2, same regions:
//   b*r*sqrt(s/(b-1));  2*r*sqrt(s);  b*r/sqrt(b-s).
RadicalValue closed_form_ellipse_bound(const Rational& s, const Rational& r, const Rational& b);

// Variable-center bound equations for the classic parameters s=10, r=28,
// b=8/3 (coefficients are specific to that point).
Biquadratic biquadratic_sphere(VarId x30_var);   // sphere family, V = x1^2+x2^2+(x3-x30)^2
Biquadratic biquadratic_ellipse(VarId x30_var);  // ellipse family, V = 28x1^2+10x2^2+10(x3-x30)^2

struct CenterMinimum {
    double x30 = 0;
    double c = 0;
};

// Golden-section minimum of a center -> bound map over (lo, hi), assuming
// unimodality; undefined probe points (nullopt) are treated as +infinity.
// tol is the absolute bracket tolerance in x30.
CenterMinimum minimize_center(const std::function<std::optional<double>(double)>& bound_fn,
                              double lo, double hi, double tol = 1e-4);

enum class BoundFormula { Invariance, Convergence };

// Exact feasibility of the chosen bound formula at one rational level c.
// The convergence variant falls back to probing a fixed positive grid of
// alpha values when full elimination is out of degree range; that
// underapproximates "exists alpha" and can only overestimate the threshold.
bool bound_feasible(const DynSystem& sys, const LyapunovCandidate& cand, const Rational& c_value,
                    BoundFormula variant = BoundFormula::Invariance, const QeOptions& opts = {});

struct BisectionOptions {
    Rational c_lo, c_hi;
    Rational tol{1, 1000};
    BoundFormula variant = BoundFormula::Invariance;
    QeOptions qe;
};

// Feasibility threshold of c by exact bisection: requires infeasible at c_lo
// and feasible at c_hi (else throws std::invalid_argument advising a wider
// bracket). Returns the feasible upper end of the final bracket.
BoundResult bisection_bound(const DynSystem& sys, const LyapunovCandidate& cand,
                            const BisectionOptions& opts);

// vol = (4*pi/3) * c^3 / sqrt(p1*p2*p3).
double ellipsoid_volume(const EllipsoidBound& e);

struct MonteCarloOptions {
    int n_samples = 500;
    std::uint64_t seed = 1;
    bool constrain_p2_eq_p3 = true;
    double min_p_gap = 0.0;  // enforce |p2-p3| >= gap (unconstrained mode)
    double p_lo = 0.1, p_hi = 5.0;
    double x30_lo = 10.0, x30_hi = 80.0;
    Rational c_hi{1000};
    Rational tol{1, 16};
    QeOptions qe;
};

struct MonteCarloResult {
    std::optional<EllipsoidBound> best;  // volume-minimizing feasible ellipsoid
    std::vector<EllipsoidBound> feasible;  // ordered by sample index
    int samples_used = 0;
};

// Seeded uniform search over (p1,p2,p3,x30); each sample's minimal c comes
// from bisection_bound on the invariance formula. Deterministic per seed.
MonteCarloResult monte_carlo_search(const DynSystem& sys, const MonteCarloOptions& opts);

bool union_contains(const std::vector<EllipsoidBound>& es, const std::array<double, 3>& pt);

struct Polyline {
    std::vector<std::array<double, 2>> points;
};

// Boundary of the union of the ellipsoids projected onto a coordinate plane
// ("x1x2", "x1x3" or "x2x3"), rasterized with `resolution` boundary samples
// per ellipse; arcs interior to another ellipse are removed.
std::vector<Polyline> union_projection_outline(const std::vector<EllipsoidBound>& es,
                                               const std::string& plane, int resolution);

}  // namespace polybound

#endif
