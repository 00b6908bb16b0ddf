#ifndef POLYBOUND_NUMERIC_HPP
#define POLYBOUND_NUMERIC_HPP

#include "polybound/bounds.hpp"
#include "polybound/dynsystem.hpp"
#include "polybound/formula.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace polybound {

// Fixed-step numerical solution of xdot = f(x).
struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;  // states[i] at times[i]
    double h = 0;
};

struct FalsificationReport {
    bool found = false;
    std::optional<std::vector<double>> witness;  // present iff found
    int samples_used = 0;
};

struct InvarianceReport {
    bool invariant = true;
    double max_v_excess = 0;  // max over samples of V(x(t))/c^2 - 1
    bool blow_up = false;     // a trajectory left floating range
    double blow_up_time = 0;  // valid when blow_up
};

// Classic fixed-step fourth-order Runge-Kutta. The system must be ground in
// its parameters. Throws std::invalid_argument when h <= 0 or h > T and
// std::runtime_error naming the blow-up time when the state leaves floating
// range.
Trajectory integrate_rk4(const DynSystem& sys, const std::vector<double>& x0, double h, double T);

// Integrates n_starts trajectories from the ellipsoid boundary (uniform
// directions via normalized Gaussians, scaled to V = c^2) and reports whether
// V(x(t)) <= c^2 (1 + rel_tol) held throughout. Blow-up yields a
// non-invariant report with the diagnostic fields set.
InvarianceReport check_positive_invariance(const EllipsoidBound& e, const DynSystem& sys,
                                           int n_starts = 100, double T = 50,
                                           double rel_tol = 1e-4, double h = 1e-3,
                                           std::uint64_t seed = 1);

// Searches n uniform samples in the box (plus boundary-biased samples on the
// box faces) for a point where the quantifier-free matrix is false under the
// given variable order. A found witness refutes the universal closure of the
// matrix over the box.
FalsificationReport sample_falsify(const FormulaRef& matrix, const std::vector<VarId>& vars,
                                   const std::vector<std::pair<double, double>>& box, int n,
                                   std::uint64_t seed);

}  // namespace polybound

#endif
