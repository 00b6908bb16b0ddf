#include "polybound/numeric.hpp"

#include "polybound/rational.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace polybound {

namespace {

std::vector<double> eval_field(const DynSystem& sys, const std::vector<double>& x) {
    std::map<VarId, double> asg;
    for (std::size_t i = 0; i < sys.state_vars.size(); ++i) asg[sys.state_vars[i]] = x[i];
    std::vector<double> out(sys.rhs.size());
    for (std::size_t i = 0; i < sys.rhs.size(); ++i) out[i] = sys.rhs[i].evaluate_double(asg);
    return out;
}

bool all_finite(const std::vector<double>& x) {
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace

Trajectory integrate_rk4(const DynSystem& sys, const std::vector<double>& x0, double h, double T) {
    if (!sys.params.empty()) {
        throw std::invalid_argument("integrate_rk4: system still has free parameters");
    }
    if (x0.size() != sys.state_vars.size()) {
        throw std::invalid_argument("integrate_rk4: initial state dimension mismatch");
    }
    if (!(h > 0)) throw std::invalid_argument("integrate_rk4: step size must be positive");
    if (h > T) throw std::invalid_argument("integrate_rk4: step size exceeds horizon");

    Trajectory traj;
    traj.h = h;
    std::size_t n = x0.size();
    std::vector<double> x = x0;
    auto steps = static_cast<long long>(std::ceil(T / h - 1e-12));
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    traj.times.push_back(0);
    traj.states.push_back(x);
    for (long long s = 0; s < steps; ++s) {
        double t = static_cast<double>(s) * h;
        double step = std::min(h, T - t);
        std::vector<double> k1 = eval_field(sys, x);
        std::vector<double> tmp(n);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * step * k1[i];
        std::vector<double> k2 = eval_field(sys, tmp);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * step * k2[i];
        std::vector<double> k3 = eval_field(sys, tmp);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + step * k3[i];
        std::vector<double> k4 = eval_field(sys, tmp);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += step / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        }
        if (!all_finite(x)) {
            std::ostringstream msg;
            msg << "integrate_rk4: state left floating range at t = " << t + step;
            throw std::runtime_error(msg.str());
        }
        traj.times.push_back(t + step);
        traj.states.push_back(x);
    }
    return traj;
}

InvarianceReport check_positive_invariance(const EllipsoidBound& e, const DynSystem& sys,
                                           int n_starts, double T, double rel_tol, double h,
                                           std::uint64_t seed) {
    if (sys.state_vars.size() != 3) {
        throw std::invalid_argument("check_positive_invariance: expects a 3-state system");
    }
    InvarianceReport rep;
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double c2 = e.c * e.c;
    for (int s = 0; s < n_starts; ++s) {
        // Gaussian direction, normalized, then scaled so that V(x0) = c^2.
        double d1, d2, d3, norm;
        do {
            d1 = gauss(gen);
            d2 = gauss(gen);
            d3 = gauss(gen);
            norm = std::sqrt(d1 * d1 + d2 * d2 + d3 * d3);
        } while (norm < 1e-12);
        d1 /= norm;
        d2 /= norm;
        d3 /= norm;
        double vdir = e.p1 * d1 * d1 + e.p2 * d2 * d2 + e.p3 * d3 * d3;
        double scale = e.c / std::sqrt(vdir);
        std::vector<double> x0 = {scale * d1, scale * d2, e.x30 + scale * d3};
        Trajectory traj;
        try {
            traj = integrate_rk4(sys, x0, h, T);
        } catch (const std::runtime_error& ex) {
            rep.invariant = false;
            rep.blow_up = true;
            std::string what = ex.what();
            auto pos = what.rfind("t = ");
            if (pos != std::string::npos) rep.blow_up_time = std::stod(what.substr(pos + 4));
            return rep;
        }
        for (const auto& x : traj.states) {
            double excess = e.value(x[0], x[1], x[2]) / c2 - 1.0;
            rep.max_v_excess = std::max(rep.max_v_excess, excess);
        }
    }
    rep.invariant = rep.max_v_excess <= rel_tol;
    return rep;
}

FalsificationReport sample_falsify(const FormulaRef& matrix, const std::vector<VarId>& vars,
                                   const std::vector<std::pair<double, double>>& box, int n,
                                   std::uint64_t seed) {
    if (!matrix->is_quantifier_free()) {
        throw std::invalid_argument("sample_falsify: matrix must be quantifier-free");
    }
    if (vars.size() != box.size()) {
        throw std::invalid_argument("sample_falsify: one box interval per variable required");
    }
    FalsificationReport rep;
    std::mt19937_64 gen(seed);
    auto uniform01 = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    for (int s = 0; s < n; ++s) {
        std::vector<double> pt(vars.size());
        // Every fourth sample snaps one coordinate to a box face; sign
        // boundaries of the matrix often sit on extreme coordinates.
        int snap = (s % 4 == 3) ? static_cast<int>(gen() % vars.size()) : -1;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            auto [lo, hi] = box[i];
            double u = uniform01();
            pt[i] = lo + u * (hi - lo);
            if (static_cast<int>(i) == snap) pt[i] = (gen() & 1) ? hi : lo;
        }
        std::map<VarId, Rational> exact;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            exact[vars[i]] = dyadic_from_double(pt[i], 40);
            pt[i] = to_double(exact[vars[i]]);
        }
        ++rep.samples_used;
        if (!eval_ground(matrix, exact)) {
            rep.found = true;
            rep.witness = pt;
            return rep;
        }
    }
    return rep;
}

}  // namespace polybound
