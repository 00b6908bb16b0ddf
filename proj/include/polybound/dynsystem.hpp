#ifndef POLYBOUND_DYNSYSTEM_HPP
#define POLYBOUND_DYNSYSTEM_HPP

#include "polybound/poly.hpp"

#include <string>
#include <vector>

namespace polybound {

// Autonomous polynomial vector field xdot = f(x) with named state variables
// and free parameters. Right-hand sides use only state vars and params.
struct DynSystem {
    std::vector<VarId> state_vars;
    std::vector<VarId> params;
    std::vector<Polynomial> rhs;  // one per state variable

    void validate() const;  // throws std::invalid_argument on inconsistency

    // Ground a parameter in every right-hand side.
    DynSystem with_param(VarId p, const Rational& value) const;
};

// The Lorenz field xdot1 = s(x2-x1), xdot2 = r x1 - x2 - x1 x3,
// xdot3 = x1 x2 - b x3 with symbolic parameters s, r, b.
DynSystem lorenz_symbolic();

// Lorenz with s = 10, r = 28, b = 8/3.
DynSystem lorenz_classic();

// Time derivative of V along the flow: sum_i dV/dx_i * f_i. Throws
// std::invalid_argument naming any variable of V that is neither a state
// variable nor a parameter of the system.
Polynomial lie_derivative(const Polynomial& V, const DynSystem& sys);

// Plain-text system description:
//   vars x1 x2 x3
//   params s r b
//   ode x1 = s*(x2-x1)
//   ...
// Blank lines and lines starting with '#' are ignored.
DynSystem parse_system(const std::string& text);

DynSystem load_system_file(const std::string& path);

std::string system_to_string(const DynSystem& sys);

}  // namespace polybound

#endif
