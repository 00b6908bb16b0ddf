#include "polybound/dynsystem.hpp"

#include "polybound/formula.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace polybound {

void DynSystem::validate() const {
    if (state_vars.size() != rhs.size()) {
        throw std::invalid_argument("DynSystem: state/rhs dimension mismatch");
    }
    std::set<VarId> allowed(state_vars.begin(), state_vars.end());
    allowed.insert(params.begin(), params.end());
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        for (VarId v : rhs[i].variables()) {
            if (!allowed.count(v)) {
                throw std::invalid_argument("DynSystem: rhs of " + var_name(state_vars[i]) +
                                            " uses unknown variable " + var_name(v));
            }
        }
    }
}

DynSystem DynSystem::with_param(VarId p, const Rational& value) const {
    DynSystem out = *this;
    for (auto& f : out.rhs) f = f.substitute(p, value);
    return out;
}

DynSystem lorenz_symbolic() {
    VarId x1 = var("x1"), x2 = var("x2"), x3 = var("x3");
    VarId s = var("s"), r = var("r"), b = var("b");
    auto P = [](VarId v) { return Polynomial::variable(v); };
    DynSystem sys;
    sys.state_vars = {x1, x2, x3};
    sys.params = {s, r, b};
    sys.rhs = {
        P(s) * (P(x2) - P(x1)),
        P(r) * P(x1) - P(x2) - P(x1) * P(x3),
        P(x1) * P(x2) - P(b) * P(x3),
    };
    return sys;
}

DynSystem lorenz_classic() {
    DynSystem sys = lorenz_symbolic();
    sys = sys.with_param(var("s"), Rational(10))
              .with_param(var("r"), Rational(28))
              .with_param(var("b"), Rational(8, 3));
    sys.params.clear();
    return sys;
}

Polynomial lie_derivative(const Polynomial& V, const DynSystem& sys) {
    std::set<VarId> allowed(sys.state_vars.begin(), sys.state_vars.end());
    allowed.insert(sys.params.begin(), sys.params.end());
    for (VarId v : V.variables()) {
        if (!allowed.count(v)) {
            throw std::invalid_argument("lie_derivative: unknown variable " + var_name(v) +
                                        " in candidate function");
        }
    }
    Polynomial out;
    for (std::size_t i = 0; i < sys.state_vars.size(); ++i) {
        out = out + V.derivative(sys.state_vars[i]) * sys.rhs[i];
    }
    return out;
}

DynSystem parse_system(const std::string& text) {
    DynSystem sys;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string keyword;
        if (!(ls >> keyword) || keyword[0] == '#') continue;
        if (keyword == "vars" || keyword == "params") {
            std::string name;
            while (ls >> name) {
                (keyword == "vars" ? sys.state_vars : sys.params).push_back(var(name));
            }
        } else if (keyword == "ode") {
            std::string name, eq;
            if (!(ls >> name >> eq) || eq != "=") {
                throw std::invalid_argument("system file line " + std::to_string(lineno) +
                                            ": expected 'ode <var> = <polynomial>'");
            }
            VarId v = VarTable::instance().find(name);
            auto it = std::find(sys.state_vars.begin(), sys.state_vars.end(), v);
            if (!v.valid() || it == sys.state_vars.end()) {
                throw std::invalid_argument("system file line " + std::to_string(lineno) +
                                            ": ode for undeclared state variable " + name);
            }
            std::string rest;
            std::getline(ls, rest);
            std::size_t idx = static_cast<std::size_t>(it - sys.state_vars.begin());
            if (sys.rhs.size() < sys.state_vars.size()) sys.rhs.resize(sys.state_vars.size());
            sys.rhs[idx] = parse_polynomial(rest);
        } else {
            throw std::invalid_argument("system file line " + std::to_string(lineno) +
                                        ": unknown keyword '" + keyword + "'");
        }
    }
    sys.validate();
    return sys;
}

DynSystem load_system_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open system file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_system(buf.str());
}

std::string system_to_string(const DynSystem& sys) {
    std::string out = "vars";
    for (VarId v : sys.state_vars) out += " " + var_name(v);
    out += "\n";
    if (!sys.params.empty()) {
        out += "params";
        for (VarId v : sys.params) out += " " + var_name(v);
        out += "\n";
    }
    for (std::size_t i = 0; i < sys.rhs.size(); ++i) {
        out += "ode " + var_name(sys.state_vars[i]) + " = " + sys.rhs[i].to_string() + "\n";
    }
    return out;
}

}  // namespace polybound
