#include "polybound/vartable.hpp"

#include <stdexcept>

namespace polybound {

VarTable& VarTable::instance() {
    static VarTable table;
    return table;
}

VarId VarTable::intern(const std::string& name) {
    VarId existing = find(name);
    if (existing.valid()) return existing;
    names_.push_back(name);
    return VarId{static_cast<std::int32_t>(names_.size() - 1)};
}

VarId VarTable::find(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) return VarId{static_cast<std::int32_t>(i)};
    }
    return VarId{};
}

const std::string& VarTable::name(VarId v) const {
    if (!v.valid() || static_cast<std::size_t>(v.index) >= names_.size()) {
        throw std::out_of_range("VarTable::name: invalid VarId");
    }
    return names_[static_cast<std::size_t>(v.index)];
}

VarId VarTable::fresh(const std::string& hint) {
    for (;;) {
        std::string candidate = hint + "$" + std::to_string(fresh_counter_++);
        if (!find(candidate).valid()) return intern(candidate);
    }
}

}  // namespace polybound
