#ifndef POLYBOUND_VARTABLE_HPP
#define POLYBOUND_VARTABLE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace polybound {

// Index into the process-wide variable registry. Comparison follows
// registration order, which is what the graded-lex monomial order ties into.
struct VarId {
    std::int32_t index = -1;

    bool valid() const { return index >= 0; }
    friend bool operator==(VarId a, VarId b) { return a.index == b.index; }
    friend bool operator!=(VarId a, VarId b) { return a.index != b.index; }
    friend bool operator<(VarId a, VarId b) { return a.index < b.index; }
};

// Interned variable names. One registry per process; names are unique and a
// VarId resolves to exactly one name for the lifetime of the program.
class VarTable {
public:
    static VarTable& instance();

    // Returns the existing id for `name` or registers a fresh one.
    VarId intern(const std::string& name);

    // Lookup without registering; invalid VarId if unknown.
    VarId find(const std::string& name) const;

    const std::string& name(VarId v) const;

    // A variable guaranteed not to collide with any user-visible name.
    VarId fresh(const std::string& hint);

    std::size_t size() const { return names_.size(); }

private:
    VarTable() = default;
    std::vector<std::string> names_;
    int fresh_counter_ = 0;
};

inline VarId var(const std::string& name) {
    return VarTable::instance().intern(name);
}

inline const std::string& var_name(VarId v) {
    return VarTable::instance().name(v);
}

}  // namespace polybound

#endif
