#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace holodyn {

/// Machine-readable failure class carried by every library error.
enum class Reason {
    Domain,         // evaluation or mapping outside the declared annulus / domain
    Validation,     // malformed input or violated invariant
    Precondition,   // operation called outside its contract
    Numerical,      // residual or convergence failure
    Indeterminate,  // resolution or horizon too coarse to decide
};

inline std::string_view to_string(Reason r) {
    switch (r) {
        case Reason::Domain: return "domain";
        case Reason::Validation: return "validation";
        case Reason::Precondition: return "precondition";
        case Reason::Numerical: return "numerical";
        case Reason::Indeterminate: return "indeterminate";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(Reason reason, const std::string& what) : std::runtime_error(what), reason_(reason) {}
    Reason reason() const noexcept { return reason_; }

private:
    Reason reason_;
};

[[noreturn]] inline void fail(Reason reason, const std::string& what) { throw Error(reason, what); }

inline void require(bool cond, Reason reason, const std::string& what) {
    if (!cond) fail(reason, what);
}

}  // namespace holodyn
