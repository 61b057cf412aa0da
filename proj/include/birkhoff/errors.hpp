#pragma once

#include <stdexcept>
#include <string>

namespace birkhoff {

// Domain error with a stable machine-parsable code (E_PARSE, E_DIMENSION, ...).
// The CLI prints these as "error: <code>: <message>" and exits 1.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

namespace errc {
inline constexpr const char* parse = "E_PARSE";
inline constexpr const char* validate = "E_VALIDATE";
inline constexpr const char* dimension = "E_DIMENSION";
inline constexpr const char* kind = "E_KIND";
inline constexpr const char* domain = "E_DOMAIN";
inline constexpr const char* degree = "E_DEGREE";
inline constexpr const char* unsupported = "E_UNSUPPORTED";
inline constexpr const char* cluster = "E_CLUSTER";
inline constexpr const char* near_resonance = "E_NEAR_RESONANCE";
inline constexpr const char* singular = "E_SINGULAR";
inline constexpr const char* no_converge = "E_NO_CONVERGE";
inline constexpr const char* io = "E_IO";
inline constexpr const char* internal = "E_INTERNAL";
}  // namespace errc

// Internal invariant check. These guard postconditions the algorithms
// guarantee by construction; a failure is a bug, not a user error.
#define BIRKHOFF_ASSERT(cond, what)                                   \
    do {                                                              \
        if (!(cond))                                                  \
            throw ::birkhoff::Error(::birkhoff::errc::internal,       \
                                    std::string("invariant failed: ") + (what)); \
    } while (0)

}  // namespace birkhoff
