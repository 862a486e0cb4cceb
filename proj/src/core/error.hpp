#pragma once

#include <stdexcept>
#include <string>

namespace proxsim {

/// Coarse failure classes; the CLI and C API map these to exit/error codes
/// (config -> 1, io -> 2, everything else -> 3).
enum class ErrorKind {
    Config,
    Io,
    Invalid,   // bad argument / domain / size errors from library operations
    Internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void throw_config(const std::string& msg) { throw Error(ErrorKind::Config, msg); }
[[noreturn]] inline void throw_io(const std::string& msg) { throw Error(ErrorKind::Io, msg); }
[[noreturn]] inline void throw_invalid(const std::string& msg) { throw Error(ErrorKind::Invalid, msg); }
[[noreturn]] inline void throw_internal(const std::string& msg) { throw Error(ErrorKind::Internal, msg); }

inline void require(bool cond, ErrorKind kind, const std::string& msg) {
    if (!cond) throw Error(kind, msg);
}

}  // namespace proxsim
