#ifndef PARCEL_ERRORS_HPP
#define PARCEL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace parcel {

// Error categories map 1:1 onto CLI exit codes.
enum class ErrorKind {
    Io = 2,         // file missing / unreadable / unwritable
    Format = 3,     // parse failures, bad magic, wrong space tag
    Parameter = 4,  // out-of-range arguments, shape mismatches
    Constraint = 5, // unsatisfiable clustering constraints, empty domains
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }
    int exit_code() const { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

inline Error io_error(const std::string& msg) { return Error(ErrorKind::Io, msg); }
inline Error format_error(const std::string& msg) { return Error(ErrorKind::Format, msg); }
inline Error parameter_error(const std::string& msg) { return Error(ErrorKind::Parameter, msg); }
inline Error constraint_error(const std::string& msg) { return Error(ErrorKind::Constraint, msg); }

} // namespace parcel

#endif
