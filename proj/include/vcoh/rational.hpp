#ifndef VCOH_RATIONAL_HPP
#define VCOH_RATIONAL_HPP

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace vcoh {

using Q = mpq_class;

enum class ErrorKind {
    CutoffExceeded,
    NonStabilization,
    PoleBoundViolation,
    InvalidRegion,
    Singular,
    Parse,
    ValidationFailure,
    InvalidInput,
    DomainViolation,
    NotComposable,
    NonClosed,
    TruncationInsufficient
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind k, const std::string& msg)
        : std::runtime_error(std::string(error_kind_name(k)) + ": " + msg), kind_(k) {}
    ErrorKind kind() const { return kind_; }
private:
    ErrorKind kind_;
};

// "p/q" or "p"; the form used everywhere in serialized output
std::string q_str(const Q& q);
Q q_parse(const std::string& s);

Q binomial(long n, long k);   // generalized: n may be negative
Q factorial(long n);

}  // namespace vcoh

#endif
