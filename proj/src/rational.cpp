#include "vcoh/rational.hpp"

#include <cctype>

namespace vcoh {

const char* error_kind_name(ErrorKind k)
{
    switch (k) {
        case ErrorKind::CutoffExceeded: return "cutoff exceeded";
        case ErrorKind::NonStabilization: return "non-stabilization";
        case ErrorKind::PoleBoundViolation: return "pole bound violation";
        case ErrorKind::InvalidRegion: return "invalid region";
        case ErrorKind::Singular: return "singular";
        case ErrorKind::Parse: return "parse error";
        case ErrorKind::ValidationFailure: return "validation failure";
        case ErrorKind::InvalidInput: return "invalid input";
        case ErrorKind::DomainViolation: return "domain violation";
        case ErrorKind::NotComposable: return "not composable";
        case ErrorKind::NonClosed: return "non-closed input";
        case ErrorKind::TruncationInsufficient: return "truncation insufficient";
    }
    return "error";
}

std::string q_str(const Q& q)
{
    return q.get_str();
}

Q q_parse(const std::string& s)
{
    std::string t;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw Error(ErrorKind::Parse, "empty rational");
    size_t start = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    size_t slash = t.find('/');
    auto digits = [&](size_t a, size_t b) {
        if (a >= b) return false;
        for (size_t i = a; i < b; ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };
    bool ok = slash == std::string::npos ? digits(start, t.size())
                                         : digits(start, slash) && digits(slash + 1, t.size());
    if (!ok) throw Error(ErrorKind::Parse, "bad rational '" + s + "'");
    if (t[0] == '+') t.erase(0, 1);
    Q q;
    if (q.set_str(t, 10) != 0) throw Error(ErrorKind::Parse, "bad rational '" + s + "'");
    if (slash != std::string::npos && q.get_den() == 0) throw Error(ErrorKind::Parse, "zero denominator");
    q.canonicalize();
    return q;
}

Q binomial(long n, long k)
{
    if (k < 0) return 0;
    Q r = 1;
    for (long i = 0; i < k; ++i) {
        r *= Q(n - i);
        r /= Q(i + 1);
    }
    return r;
}

Q factorial(long n)
{
    Q r = 1;
    for (long i = 2; i <= n; ++i) r *= i;
    return r;
}

}  // namespace vcoh
