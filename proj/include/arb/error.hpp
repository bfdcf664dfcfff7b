#ifndef ARB_ERROR_HPP
#define ARB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace arb {

// Error categories map 1:1 onto CLI exit codes.
enum class ErrorKind { Validation = 1, Data = 2, Solver = 3, Invariant = 4 };

class ArbError : public std::runtime_error {
public:
    ArbError(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    ErrorKind kind() const { return kind_; }
    int exit_code() const { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const std::string& msg) {
    if (!cond) throw ArbError(kind, msg);
}

}  // namespace arb

#endif
