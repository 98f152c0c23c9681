#pragma once

#include <stdexcept>
#include <string>

namespace qst {

enum class ErrorCode { config = 1, numerical = 2, validation = 3, argument = 4, internal = 5 };

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace qst
