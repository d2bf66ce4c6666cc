#pragma once

#include <stdexcept>
#include <string>

namespace contattn {

struct NotSpdError : std::runtime_error {
    explicit NotSpdError(const std::string& what) : std::runtime_error(what) {}
};

struct ToleranceNotReachedError : std::runtime_error {
    explicit ToleranceNotReachedError(const std::string& what) : std::runtime_error(what) {}
};

struct NoBracketError : std::runtime_error {
    explicit NoBracketError(const std::string& what) : std::runtime_error(what) {}
};

struct InfiniteSupportError : std::runtime_error {
    explicit InfiniteSupportError(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateCovarianceError : std::runtime_error {
    explicit DegenerateCovarianceError(const std::string& what) : std::runtime_error(what) {}
};

struct SingularSystemError : std::runtime_error {
    explicit SingularSystemError(const std::string& what) : std::runtime_error(what) {}
};

struct TooLargeError : std::runtime_error {
    explicit TooLargeError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace contattn
