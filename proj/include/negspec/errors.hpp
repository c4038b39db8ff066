#pragma once

#include <stdexcept>
#include <string>

namespace negspec {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class LightConeSingularity : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class ExtrapolationDiverged : public Error {
public:
    using Error::Error;
};

class NonConvergence : public Error {
public:
    using Error::Error;
};

class TailNotConverged : public Error {
public:
    using Error::Error;
};

class BracketFailure : public Error {
public:
    using Error::Error;
};

class CoincidentPoints : public Error {
public:
    using Error::Error;
};

class UsageError : public Error {
public:
    using Error::Error;
};

} // namespace negspec
