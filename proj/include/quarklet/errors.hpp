#pragma once

#include <stdexcept>
#include <string>

namespace quarklet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter constraint was violated. The message names the inequality.
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// An index lies outside the admissible index set.
class IndexError : public Error {
public:
    using Error::Error;
};

/// A frame element could not be constructed for the given parameters.
class ConstructionError : public Error {
public:
    using Error::Error;
};

/// A point evaluation left the domain of the function.
class DomainError : public Error {
public:
    using Error::Error;
};

class IllConditioned : public Error {
public:
    using Error::Error;
};

class DivergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace quarklet
