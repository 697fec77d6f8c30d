#pragma once

#include <stdexcept>
#include <string>

namespace catbench {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Negative yields, zero-variance skewness and similar bad numeric input.
class DomainError : public Error {
public:
    using Error::Error;
};

// Unknown parameter names or option labels. Distinct from the missing-marker,
// which only means "no measurement for this key".
class StructuralError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// suggest/observe called out of order, or a batch that does not match.
class ProtocolError : public Error {
public:
    using Error::Error;
};

class SessionComplete : public Error {
public:
    SessionComplete() : Error("session complete: budget exhausted") {}
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

// Raised by optimizers whose backing service failed for good. The campaign
// runner keeps the partial trajectory and marks it aborted.
class CampaignAbort : public Error {
public:
    using Error::Error;
};

} // namespace catbench
