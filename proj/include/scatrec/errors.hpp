#pragma once

#include <stdexcept>
#include <string>

namespace scatrec {

// Base for every error the library raises deliberately. Precondition
// violations use std::invalid_argument / std::domain_error directly; the
// types below mark run-time outcomes callers may want to handle.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The incoming state is not in the small-data regime the solver accepts.
class SmallnessViolation : public Error {
public:
    using Error::Error;
};

// Wraparound / truncation monitor exceeded its configured gate.
class TailCheckFailure : public Error {
public:
    using Error::Error;
};

// A monitored norm grew beyond the sentinel factor or became non-finite.
class BlowUpDetected : public Error {
public:
    using Error::Error;
};

// Adaptive refinement or horizon certificate did not converge.
class NonConvergence : public Error {
public:
    using Error::Error;
};

}  // namespace scatrec
