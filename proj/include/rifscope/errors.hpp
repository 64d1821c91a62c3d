#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace rifscope {

// Base class for all analysis failures. Subclasses distinguish bad input,
// numerical breakdowns, and violated invariants; the CLI maps these onto
// distinct exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input is malformed or violates a precondition.
struct InvalidInput : Error {
    using Error::Error;
};

// A numerical procedure could not certify its result.
struct NumericalFailure : Error {
    using Error::Error;
};

// A mathematical invariant that should hold was observed to fail.
struct InvariantViolation : Error {
    using Error::Error;
};

struct NotSemiStable : InvalidInput {
    std::complex<double> witness1, witness2;
    NotSemiStable(std::complex<double> w1, std::complex<double> w2, const std::string& what)
        : InvalidInput(what), witness1(w1), witness2(w2) {}
};

struct CommonFactor : InvalidInput {
    using InvalidInput::InvalidInput;
};

struct DegenerateInput : InvalidInput {
    using InvalidInput::InvalidInput;
};

struct NotSymmetric : InvalidInput {
    using InvalidInput::InvalidInput;
};

struct AmbiguousSymmetry : InvalidInput {
    using InvalidInput::InvalidInput;
};

struct NotSelfAdjoint : InvalidInput {
    using InvalidInput::InvalidInput;
};

struct UnknownFixture : InvalidInput {
    using InvalidInput::InvalidInput;
};

struct CommonRoot : InvalidInput {
    using InvalidInput::InvalidInput;
};

struct IdenticallyZero : DegenerateInput {
    using DegenerateInput::DegenerateInput;
};

struct DegenerateLevel : DegenerateInput {
    using DegenerateInput::DegenerateInput;
};

struct DegenerateResolvent : DegenerateInput {
    using DegenerateInput::DegenerateInput;
};

struct VerticalComponent : DegenerateInput {
    std::complex<double> at;
    VerticalComponent(std::complex<double> where, const std::string& what)
        : DegenerateInput(what), at(where) {}
};

struct TrackingAmbiguity : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};

struct NoLimit : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};

struct InsufficientSamples : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};

struct NoisyData : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};

struct ShearFailure : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};

struct RootCertificateFailure : NumericalFailure {
    using NumericalFailure::NumericalFailure;
};

struct EcoViolation : InvariantViolation {
    using InvariantViolation::InvariantViolation;
};

struct CrossCheckFailure : InvariantViolation {
    using InvariantViolation::InvariantViolation;
};

struct AuditMismatch : InvariantViolation {
    using InvariantViolation::InvariantViolation;
};

struct IdentityFailure : InvariantViolation {
    using InvariantViolation::InvariantViolation;
};

} // namespace rifscope
