// Copyright (c) 2026 The vexp authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VEXP_ERRORS_HPP
#define VEXP_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vexp {

/// Base class for all domain errors raised by this library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// field_core

class CompositeModulus : public Error {
  public:
    using Error::Error;
};

class BadTolerance : public Error {
  public:
    using Error::Error;
};

class DivisionByZero : public Error {
  public:
    using Error::Error;
};

/// A value string that does not parse under the field's canonical encoding.
class BadEncoding : public Error {
  public:
    using Error::Error;
};

// node_table

class TooFewNodes : public Error {
  public:
    using Error::Error;
};

/// Two nodes compare equal; indices are 1-based.
class DuplicateNodes : public Error {
  public:
    DuplicateNodes(std::size_t first, std::size_t second, const std::string& what)
        : Error(what), first_index(first), second_index(second) {}
    std::size_t first_index;
    std::size_t second_index;
};

/// Prime field has too few elements for the requested node count.
class FieldTooSmall : public Error {
  public:
    using Error::Error;
};

class MalformedTableFile : public Error {
  public:
    MalformedTableFile(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_number(line) {}
    std::size_t line_number;
};

class InvariantViolation : public Error {
  public:
    using Error::Error;
};

// evaluator / special_forms

/// The base coincides with node P_j; index is 1-based.
class BaseCollidesWithNode : public Error {
  public:
    BaseCollidesWithNode(std::size_t index, const std::string& what)
        : Error(what), node_index(index) {}
    std::size_t node_index;
};

class ExponentOutOfRange : public Error {
  public:
    using Error::Error;
};

class NearSingularDenominator : public Error {
  public:
    using Error::Error;
};

class ZeroScale : public Error {
  public:
    using Error::Error;
};

class CharacteristicTooSmall : public Error {
  public:
    using Error::Error;
};

class NoRootsOfUnity : public Error {
  public:
    using Error::Error;
};

class SingularInput : public Error {
  public:
    using Error::Error;
};

} // namespace vexp

#endif // VEXP_ERRORS_HPP
