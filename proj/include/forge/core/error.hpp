#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace forge {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An operation was called outside its documented domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Input does not follow the expected schema. `field` points at the offending
// element (JSON-pointer style) when known.
class MalformedInput : public Error {
 public:
  MalformedInput(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// A search or construction would exceed its configured budget. `estimate`
// carries the computed size that triggered the refusal.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::size_t estimate)
      : Error(what + " (estimate " + std::to_string(estimate) + ")"), estimate_(estimate) {}

  std::size_t estimate() const noexcept { return estimate_; }

 private:
  std::size_t estimate_;
};

}  // namespace forge
