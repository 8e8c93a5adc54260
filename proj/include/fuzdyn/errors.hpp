#pragma once

#include <stdexcept>
#include <string>

namespace fuzdyn {

// Inputs that violate an operation's contract (wrong universe, bad levels, ...).
struct domain_error : std::invalid_argument {
  explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

// Bad experiment or universe configuration (unknown kind, weight <= 1, ...).
struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// A strategy object (candidate generator) broke its contract.
struct contract_error : std::runtime_error {
  explicit contract_error(const std::string& what) : std::runtime_error(what) {}
};

// An internal invariant that must never fail did; indicates a library bug.
struct invariant_error : std::logic_error {
  explicit invariant_error(const std::string& what) : std::logic_error(what) {}
};

}  // namespace fuzdyn
