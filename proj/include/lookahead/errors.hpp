#pragma once

#include <stdexcept>
#include <string>

namespace lookahead {

/// A caller broke an operation's precondition (bad action index, wrong
/// regime, malformed distribution, ...).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An exact computation would exceed its configured support cap.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed external input (environment files, configs, CSVs).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lookahead
