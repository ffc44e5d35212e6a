#pragma once

#include <stdexcept>
#include <string>

namespace tweetnet {

/// A precondition on an operation's arguments was violated.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An input source could not be read.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// k-clique materialization exceeded its configured budget.
class CliqueBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tweetnet
