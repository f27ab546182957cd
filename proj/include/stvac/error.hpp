#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stvac {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// malformed or inconsistent caller input
class InputError : public Error {
 public:
  using Error::Error;
};

class SingularMetricError : public Error {
 public:
  SingularMetricError(std::size_t node, const std::string& what)
      : Error(what + " at node " + std::to_string(node)), node_(node) {}
  std::size_t node() const { return node_; }

 private:
  std::size_t node_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
};

class IntegrationError : public Error {
 public:
  using Error::Error;
};

}  // namespace stvac
