#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace flattile {

// Base for all library errors. `code` mirrors the CLI exit codes.
class Error : public std::runtime_error {
 public:
  enum Code { kInvalidInput = 2, kDegenerate = 3, kSolver = 4, kVerify = 5 };
  Error(Code c, const std::string& msg) : std::runtime_error(msg), code(c) {}
  Code code;
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& msg) : Error(kInvalidInput, msg) {}
};

// Adjacent vertices share a g-value (or a whole edge sits on a level) where a
// stage requires distinct values. Carries the offending entities.
class DegenerateValues : public Error {
 public:
  DegenerateValues(const std::string& msg, std::vector<int> vertices = {},
                   std::vector<int> edges = {})
      : Error(kDegenerate, msg),
        vertices(std::move(vertices)),
        edges(std::move(edges)) {}
  std::vector<int> vertices;
  std::vector<int> edges;
};

class SolverError : public Error {
 public:
  explicit SolverError(const std::string& msg) : Error(kSolver, msg) {}
};

// An internal balance the construction relies on failed beyond tolerance.
// Signals an implementation bug, not bad data.
class ConsistencyError : public Error {
 public:
  explicit ConsistencyError(const std::string& msg) : Error(kVerify, msg) {}
};

class NotApplicable : public Error {
 public:
  explicit NotApplicable(const std::string& msg) : Error(kInvalidInput, msg) {}
};

class NotFound : public Error {
 public:
  explicit NotFound(const std::string& msg) : Error(kVerify, msg) {}
};

}  // namespace flattile
