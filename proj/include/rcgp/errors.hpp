#pragma once

#include <stdexcept>
#include <string>

namespace rcgp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// rigidity
class CoincidentNodes : public Error { public: using Error::Error; };
class TooFewNodes : public Error { public: using Error::Error; };
class NotSymmetric : public Error { public: using Error::Error; };

// environment
class EmptyGraph : public Error { public: using Error::Error; };

// planning
class HorizonExceeded : public Error { public: using Error::Error; };
class NoPath : public Error { public: using Error::Error; };

class PlanningFailed : public Error {
 public:
  PlanningFailed(const std::string& what, int agent, int conflicts)
      : Error(what), agent_(agent), conflicts_(conflicts) {}

  /// Priority index of the agent at which backtracking gave up.
  int agent() const { return agent_; }
  int conflicts() const { return conflicts_; }

 private:
  int agent_;
  int conflicts_;
};

class IterationBudgetExceeded : public Error { public: using Error::Error; };

// localization
class InsufficientAnchors : public Error { public: using Error::Error; };
class DivergedEstimate : public Error { public: using Error::Error; };

// input / output
class ParseError : public Error { public: using Error::Error; };
class ValidationError : public Error { public: using Error::Error; };
class IoError : public Error { public: using Error::Error; };

}  // namespace rcgp
