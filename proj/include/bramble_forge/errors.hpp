#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace bramble_forge {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition or parameter check failed.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An exact search ran out of its node/size budget. Carries the best bounds
/// found so far; never replaced by a silent approximation.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, double lower, double upper)
      : Error(what), lower_(lower), upper_(upper) {}
  double lower_bound() const { return lower_; }
  double upper_bound() const { return upper_; }

 private:
  double lower_;
  double upper_;
};

class DisconnectedPair : public Error {
 public:
  DisconnectedPair(int u, int v)
      : Error("hub vertices " + std::to_string(u) + " and " + std::to_string(v) +
              " lie in different components"),
        u_(u),
        v_(v) {}
  std::pair<int, int> pair() const { return {u_, v_}; }

 private:
  int u_;
  int v_;
};

/// Result of a structural check: ok, or the first violation found.
struct Verdict {
  bool ok = true;
  std::string violation;

  static Verdict pass() { return {}; }
  static Verdict fail(std::string why) { return {false, std::move(why)}; }
  explicit operator bool() const { return ok; }
};

}  // namespace bramble_forge
