#pragma once
// Shared result type for verification routines: a pass/fail flag plus a
// human-readable witness describing the first discrepancy found.

#include <string>

namespace monodromy {

struct CheckOutcome {
  bool pass = true;
  std::string witness;  // empty on success, first counterexample otherwise

  explicit operator bool() const { return pass; }

  // Note: no ok() factory — a static member called through an instance
  // (`outcome.ok()`) silently discards the outcome; construct `{}` instead.
  static CheckOutcome fail(std::string w) { return {false, std::move(w)}; }
};

}  // namespace monodromy
