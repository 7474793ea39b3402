#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace sgpoid {

  //! What a single violation in a ValidationReport is about.
  enum class ViolationKind {
    missing_composite,      // composable pair without table entry
    ill_typed_composite,    // dom(fg) != dom(f) or cod(fg) != cod(g)
    ill_typed_entry,        // table entry for a non-composable pair
    associativity,          // (fg)h != f(gh)
    extensional_mismatch,   // table disagrees with function composition
    duplicate_function,     // two arrows with the same typed mapping
    empty_image,            // relation not fully defined
    incompatible,           // compatibility condition fails
    empty_composite,        // phi(f)phi(g) is empty for composable f, g
    not_injective,          // images of distinct arrows overlap
    incompatible_action,    // phi0(x)phi1(s) not inside phi0(xs)
    codec,                  // encode/decode not mutually inverse
    structural              // wrong shapes passed to a validator
  };

  std::string to_string(ViolationKind kind);

  struct Violation {
    ViolationKind              kind;
    std::string                message;
    std::vector<std::uint32_t> witness;
  };

  //! A complete list of violations; empty means valid.
  class ValidationReport {
   public:
    ValidationReport() = default;

    void add(ViolationKind kind, std::string message,
             std::vector<std::uint32_t> witness = {}) {
      _violations.push_back({kind, std::move(message), std::move(witness)});
    }

    void append(ValidationReport const& other) {
      _violations.insert(
          _violations.end(), other._violations.begin(), other._violations.end());
    }

    [[nodiscard]] bool ok() const noexcept {
      return _violations.empty();
    }

    [[nodiscard]] std::vector<Violation> const& violations() const noexcept {
      return _violations;
    }

    [[nodiscard]] bool contains(ViolationKind kind) const noexcept {
      for (auto const& v : _violations) {
        if (v.kind == kind) {
          return true;
        }
      }
      return false;
    }

   private:
    std::vector<Violation> _violations;
  };

  std::ostream& operator<<(std::ostream& os, ValidationReport const& report);

}  // namespace sgpoid
