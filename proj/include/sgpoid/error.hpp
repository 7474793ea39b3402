#pragma once

#include <stdexcept>
#include <string>

namespace sgpoid {

  //! Base class of every exception thrown by the library.
  class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  //! Dangling ids, ill-typed generators, malformed input structures.
  class StructuralError : public Error {
   public:
    using Error::Error;
  };

  //! Thrown by compose() when cod(f) != dom(g).
  class NotComposable : public Error {
   public:
    NotComposable(std::string const& what_arg,
                  std::string        left_type,
                  std::string        right_type)
        : Error(what_arg),
          _left_type(std::move(left_type)),
          _right_type(std::move(right_type)) {}

    std::string const& left_type() const noexcept {
      return _left_type;
    }
    std::string const& right_type() const noexcept {
      return _right_type;
    }

   private:
    std::string _left_type;
    std::string _right_type;
  };

  //! A state index outside the domain of a transformation.
  class DomainError : public Error {
   public:
    using Error::Error;
  };

  //! Operation defined only for a restricted class of inputs (e.g. one-object).
  class Unsupported : public Error {
   public:
    using Error::Error;
  };

  //! encode/decode called on an arrow outside the codec's scope.
  class ScopeError : public Error {
   public:
    using Error::Error;
  };

  //! Input for which the construction degenerates (e.g. empty state relation).
  class DegenerateError : public Error {
   public:
    using Error::Error;
  };

  //! A candidate structure failed validation where a valid one was required.
  class ValidationError : public Error {
   public:
    using Error::Error;
  };

}  // namespace sgpoid
