#pragma once

#include <stdexcept>
#include <utility>
#include <variant>

namespace slotnet {

template <class E>
struct Unexpected {
  E error;
};

template <class E>
Unexpected<E> unexpected(E e) {
  return Unexpected<E>{std::move(e)};
}

/// Minimal stand-in for std::expected (not available before C++23).
template <class T, class E>
class Expected {
 public:
  Expected(T value) : v_(std::in_place_index<0>, std::move(value)) {}
  Expected(Unexpected<E> err) : v_(std::in_place_index<1>, std::move(err.error)) {}

  bool has_value() const { return v_.index() == 0; }
  explicit operator bool() const { return has_value(); }

  const T& value() const {
    if (!has_value()) throw std::logic_error("Expected holds an error");
    return std::get<0>(v_);
  }
  const E& error() const {
    if (has_value()) throw std::logic_error("Expected holds a value");
    return std::get<1>(v_);
  }
  const T& operator*() const { return value(); }

 private:
  std::variant<T, E> v_;
};

}  // namespace slotnet
