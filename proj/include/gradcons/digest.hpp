#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <type_traits>

namespace gradcons {

// 64-bit FNV-1a, used to fingerprint problem instances in trace files.
class Fnv1a {
 public:
  void update(const void* data, std::size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
      state_ ^= p[i];
      state_ *= 0x100000001b3ULL;
    }
  }

  template <typename T>
    requires std::is_trivially_copyable_v<T>
  void add(const T& value) {
    update(&value, sizeof(T));
  }

  template <typename T>
    requires std::is_trivially_copyable_v<T>
  void add(std::span<const T> values) {
    update(values.data(), values.size_bytes());
  }

  std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace gradcons
