#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

namespace hrng {

using Digest = std::array<std::uint8_t, 32>;

Digest blake2b256(std::span<const std::uint8_t> data);

// Incremental variant for digesting a sequence of records.
class Hasher {
  public:
    Hasher();
    Hasher& update(std::span<const std::uint8_t> data);
    Hasher& update(std::string_view text);
    Digest finish();

  private:
    alignas(64) std::array<std::uint8_t, 384> state_;
};

} // namespace hrng
