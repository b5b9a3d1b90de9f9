#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace social_gym {

// Lower-case hex SHA-256 of the given bytes.
std::string sha256_hex(std::string_view bytes);

// SHA-256 of a file's contents; throws Error(Io) if unreadable.
std::string sha256_file(const std::filesystem::path& path);

// Stable 64-bit seed derived from a parent seed and a label.
std::uint64_t derive_seed(std::uint64_t parent, std::string_view label);

}  // namespace social_gym
