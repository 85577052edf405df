#ifndef MISINFO_HASH_HPP
#define MISINFO_HASH_HPP

#include <filesystem>
#include <string>
#include <string_view>

namespace misinfo {

/// Lowercase hex SHA-256.
[[nodiscard]] std::string sha256_hex(std::string_view bytes);
[[nodiscard]] std::string sha256_file(const std::filesystem::path &path);

}  // namespace misinfo

#endif  // MISINFO_HASH_HPP
