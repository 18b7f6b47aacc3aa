#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace polwire {

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::span<const std::byte> data);
std::string sha256_hex(std::string_view text);
std::string sha256_file(const std::string& path);

/// Incremental SHA-256 over heterogeneous inputs.
class Sha256 {
public:
    Sha256();
    ~Sha256();
    Sha256(const Sha256&) = delete;
    Sha256& operator=(const Sha256&) = delete;

    Sha256& update(std::span<const std::byte> data);
    Sha256& update(std::string_view text);
    template <typename T>
    Sha256& update_values(std::span<const T> values) {
        return update(std::as_bytes(values));
    }
    std::string hex();

private:
    struct ContextDeleter {
        void operator()(void* ctx) const;
    };
    std::unique_ptr<void, ContextDeleter> ctx_;
};

} // namespace polwire
