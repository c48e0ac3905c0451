#pragma once

#include <stdexcept>
#include <string>

namespace cslab {

/// Invalid input: violated precondition, dimension mismatch, bad config.
struct validation_error : std::invalid_argument {
    explicit validation_error(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Resource or enumeration cap exceeded (memory guard, support-count cap).
struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bytes allowed for a single dense allocation.  Controlled by the
/// CS_LAB_MAX_MEM_MB environment variable (default 2048 MB).
std::size_t max_dense_bytes();

/// Throws resource_error if a dense allocation of `bytes` exceeds the cap.
void check_dense_alloc(std::size_t bytes, const char* what);

} // namespace cslab
