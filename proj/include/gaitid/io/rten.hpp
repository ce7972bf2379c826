#pragma once

// RTEN: a minimal little-endian container for one dense real tensor.
//
//   offset  size      field
//   0       4         magic "RTEN"
//   4       1         version (= 1)
//   5       1         dtype (0 = float32, 1 = float64)
//   6       1         ndim
//   7       1         reserved (= 0)
//   8       8*ndim    dims, uint64 little-endian
//   ...     n*esize   payload, row-major, little-endian IEEE-754

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace gaitid::io {

enum class RtenDtype : std::uint8_t { f32 = 0, f64 = 1 };

inline constexpr std::uint8_t kRtenVersion = 1;
inline constexpr std::size_t kRtenMaxRank = 8;

template <class T>
struct RtenTensor {
  std::vector<std::uint64_t> dims;
  std::vector<T> values;
};

template <class T>
std::vector<std::uint8_t> encode_rten(std::span<const T> values, std::span<const std::uint64_t> dims);

// Throws IoError on malformed input or when the stored dtype differs from T.
template <class T>
RtenTensor<T> decode_rten(std::span<const std::uint8_t> bytes);

template <class T>
void write_rten(const std::filesystem::path& path, std::span<const T> values,
                std::span<const std::uint64_t> dims);

template <class T>
RtenTensor<T> read_rten(const std::filesystem::path& path);

// Reads the dtype byte without decoding the payload.
RtenDtype peek_rten_dtype(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace gaitid::io
