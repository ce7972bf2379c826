#include "gaitid/io/rten.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "gaitid/core/error.hpp"

namespace gaitid::io {

namespace {

template <class T>
constexpr RtenDtype dtype_of() {
  if constexpr (std::is_same_v<T, float>) {
    return RtenDtype::f32;
  } else {
    static_assert(std::is_same_v<T, double>, "RTEN stores float or double");
    return RtenDtype::f64;
  }
}

template <class U>
void put_le(std::vector<std::uint8_t>& out, U value) {
  std::uint8_t raw[sizeof(U)];
  std::memcpy(raw, &value, sizeof(U));
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(raw[sizeof(U) - 1 - i]);
  } else {
    out.insert(out.end(), raw, raw + sizeof(U));
  }
}

template <class U>
U get_le(const std::uint8_t* p) {
  std::uint8_t raw[sizeof(U)];
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(U); ++i) raw[i] = p[sizeof(U) - 1 - i];
  } else {
    std::memcpy(raw, p, sizeof(U));
  }
  U value;
  std::memcpy(&value, raw, sizeof(U));
  return value;
}

std::uint64_t element_count(std::span<const std::uint64_t> dims) {
  std::uint64_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

}  // namespace

template <class T>
std::vector<std::uint8_t> encode_rten(std::span<const T> values, std::span<const std::uint64_t> dims) {
  if (dims.empty() || dims.size() > kRtenMaxRank) throw IoError("rten: rank must be in [1, 8]");
  if (element_count(dims) != values.size()) throw IoError("rten: dims do not match payload length");

  std::vector<std::uint8_t> out;
  out.reserve(8 + 8 * dims.size() + values.size() * sizeof(T));
  out.insert(out.end(), {'R', 'T', 'E', 'N'});
  out.push_back(kRtenVersion);
  out.push_back(static_cast<std::uint8_t>(dtype_of<T>()));
  out.push_back(static_cast<std::uint8_t>(dims.size()));
  out.push_back(0);
  for (auto d : dims) put_le<std::uint64_t>(out, d);
  if constexpr (std::endian::native == std::endian::little) {
    const auto* raw = reinterpret_cast<const std::uint8_t*>(values.data());
    out.insert(out.end(), raw, raw + values.size() * sizeof(T));
  } else {
    for (T v : values) put_le<T>(out, v);
  }
  return out;
}

template <class T>
RtenTensor<T> decode_rten(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), "RTEN", 4) != 0) throw IoError("rten: bad magic");
  if (bytes[4] != kRtenVersion) throw IoError("rten: unsupported version " + std::to_string(bytes[4]));
  if (bytes[5] != static_cast<std::uint8_t>(dtype_of<T>())) throw IoError("rten: dtype mismatch");
  const std::size_t ndim = bytes[6];
  if (ndim == 0 || ndim > kRtenMaxRank) throw IoError("rten: rank must be in [1, 8]");
  if (bytes.size() < 8 + 8 * ndim) throw IoError("rten: truncated header");

  RtenTensor<T> t;
  t.dims.resize(ndim);
  for (std::size_t i = 0; i < ndim; ++i) t.dims[i] = get_le<std::uint64_t>(bytes.data() + 8 + 8 * i);
  const std::uint64_t n = element_count(t.dims);
  const std::size_t offset = 8 + 8 * ndim;
  if (bytes.size() - offset != n * sizeof(T)) throw IoError("rten: payload length does not match dims");

  t.values.resize(n);
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(t.values.data(), bytes.data() + offset, n * sizeof(T));
  } else {
    for (std::uint64_t i = 0; i < n; ++i) t.values[i] = get_le<T>(bytes.data() + offset + i * sizeof(T));
  }
  return t;
}

template <class T>
void write_rten(const std::filesystem::path& path, std::span<const T> values,
                std::span<const std::uint64_t> dims) {
  const auto bytes = encode_rten<T>(values, dims);
  write_file_bytes(path, bytes);
}

template <class T>
RtenTensor<T> read_rten(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  try {
    return decode_rten<T>(bytes);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

RtenDtype peek_rten_dtype(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  char head[8];
  if (!in.read(head, 8) || std::memcmp(head, "RTEN", 4) != 0) throw IoError(path.string() + ": not an RTEN file");
  return static_cast<RtenDtype>(head[5]);
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path.string());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  write_file_bytes(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

std::string read_text_file(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return {bytes.begin(), bytes.end()};
}

template std::vector<std::uint8_t> encode_rten<float>(std::span<const float>, std::span<const std::uint64_t>);
template std::vector<std::uint8_t> encode_rten<double>(std::span<const double>, std::span<const std::uint64_t>);
template RtenTensor<float> decode_rten<float>(std::span<const std::uint8_t>);
template RtenTensor<double> decode_rten<double>(std::span<const std::uint8_t>);
template void write_rten<float>(const std::filesystem::path&, std::span<const float>, std::span<const std::uint64_t>);
template void write_rten<double>(const std::filesystem::path&, std::span<const double>, std::span<const std::uint64_t>);
template RtenTensor<float> read_rten<float>(const std::filesystem::path&);
template RtenTensor<double> read_rten<double>(const std::filesystem::path&);

}  // namespace gaitid::io
