#include <cstring>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "gaitid/core/error.hpp"
#include "gaitid/io/rten.hpp"
#include "helpers.hpp"

using namespace gaitid;
using namespace gaitid::io;

namespace {

template <class T>
bool bit_equal(const std::vector<T>& a, const std::vector<T>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(T)) == 0;
}

template <class T>
void round_trip_many(std::uint64_t seed) {
  std::mt19937_64 g(seed);
  for (int trial = 0; trial < 200; ++trial) {
    const int rank = 1 + trial % 4;
    std::vector<std::uint64_t> dims(rank);
    std::size_t n = 1;
    for (auto& d : dims) {
      d = 1 + g() % 6;
      n *= d;
    }
    auto values = testing::random_values<T>(n, g(), -1e6, 1e6);
    if (trial % 7 == 0) values[0] = -0.0;
    const auto bytes = encode_rten<T>(values, dims);
    REQUIRE(bytes.size() == 8 + 8 * rank + n * sizeof(T));
    const auto back = decode_rten<T>(bytes);
    CHECK(back.dims == dims);
    CHECK(bit_equal(back.values, values));
  }
}

}  // namespace

TEST_CASE("header layout is fixed little-endian") {
  const std::vector<float> v = {1.0f, 2.0f, 3.0f, 4.0f, 5.0f, 6.0f};
  const std::vector<std::uint64_t> dims = {2, 3};
  const auto b = encode_rten<float>(v, dims);
  REQUIRE(b.size() == 8 + 16 + 24);
  CHECK(std::string(b.begin(), b.begin() + 4) == "RTEN");
  CHECK(b[4] == 1);
  CHECK(b[5] == 0);
  CHECK(b[6] == 2);
  CHECK(b[7] == 0);
  CHECK(b[8] == 2);
  for (int i = 9; i < 16; ++i) CHECK(b[i] == 0);
  CHECK(b[16] == 3);
  float first;
  std::memcpy(&first, b.data() + 24, 4);
  CHECK(first == 1.0f);
  CHECK(encode_rten<double>(std::vector<double>{1.0}, std::vector<std::uint64_t>{1})[5] == 1);
}

TEST_CASE("round trip is bit exact for every rank in both precisions") {
  round_trip_many<float>(1);
  round_trip_many<double>(2);
}

TEST_CASE("file round trip and dtype peek") {
  const auto dir = std::filesystem::temp_directory_path() / "gaitid_rten_test";
  std::filesystem::create_directories(dir);
  const auto v = testing::random_values<double>(24, 9);
  const std::vector<std::uint64_t> dims = {2, 3, 4};
  write_rten<double>(dir / "a.rten", v, dims);
  CHECK(peek_rten_dtype(dir / "a.rten") == RtenDtype::f64);
  const auto back = read_rten<double>(dir / "a.rten");
  CHECK(back.dims == dims);
  CHECK(bit_equal(back.values, v));
  CHECK_THROWS_AS(read_rten<float>(dir / "a.rten"), IoError);
  CHECK_THROWS_AS(read_rten<float>(dir / "missing.rten"), IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("malformed containers are rejected") {
  const std::vector<float> v = {1, 2, 3};
  const std::vector<std::uint64_t> dims = {3};
  auto b = encode_rten<float>(v, dims);
  SUBCASE("bad magic") {
    b[0] = 'X';
    CHECK_THROWS_AS(decode_rten<float>(b), IoError);
  }
  SUBCASE("bad version") {
    b[4] = 2;
    CHECK_THROWS_AS(decode_rten<float>(b), IoError);
  }
  SUBCASE("truncated payload") {
    b.pop_back();
    CHECK_THROWS_AS(decode_rten<float>(b), IoError);
  }
  SUBCASE("trailing bytes") {
    b.push_back(0);
    CHECK_THROWS_AS(decode_rten<float>(b), IoError);
  }
  SUBCASE("dims disagree with payload") {
    b[8] = 4;
    CHECK_THROWS_AS(decode_rten<float>(b), IoError);
  }
}
