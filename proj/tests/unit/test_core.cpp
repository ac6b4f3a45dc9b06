#include <doctest.h>

#include <atomic>
#include <set>
#include <stdexcept>
#include <vector>

#include "deadeye/core/error.hpp"
#include "deadeye/core/image.hpp"
#include "deadeye/core/parallel.hpp"
#include "deadeye/core/rng.hpp"
#include "deadeye/core/vec.hpp"

using namespace deadeye;

TEST_CASE("rng streams are reproducible and tag-separated") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  CHECK(derive_seed(7, "geometry") != derive_seed(7, "order"));
  CHECK(derive_seed(7, "scene", 0) != derive_seed(7, "scene", 1));
  CHECK(derive_seed(7, "scene", 3) == derive_seed(7, "scene", 3));

  Rng r(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    REQUIRE(r.below(6) < 6u);
  }
}

TEST_CASE("shuffle is a permutation") {
  std::vector<int> v(50);
  for (int i = 0; i < 50; ++i) v[i] = i;
  Rng r(9);
  r.shuffle(std::span<int>(v));
  std::set<int> seen(v.begin(), v.end());
  CHECK(seen.size() == 50);
  CHECK(*seen.begin() == 0);
  CHECK(*seen.rbegin() == 49);
}

TEST_CASE("base64 known vectors") {
  CHECK(base64_encode("") == "");
  CHECK(base64_encode("f") == "Zg==");
  CHECK(base64_encode("fo") == "Zm8=");
  CHECK(base64_encode("foobar") == "Zm9vYmFy");
  CHECK(base64_decode("Zm9vYmFy") == "foobar");
  CHECK(base64_decode("Zg==") == "f");

  std::string bytes;
  for (int i = 0; i < 256; ++i) bytes.push_back(static_cast<char>(i));
  CHECK(base64_decode(base64_encode(bytes)) == bytes);
  CHECK_THROWS_AS(base64_decode("Zm9v!"), Error);
}

TEST_CASE("crc32 check value") {
  CHECK(crc32_of("123456789") == 0xcbf43926u);
  CHECK(crc32_of("") == 0u);
}

TEST_CASE("png and ppm round trip") {
  RgbImage img(7, 5, {1, 2, 3});
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 7; ++x) img.set(x, y, {static_cast<std::uint8_t>(x * 30), static_cast<std::uint8_t>(y * 50), 200});
  }
  CHECK(decode_png(encode_png(img)) == img);
  CHECK(decode_ppm(encode_ppm(img)) == img);
  CHECK(encode_ppm(img).rfind("P6\n7 5\n255\n", 0) == 0);

  CHECK_THROWS_AS(decode_png("not a png"), Error);
  CHECK_THROWS_AS(decode_ppm("P3\n1 1\n255\n0 0 0"), Error);
}

TEST_CASE("parallel_for visits every index once") {
  for (unsigned threads : {1u, 2u, 4u}) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), threads, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) REQUIRE(h.load() == 1);
  }
}

TEST_CASE("parallel_for propagates exceptions") {
  CHECK_THROWS_AS(parallel_for(100, 3,
                               [](std::size_t i) {
                                 if (i == 37) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
}

TEST_CASE("rotation matrices are orthonormal") {
  const Mat3 r = Mat3::rotation(normalize(Vec3{1, 2, 3}), 0.7);
  const Mat3 p = r * r.transposed();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) CHECK(p.m[3 * i + j] == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
  }
  const RigidTransform t{r, {1, -2, 0.5}};
  const Vec3 w{0.3, 4.0, -7.0};
  const Vec3 back = t.inverse_apply(t.apply(w));
  CHECK(back.x == doctest::Approx(w.x));
  CHECK(back.y == doctest::Approx(w.y));
  CHECK(back.z == doctest::Approx(w.z));
}

TEST_CASE("errors carry their kind") {
  const Error e(ErrorKind::domain, "distance must be positive");
  CHECK(e.kind() == ErrorKind::domain);
  CHECK(e.detail() == "distance must be positive");
  CHECK(std::string(e.what()) == "domain error: distance must be positive");
}
