#include <doctest.h>

#include <random>

#include "figures.hpp"
#include "oracles.hpp"
#include "rowreorder/codecs.hpp"
#include "rowreorder/errors.hpp"
#include "rowreorder/metrics.hpp"

using namespace rowreorder;

namespace {

std::vector<Code> randomBlock(std::mt19937_64& rng, std::size_t len, Code card) {
  // Mix of runs and noise so every codec sees varied structure.
  std::vector<Code> out;
  std::uniform_int_distribution<Code> v(0, card - 1);
  while (out.size() < len) {
    const Code x = v(rng);
    const std::size_t run = 1 + rng() % (rng() % 3 == 0 ? 40 : 3);
    for (std::size_t k = 0; k < run && out.size() < len; ++k) out.push_back(x);
  }
  return out;
}

std::vector<Code> repeat(Code v, std::size_t n) { return std::vector<Code>(n, v); }

}  // namespace

TEST_CASE("codec spellings") {
  for (auto id : {CodecId::runCount, CodecId::rle, CodecId::prefix, CodecId::sparse, CodecId::indirect, CodecId::lz})
    CHECK((parseCodecId(toString(id)) == id));
  CHECK_THROWS_AS(parseCodecId("lzo"), std::invalid_argument);
}

TEST_CASE("bit widths") {
  CHECK(bitWidth(0) == 0);
  CHECK(bitWidth(1) == 0);
  CHECK(bitWidth(2) == 1);
  CHECK(bitWidth(16) == 4);
  CHECK(bitWidth(17) == 5);
  CHECK(bitWidth(128) == 7);
}

TEST_CASE("run-length triples") {
  const std::vector<Code> v{0, 0, 0, 0, 0, 1, 2, 2};
  const auto runs = rleEncode(v);
  CHECK(runs == std::vector<RleRun>{{0, 0, 5}, {1, 5, 1}, {2, 6, 2}});
  CHECK(rleDecode(runs) == v);
  std::vector<Code> alt;
  for (int i = 0; i < 20; ++i) alt.push_back(i % 2);
  CHECK(rleEncode(alt).size() == 20);
}

TEST_CASE("run-length sizes") {
  CHECK(rleSizeBits(1, 16, std::uint64_t{1} << 20) == 44);
  CHECK(rleSizeBits(1, 16, 1024) == 24);
  CHECK(oracle::rleBits(repeat(3, 1024), 16) == 24);
  CHECK(rleSizeBits(0, 16, 0) == 0);
}

TEST_CASE("prefix sizes") {
  CHECK(prefixSizeBits(repeat(5, 128), 16) == 11);
  std::vector<Code> worst;
  for (int i = 0; i < 128; ++i) worst.push_back(i % 2);
  CHECK(prefixSizeBits(worst, 16) == 519);
  CHECK(prefixSizeBits({}, 16) == 0);
  CHECK(prefixSizeBits(repeat(1, 10), 16) == 4 + 4);
}

TEST_CASE("sparse sizes") {
  CHECK(sparseSizeBits(repeat(2, 128), 16) == 132);
  auto b = repeat(0, 100);
  for (Code i = 0; i < 28; ++i) b.push_back(1 + i % 15);
  CHECK(sparseSizeBits(b, 16) == 244);
  std::vector<Code> distinct(128);
  std::iota(distinct.begin(), distinct.end(), 0u);
  CHECK(sparseSizeBits(distinct, 256) == 1152);
}

TEST_CASE("indirect sizes") {
  std::vector<Code> b;
  for (int i = 0; i < 128; ++i) b.push_back(i % 4 * 50);
  CHECK(indirectSizeBits(b, 256) == 296);
  CHECK(indirectSizeBits(repeat(7, 128), 256) == 8 + 8);
  std::vector<Code> all(128);
  std::iota(all.begin(), all.end(), 0u);
  CHECK(indirectSizeBits(all, 128) <= 2 * 128 * 7 + kIndirectHeaderBits);
  CHECK(indirectSizeBits(all, 128) >= 128 * 7);
}

TEST_CASE("closed forms match a bit-writing reference on random blocks") {
  std::mt19937_64 rng(71);
  for (int t = 0; t < 10000; ++t) {
    const Code card = 1 + static_cast<Code>(rng() % 300);
    const std::size_t len = rng() % 129;
    const auto block = randomBlock(rng, len, card);
    REQUIRE(prefixSizeBits(block, card) == oracle::prefixBits(block, card));
    REQUIRE(sparseSizeBits(block, card) == oracle::sparseBits(block, card));
    REQUIRE(indirectSizeBits(block, card) == oracle::indirectBits(block, card));
    if (!block.empty()) REQUIRE(rleSizeBits(rleEncode(block).size(), card, len) == oracle::rleBits(block, card));
  }
}

TEST_CASE("reference encoders write exactly the closed-form bits and decode back") {
  std::mt19937_64 rng(73);
  for (int t = 0; t < 10000; ++t) {
    const Code card = 1 + static_cast<Code>(rng() % 200);
    const std::size_t len = rng() % 400;
    const std::size_t blockSize = t % 3 == 0 ? 1 + rng() % 256 : kDefaultBlockSize;
    const auto col = randomBlock(rng, len, card);
    for (auto id : {CodecId::rle, CodecId::prefix, CodecId::sparse, CodecId::indirect}) {
      const auto enc = encodeColumn(col, id, card, blockSize);
      REQUIRE(enc.bitCount == columnSizeBits(col, id, card, blockSize));
      REQUIRE(enc.bytes.size() == (enc.bitCount + 7) / 8);
      REQUIRE(decodeColumn(enc) == col);
    }
  }
}

TEST_CASE("encoder argument checks") {
  const std::vector<Code> col{0, 1, 2};
  CHECK_THROWS_AS(encodeColumn(col, CodecId::lz, 3), std::invalid_argument);
  CHECK_THROWS_AS(encodeColumn(col, CodecId::prefix, 2), std::invalid_argument);
  CHECK_THROWS_AS(encodeColumn(col, CodecId::indirect, 3, 0), std::invalid_argument);
  CHECK_THROWS_AS(encodeColumn(col, CodecId::indirect, 3, 257), std::invalid_argument);
  auto enc = encodeColumn(col, CodecId::rle, 3);
  enc.bytes.clear();
  CHECK_THROWS_AS(decodeColumn(enc), FormatError);
}

TEST_CASE("worst-case block bounds") {
  std::mt19937_64 rng(79);
  for (int t = 0; t < 2000; ++t) {
    const Code card = 2 + static_cast<Code>(rng() % 500);
    const auto block = randomBlock(rng, 128, card);
    const std::uint64_t dict = 128 * bitWidth(card);
    REQUIRE(prefixSizeBits(block, card) <= dict + 7);
    REQUIRE(indirectSizeBits(block, card) <= 2 * dict + kIndirectHeaderBits);
  }
}

TEST_CASE("bundled lz") {
  const BundledLz lz;
  CHECK(lz.compress({}).size() <= 8);
  CHECK(lzSizeBytes(repeat(9, 256)) < 64);
  CHECK(lzSizeBytes(repeat(9, 256)) - lzSizeBytes(repeat(9, 128)) <= 8);

  std::mt19937_64 rng(83);
  std::vector<std::uint8_t> noise(5000);
  for (auto& b : noise) b = static_cast<std::uint8_t>(rng());
  const auto packed = lz.compress(noise);
  CHECK(packed.size() >= noise.size());
  CHECK(packed.size() <= noise.size() + 16);
  CHECK(lz.decompress(packed) == noise);

  std::vector<std::uint8_t> bad = lz.compress(codesToBytes(repeat(1, 100)));
  bad.resize(bad.size() - 1);
  CHECK_THROWS_AS(lz.decompress(bad), FormatError);
  CHECK_THROWS_AS(lz.decompress(std::vector<std::uint8_t>{0x85}), FormatError);
}

TEST_CASE("bundled lz round-trips random columns") {
  const BundledLz lz;
  std::mt19937_64 rng(89);
  for (int t = 0; t < 10000; ++t) {
    const auto col = randomBlock(rng, rng() % 300, 1 + static_cast<Code>(rng() % 1000));
    const auto bytes = codesToBytes(col);
    REQUIRE(lz.decompress(lz.compress(bytes)) == bytes);
  }
}

TEST_CASE("compress table") {
  const auto t = tableFromRows(figures::kInitial);
  const auto listed = identityOrdering(t.rowCount());
  RowOrdering better;
  for (const auto& row : figures::kMultipleListsSolution)
    better.push_back(static_cast<RowId>(std::find(figures::kInitial.begin(), figures::kInitial.end(), row) - figures::kInitial.begin()));

  const auto rc = compressTable(t, listed, CodecId::runCount);
  CHECK(rc.totalBits == runCount(t, listed).total);
  CHECK(rc.perColumnBits == runCount(t, listed).perColumn);

  // Same widths in both orderings, so the RLE ratio equals the run ratio.
  const auto a = compressTable(t, listed, CodecId::rle), b = compressTable(t, better, CodecId::rle);
  const std::uint64_t triple = bitWidth(8) + 2 * bitWidth(11);
  CHECK(a.perColumnBits[0] == 8 * triple);
  CHECK(a.perColumnBits[1] == 11 * (bitWidth(4) + 2 * bitWidth(11)));
  CHECK(b.perColumnBits[1] == 6 * (bitWidth(4) + 2 * bitWidth(11)));
  CHECK(a.totalBits == a.perColumnBits[0] + a.perColumnBits[1]);

  const auto constant = tableFromRows({{1, 2, 3}, {1, 2, 3}, {1, 2, 3}});
  CHECK(compressTable(constant, identityOrdering(3), CodecId::runCount).totalBits == 3);
  CHECK(compressTable(constant, identityOrdering(3), CodecId::rle).totalBits == 3 * 2 * bitWidth(3));
  CHECK_THROWS_AS(compressTable(t, listed, CodecId::prefix, 0), std::invalid_argument);
}

TEST_CASE("rle size tracks run counts") {
  std::mt19937_64 rng(97);
  for (int t = 0; t < 50; ++t) {
    const auto table = tableFromRows(oracle::randomRows(rng, 50 + rng() % 300, 1 + rng() % 4, 2 + rng() % 6));
    auto ord = identityOrdering(table.rowCount());
    std::shuffle(ord.begin(), ord.end(), rng);
    const auto rle = compressTable(table, ord, CodecId::rle);
    const auto runs = runCount(table, ord).perColumn;
    for (std::size_t c = 0; c < runs.size(); ++c)
      REQUIRE(rle.perColumnBits[c] == runs[c] * (bitWidth(table.cardinality(c)) + 2 * bitWidth(table.rowCount())));
  }
}

TEST_CASE("parallel and serial table compression agree") {
  std::mt19937_64 rng(101);
  for (int t = 0; t < 10; ++t) {
    const auto table = tableFromRows(oracle::randomRows(rng, 100 + rng() % 2000, 1 + rng() % 6, 2 + rng() % 30));
    auto ord = identityOrdering(table.rowCount());
    std::shuffle(ord.begin(), ord.end(), rng);
    for (auto id : {CodecId::runCount, CodecId::rle, CodecId::prefix, CodecId::sparse, CodecId::indirect, CodecId::lz}) {
      const auto p = compressTable(table, ord, id, 64), s = compressTableSerial(table, ord, id, 64);
      REQUIRE(p.perColumnBits == s.perColumnBits);
      REQUIRE(p.totalBits == s.totalBits);
    }
  }
}
