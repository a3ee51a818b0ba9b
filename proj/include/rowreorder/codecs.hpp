#pragma once

// Column codecs whose size depends on row order, with exact bit accounting.
//
// Widths: w(N) = ceil(log2 N) with w(1) = w(0) = 0. For a block of L <= p codes
// (p = 128, short final blocks use L):
//   RLE      runs * (w(N) + 2 w(n))            per column, n = row count
//   Prefix   w(L) + (L - l + 1) w(N)           l = length of the leading run
//   Sparse   (L - z + 1) w(N) + L              z = count of the block's most frequent code
//   Indirect 8 + N' w(N) + L w(N')             N' = distinct codes in the block
// Empty blocks and empty columns cost 0 bits.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rowreorder/table.hpp"

namespace rowreorder {

inline constexpr std::size_t kDefaultBlockSize = 128;
inline constexpr unsigned kIndirectHeaderBits = 8;

enum class CodecId { runCount, rle, prefix, sparse, indirect, lz };

/// CLI spellings: runcount, rle, prefix, sparse, indirect, lz.
std::string_view toString(CodecId id);
CodecId parseCodecId(std::string_view name);

/// ceil(log2 n), with 0 for n <= 1.
unsigned bitWidth(std::uint64_t n);

struct RleRun {
  Code value = 0;
  std::uint64_t start = 0;
  std::uint64_t length = 0;
  friend bool operator==(const RleRun&, const RleRun&) = default;
};

std::vector<RleRun> rleEncode(std::span<const Code> values);
std::vector<Code> rleDecode(std::span<const RleRun> runs);
std::uint64_t rleSizeBits(std::uint64_t runs, std::uint64_t cardinality, std::uint64_t rows);

std::uint64_t prefixSizeBits(std::span<const Code> block, std::uint64_t cardinality);
std::uint64_t sparseSizeBits(std::span<const Code> block, std::uint64_t cardinality);
std::uint64_t indirectSizeBits(std::span<const Code> block, std::uint64_t cardinality);

/// A column written bit by bit. `bitCount` is the exact number of bits used.
struct EncodedColumn {
  CodecId codec = CodecId::rle;
  std::uint64_t rows = 0;
  std::uint64_t cardinality = 0;
  std::size_t blockSize = kDefaultBlockSize;
  std::uint64_t bitCount = 0;
  std::vector<std::uint8_t> bytes;
};

/// Reference encoders that write every field. Supported: rle, prefix, sparse,
/// indirect. Throws std::invalid_argument for other codecs, a code >= cardinality,
/// or blockSize outside [1, 256].
EncodedColumn encodeColumn(std::span<const Code> values, CodecId codec, std::uint64_t cardinality,
                           std::size_t blockSize = kDefaultBlockSize);
/// Inverse of encodeColumn. Throws FormatError("codec", ...) on malformed input.
std::vector<Code> decodeColumn(const EncodedColumn& encoded);

/// Closed-form size of one column in bits (lz: 8 x compressed bytes).
class LzBackend;
std::uint64_t columnSizeBits(std::span<const Code> values, CodecId codec, std::uint64_t cardinality,
                             std::size_t blockSize = kDefaultBlockSize, const LzBackend* lz = nullptr);

/// Byte-oriented LZ compressor; implementations must be thread-safe.
class LzBackend {
 public:
  virtual ~LzBackend() = default;
  virtual std::string name() const = 0;
  virtual std::vector<std::uint8_t> compress(std::span<const std::uint8_t> input) const = 0;
  virtual std::vector<std::uint8_t> decompress(std::span<const std::uint8_t> input) const = 0;
};

/// Bundled LZ77: greedy hash matching, 64 KiB window, minimum match 4.
/// Stream: varint original length, then tokens of varint literal count,
/// literals, and (unless the input is exhausted) varint (match length - 4)
/// followed by a little-endian u16 offset.
class BundledLz final : public LzBackend {
 public:
  std::string name() const override { return "bundled-lz77"; }
  std::vector<std::uint8_t> compress(std::span<const std::uint8_t> input) const override;
  /// Throws FormatError("lz", ...) on malformed input.
  std::vector<std::uint8_t> decompress(std::span<const std::uint8_t> input) const override;
};

const LzBackend& defaultLzBackend();

/// Codes as a little-endian 32-bit byte stream.
std::vector<std::uint8_t> codesToBytes(std::span<const Code> values);
std::uint64_t lzSizeBytes(std::span<const Code> values, const LzBackend& backend = defaultLzBackend());

struct CodecReport {
  CodecId codec = CodecId::runCount;
  std::size_t blockSize = kDefaultBlockSize;
  std::uint64_t rowCount = 0;
  std::vector<std::uint32_t> cardinalities;
  /// For runCount the entries are runs, otherwise bits.
  std::vector<std::uint64_t> perColumnBits;
  std::uint64_t totalBits = 0;
};

/// Applies `codec` to every column of `table` listed in `ordering`, columns in parallel.
CodecReport compressTable(const Table& table, std::span<const RowId> ordering, CodecId codec,
                          std::size_t blockSize = kDefaultBlockSize, const LzBackend* lz = nullptr);
/// Single-threaded reference of compressTable.
CodecReport compressTableSerial(const Table& table, std::span<const RowId> ordering, CodecId codec,
                                std::size_t blockSize = kDefaultBlockSize, const LzBackend* lz = nullptr);

}  // namespace rowreorder
