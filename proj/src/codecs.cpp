#include "rowreorder/codecs.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <unordered_map>

#include "rowreorder/errors.hpp"

namespace rowreorder {

namespace {

class BitWriter {
 public:
  void put(std::uint64_t value, unsigned width) {
    for (unsigned i = 0; i < width; ++i) {
      if (bits_ % 8 == 0) bytes_.push_back(0);
      if ((value >> i) & 1U) bytes_.back() |= static_cast<std::uint8_t>(1U << (bits_ % 8));
      ++bits_;
    }
  }
  std::uint64_t bitCount() const noexcept { return bits_; }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
  std::uint64_t bits_ = 0;
};

class BitReader {
 public:
  BitReader(std::span<const std::uint8_t> bytes, std::uint64_t bitCount) : bytes_(bytes), limit_(bitCount) {
    if (bitCount > 8 * static_cast<std::uint64_t>(bytes.size())) throw FormatError("codec", "bit count exceeds payload");
  }
  std::uint64_t get(unsigned width) {
    if (pos_ + width > limit_) throw FormatError("codec", "truncated bit stream");
    std::uint64_t v = 0;
    for (unsigned i = 0; i < width; ++i, ++pos_) {
      v |= static_cast<std::uint64_t>((bytes_[pos_ / 8] >> (pos_ % 8)) & 1U) << i;
    }
    return v;
  }
  bool exhausted() const noexcept { return pos_ == limit_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::uint64_t limit_;
  std::uint64_t pos_ = 0;
};

std::uint64_t leadingRun(std::span<const Code> block) {
  std::uint64_t l = 0;
  while (l < block.size() && block[l] == block[0]) ++l;
  return l;
}

// Most frequent code of the block (ties: lowest code) and its count.
std::pair<Code, std::uint64_t> blockMode(std::span<const Code> block) {
  std::vector<Code> sorted(block.begin(), block.end());
  std::sort(sorted.begin(), sorted.end());
  Code best = 0;
  std::uint64_t bestCount = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    if (j - i > bestCount) {
      bestCount = j - i;
      best = sorted[i];
    }
    i = j;
  }
  return {best, bestCount};
}

std::vector<Code> blockDictionary(std::span<const Code> block) {
  std::vector<Code> dict(block.begin(), block.end());
  std::sort(dict.begin(), dict.end());
  dict.erase(std::unique(dict.begin(), dict.end()), dict.end());
  return dict;
}

template <class F>
void forEachBlock(std::span<const Code> values, std::size_t blockSize, F f) {
  for (std::size_t s = 0; s < values.size(); s += blockSize) {
    f(values.subspan(s, std::min(blockSize, values.size() - s)));
  }
}

void checkBlockSize(std::size_t blockSize) {
  if (blockSize < 1 || blockSize > 256) {
    throw std::invalid_argument("block size must lie in [1, 256], got " + std::to_string(blockSize));
  }
}

void putVarint(std::vector<std::uint8_t>& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<std::uint8_t>(v | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<std::uint8_t>(v));
}

std::uint64_t getVarint(std::span<const std::uint8_t> in, std::size_t& pos) {
  std::uint64_t v = 0;
  for (unsigned shift = 0; shift < 64; shift += 7) {
    if (pos >= in.size()) throw FormatError("lz", "truncated varint");
    const std::uint8_t b = in[pos++];
    v |= static_cast<std::uint64_t>(b & 0x7F) << shift;
    if ((b & 0x80) == 0) return v;
  }
  throw FormatError("lz", "varint too long");
}

std::vector<Code> orderedColumn(const Table& table, std::size_t col, std::span<const RowId> ordering) {
  const auto column = table.column(col);
  std::vector<Code> out(ordering.size());
  for (std::size_t k = 0; k < ordering.size(); ++k) out[k] = column[ordering[k]];
  return out;
}

CodecReport emptyReport(const Table& table, std::span<const RowId> ordering, CodecId codec, std::size_t blockSize) {
  validatePermutation(ordering, table.rowCount());
  if (codec != CodecId::runCount && codec != CodecId::rle && codec != CodecId::lz) checkBlockSize(blockSize);
  CodecReport r;
  r.codec = codec;
  r.blockSize = blockSize;
  r.rowCount = table.rowCount();
  r.cardinalities = table.cardinalities();
  r.perColumnBits.assign(table.columnCount(), 0);
  return r;
}

}  // namespace

std::string_view toString(CodecId id) {
  switch (id) {
    case CodecId::runCount: return "runcount";
    case CodecId::rle: return "rle";
    case CodecId::prefix: return "prefix";
    case CodecId::sparse: return "sparse";
    case CodecId::indirect: return "indirect";
    case CodecId::lz: return "lz";
  }
  return "?";
}

CodecId parseCodecId(std::string_view name) {
  for (auto id : {CodecId::runCount, CodecId::rle, CodecId::prefix, CodecId::sparse, CodecId::indirect, CodecId::lz}) {
    if (toString(id) == name) return id;
  }
  throw std::invalid_argument("unknown codec '" + std::string(name) + "'");
}

unsigned bitWidth(std::uint64_t n) { return n <= 1 ? 0 : static_cast<unsigned>(std::bit_width(n - 1)); }

std::vector<RleRun> rleEncode(std::span<const Code> values) {
  std::vector<RleRun> runs;
  for (std::uint64_t i = 0; i < values.size(); ++i) {
    if (runs.empty() || runs.back().value != values[i]) {
      runs.push_back({values[i], i, 1});
    } else {
      ++runs.back().length;
    }
  }
  return runs;
}

std::vector<Code> rleDecode(std::span<const RleRun> runs) {
  std::vector<Code> out;
  for (const auto& run : runs) {
    if (run.start != out.size()) throw FormatError("codec", "run start does not follow the previous run");
    out.insert(out.end(), run.length, run.value);
  }
  return out;
}

std::uint64_t rleSizeBits(std::uint64_t runs, std::uint64_t cardinality, std::uint64_t rows) {
  return runs * (bitWidth(cardinality) + 2ULL * bitWidth(rows));
}

std::uint64_t prefixSizeBits(std::span<const Code> block, std::uint64_t cardinality) {
  if (block.empty()) return 0;
  const std::uint64_t len = block.size();
  return bitWidth(len) + (len - leadingRun(block) + 1) * bitWidth(cardinality);
}

std::uint64_t sparseSizeBits(std::span<const Code> block, std::uint64_t cardinality) {
  if (block.empty()) return 0;
  const std::uint64_t len = block.size();
  return (len - blockMode(block).second + 1) * bitWidth(cardinality) + len;
}

std::uint64_t indirectSizeBits(std::span<const Code> block, std::uint64_t cardinality) {
  if (block.empty()) return 0;
  const std::uint64_t distinct = blockDictionary(block).size();
  return kIndirectHeaderBits + distinct * bitWidth(cardinality) + block.size() * bitWidth(distinct);
}

EncodedColumn encodeColumn(std::span<const Code> values, CodecId codec, std::uint64_t cardinality,
                           std::size_t blockSize) {
  checkBlockSize(blockSize);
  for (Code v : values) {
    if (v >= cardinality) throw std::invalid_argument("code " + std::to_string(v) + " >= cardinality");
  }
  const unsigned w = bitWidth(cardinality);
  BitWriter out;
  switch (codec) {
    case CodecId::rle: {
      const unsigned wn = bitWidth(values.size());
      for (const auto& run : rleEncode(values)) {
        out.put(run.value, w);
        out.put(run.start, wn);
        out.put(run.length - 1, wn);
      }
      break;
    }
    case CodecId::prefix:
      forEachBlock(values, blockSize, [&](std::span<const Code> block) {
        const auto l = leadingRun(block);
        out.put(l - 1, bitWidth(block.size()));
        out.put(block[0], w);
        for (std::size_t i = l; i < block.size(); ++i) out.put(block[i], w);
      });
      break;
    case CodecId::sparse:
      forEachBlock(values, blockSize, [&](std::span<const Code> block) {
        const Code mode = blockMode(block).first;
        out.put(mode, w);
        for (Code v : block) out.put(v != mode ? 1 : 0, 1);
        for (Code v : block) {
          if (v != mode) out.put(v, w);
        }
      });
      break;
    case CodecId::indirect:
      forEachBlock(values, blockSize, [&](std::span<const Code> block) {
        const auto dict = blockDictionary(block);
        const unsigned wd = bitWidth(dict.size());
        out.put(dict.size() - 1, kIndirectHeaderBits);
        for (Code v : dict) out.put(v, w);
        for (Code v : block) out.put(static_cast<std::uint64_t>(std::lower_bound(dict.begin(), dict.end(), v) - dict.begin()), wd);
      });
      break;
    default:
      throw std::invalid_argument("encodeColumn: codec '" + std::string(toString(codec)) + "' has no bit encoder");
  }
  EncodedColumn enc;
  enc.codec = codec;
  enc.rows = values.size();
  enc.cardinality = cardinality;
  enc.blockSize = blockSize;
  enc.bitCount = out.bitCount();
  enc.bytes = out.take();
  return enc;
}

std::vector<Code> decodeColumn(const EncodedColumn& enc) {
  checkBlockSize(enc.blockSize);
  const unsigned w = bitWidth(enc.cardinality);
  BitReader in(enc.bytes, enc.bitCount);
  std::vector<Code> out;
  out.reserve(enc.rows);
  auto checkCode = [&](std::uint64_t v) {
    if (v >= enc.cardinality) throw FormatError("codec", "decoded code out of range");
    return static_cast<Code>(v);
  };
  switch (enc.codec) {
    case CodecId::rle: {
      const unsigned wn = bitWidth(enc.rows);
      while (out.size() < enc.rows) {
        const Code v = checkCode(in.get(w));
        const auto start = in.get(wn);
        const auto len = in.get(wn) + 1;
        if (start != out.size() || len > enc.rows - out.size()) throw FormatError("codec", "inconsistent run");
        out.insert(out.end(), len, v);
      }
      break;
    }
    case CodecId::prefix:
      while (out.size() < enc.rows) {
        const std::size_t len = std::min<std::uint64_t>(enc.blockSize, enc.rows - out.size());
        const auto l = in.get(bitWidth(len)) + 1;
        if (l > len) throw FormatError("codec", "leading run longer than block");
        out.insert(out.end(), l, checkCode(in.get(w)));
        for (std::size_t i = l; i < len; ++i) out.push_back(checkCode(in.get(w)));
      }
      break;
    case CodecId::sparse:
      while (out.size() < enc.rows) {
        const std::size_t len = std::min<std::uint64_t>(enc.blockSize, enc.rows - out.size());
        const Code mode = checkCode(in.get(w));
        std::vector<bool> exception(len);
        for (std::size_t i = 0; i < len; ++i) exception[i] = in.get(1) != 0;
        for (std::size_t i = 0; i < len; ++i) out.push_back(exception[i] ? checkCode(in.get(w)) : mode);
      }
      break;
    case CodecId::indirect:
      while (out.size() < enc.rows) {
        const std::size_t len = std::min<std::uint64_t>(enc.blockSize, enc.rows - out.size());
        const std::size_t distinct = in.get(kIndirectHeaderBits) + 1;
        std::vector<Code> dict(distinct);
        for (auto& v : dict) v = checkCode(in.get(w));
        const unsigned wd = bitWidth(distinct);
        for (std::size_t i = 0; i < len; ++i) {
          const auto idx = in.get(wd);
          if (idx >= distinct) throw FormatError("codec", "dictionary index out of range");
          out.push_back(dict[idx]);
        }
      }
      break;
    default:
      throw std::invalid_argument("decodeColumn: codec '" + std::string(toString(enc.codec)) + "' has no bit decoder");
  }
  if (!in.exhausted()) throw FormatError("codec", "trailing bits");
  return out;
}

std::uint64_t columnSizeBits(std::span<const Code> values, CodecId codec, std::uint64_t cardinality,
                             std::size_t blockSize, const LzBackend* lz) {
  std::uint64_t bits = 0;
  switch (codec) {
    case CodecId::runCount: return rleEncode(values).size();
    case CodecId::rle: return rleSizeBits(rleEncode(values).size(), cardinality, values.size());
    case CodecId::prefix:
      forEachBlock(values, blockSize, [&](auto b) { bits += prefixSizeBits(b, cardinality); });
      return bits;
    case CodecId::sparse:
      forEachBlock(values, blockSize, [&](auto b) { bits += sparseSizeBits(b, cardinality); });
      return bits;
    case CodecId::indirect:
      forEachBlock(values, blockSize, [&](auto b) { bits += indirectSizeBits(b, cardinality); });
      return bits;
    case CodecId::lz: return 8 * lzSizeBytes(values, lz != nullptr ? *lz : defaultLzBackend());
  }
  throw std::invalid_argument("unknown codec");
}

std::vector<std::uint8_t> BundledLz::compress(std::span<const std::uint8_t> input) const {
  constexpr std::size_t kMinMatch = 4;
  constexpr std::size_t kWindow = 65535;
  constexpr unsigned kHashBits = 16;
  std::vector<std::uint8_t> out;
  putVarint(out, input.size());
  std::vector<std::int64_t> table(std::size_t{1} << kHashBits, -1);
  auto hashAt = [&](std::size_t i) {
    std::uint32_t v = static_cast<std::uint32_t>(input[i]) | static_cast<std::uint32_t>(input[i + 1]) << 8 |
                      static_cast<std::uint32_t>(input[i + 2]) << 16 | static_cast<std::uint32_t>(input[i + 3]) << 24;
    return (v * 2654435761U) >> (32 - kHashBits);
  };

  std::size_t literalStart = 0;
  std::size_t i = 0;
  while (i + kMinMatch <= input.size()) {
    const auto h = hashAt(i);
    const std::int64_t cand = table[h];
    table[h] = static_cast<std::int64_t>(i);
    if (cand >= 0 && i - static_cast<std::size_t>(cand) <= kWindow &&
        std::equal(input.begin() + cand, input.begin() + cand + kMinMatch, input.begin() + static_cast<std::ptrdiff_t>(i))) {
      std::size_t len = kMinMatch;
      while (i + len < input.size() && input[static_cast<std::size_t>(cand) + len] == input[i + len]) ++len;
      putVarint(out, i - literalStart);
      out.insert(out.end(), input.begin() + static_cast<std::ptrdiff_t>(literalStart), input.begin() + static_cast<std::ptrdiff_t>(i));
      putVarint(out, len - kMinMatch);
      const auto offset = static_cast<std::uint16_t>(i - static_cast<std::size_t>(cand));
      out.push_back(static_cast<std::uint8_t>(offset & 0xFF));
      out.push_back(static_cast<std::uint8_t>(offset >> 8));
      i += len;
      literalStart = i;
    } else {
      ++i;
    }
  }
  if (literalStart < input.size()) {
    putVarint(out, input.size() - literalStart);
    out.insert(out.end(), input.begin() + static_cast<std::ptrdiff_t>(literalStart), input.end());
  }
  return out;
}

std::vector<std::uint8_t> BundledLz::decompress(std::span<const std::uint8_t> input) const {
  std::size_t pos = 0;
  const auto total = getVarint(input, pos);
  if (total > (std::uint64_t{1} << 40)) throw FormatError("lz", "implausible length");
  std::vector<std::uint8_t> out;
  out.reserve(total);
  while (out.size() < total) {
    const auto literals = getVarint(input, pos);
    if (literals > input.size() - pos || literals > total - out.size()) throw FormatError("lz", "literal run overflows");
    out.insert(out.end(), input.begin() + static_cast<std::ptrdiff_t>(pos), input.begin() + static_cast<std::ptrdiff_t>(pos + literals));
    pos += literals;
    if (out.size() == total) break;
    const auto len = getVarint(input, pos) + 4;
    if (pos + 2 > input.size()) throw FormatError("lz", "truncated offset");
    const std::size_t offset = input[pos] | static_cast<std::size_t>(input[pos + 1]) << 8;
    pos += 2;
    if (offset == 0 || offset > out.size() || len > total - out.size()) throw FormatError("lz", "bad match");
    const std::size_t from = out.size() - offset;
    for (std::size_t k = 0; k < len; ++k) out.push_back(out[from + k]);
  }
  if (pos != input.size()) throw FormatError("lz", "trailing bytes");
  return out;
}

const LzBackend& defaultLzBackend() {
  static const BundledLz lz;
  return lz;
}

std::vector<std::uint8_t> codesToBytes(std::span<const Code> values) {
  std::vector<std::uint8_t> out(values.size() * 4);
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (unsigned b = 0; b < 4; ++b) out[4 * i + b] = static_cast<std::uint8_t>(values[i] >> (8 * b));
  }
  return out;
}

std::uint64_t lzSizeBytes(std::span<const Code> values, const LzBackend& backend) {
  return backend.compress(codesToBytes(values)).size();
}

CodecReport compressTable(const Table& table, std::span<const RowId> ordering, CodecId codec, std::size_t blockSize,
                          const LzBackend* lz) {
  auto report = emptyReport(table, ordering, codec, blockSize);
  const auto cols = static_cast<std::ptrdiff_t>(table.columnCount());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t c = 0; c < cols; ++c) {
    try {
      const auto values = orderedColumn(table, static_cast<std::size_t>(c), ordering);
      report.perColumnBits[c] = columnSizeBits(values, codec, table.cardinality(c), blockSize, lz);
    } catch (...) {
#pragma omp critical(rowreorder_codec_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  for (auto b : report.perColumnBits) report.totalBits += b;
  return report;
}

CodecReport compressTableSerial(const Table& table, std::span<const RowId> ordering, CodecId codec,
                                std::size_t blockSize, const LzBackend* lz) {
  auto report = emptyReport(table, ordering, codec, blockSize);
  for (std::size_t c = 0; c < table.columnCount(); ++c) {
    report.perColumnBits[c] = columnSizeBits(orderedColumn(table, c, ordering), codec, table.cardinality(c), blockSize, lz);
    report.totalBits += report.perColumnBits[c];
  }
  return report;
}

}  // namespace rowreorder
