#include "k2t/dac.h"

#include <string>

#include "k2t/error.h"

namespace k2t {

DacSequence::DacSequence(std::span<const std::uint64_t> values, unsigned chunk_width)
    : size_(values.size()), width_(chunk_width) {
  if (chunk_width == 0 || chunk_width > 64) throw InputError("dac: chunk width must be in [1, 64]");
  const std::uint64_t mask = chunk_width == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << chunk_width) - 1;

  // `rest` holds the not-yet-emitted high part of every value still alive at
  // the current level.
  std::vector<std::uint64_t> rest(values.begin(), values.end());
  while (!rest.empty()) {
    std::vector<std::uint64_t> chunks;
    std::vector<std::uint64_t> next;
    chunks.reserve(rest.size());
    BitBuilder more;
    for (std::uint64_t v : rest) {
      chunks.push_back(v & mask);
      const std::uint64_t high = chunk_width == 64 ? 0 : v >> chunk_width;
      more.push_back(high != 0);
      if (high != 0) next.push_back(high);
    }
    levels_.push_back(Level{PackedInts(chunks, chunk_width), BitSequence(std::move(more))});
    rest = std::move(next);
  }
}

std::uint64_t DacSequence::access(std::uint64_t i) const {
  if (i >= size_)
    throw RangeError("dac: index " + std::to_string(i) + " out of range [0, " + std::to_string(size_) + ")");
  std::uint64_t value = 0;
  unsigned shift = 0;
  for (const Level& lv : levels_) {
    value |= lv.chunks[i] << shift;
    if (!lv.more.get(i)) break;
    i = lv.more.rank1_unchecked(i) - 1;
    shift += width_;
  }
  return value;
}

std::uint64_t DacSequence::encoded_bits() const {
  std::uint64_t bits = 0;
  for (const Level& lv : levels_) bits += lv.chunks.size() * width_ + lv.more.size();
  return bits;
}

std::uint64_t DacSequence::size_bytes() const {
  std::uint64_t bytes = 0;
  for (const Level& lv : levels_) bytes += lv.chunks.payload_bytes() + lv.more.payload_bytes() + lv.more.directory_bytes();
  return bytes;
}

void DacSequence::serialize(BinaryWriter& out) const {
  out.u8(static_cast<std::uint8_t>(width_));
  out.u8(static_cast<std::uint8_t>(levels_.size()));
  for (const Level& lv : levels_) {
    lv.chunks.serialize(out);
    lv.more.serialize(out);
  }
}

DacSequence DacSequence::load(BinaryReader& in) {
  DacSequence d;
  d.width_ = in.u8();
  if (d.width_ == 0 || d.width_ > 64) throw FormatError("dac: bad chunk width");
  const unsigned nlevels = in.u8();
  if (nlevels > (64 + d.width_ - 1) / d.width_) throw FormatError("dac: too many levels");
  std::uint64_t expected = 0;
  for (unsigned l = 0; l < nlevels; ++l) {
    Level lv{PackedInts::load(in), BitSequence::load(in)};
    if (lv.chunks.width() != d.width_ || lv.chunks.size() != lv.more.size())
      throw FormatError("dac: level shape mismatch");
    if (l == 0) d.size_ = lv.chunks.size();
    else if (lv.chunks.size() != expected) throw FormatError("dac: level size does not match continuation bits");
    expected = lv.more.ones();
    d.levels_.push_back(std::move(lv));
  }
  if (expected != 0) throw FormatError("dac: dangling continuation bits");
  return d;
}

}  // namespace k2t
