#include "k2t/packed_ints.h"

#include "k2t/error.h"

namespace k2t {

namespace {
std::uint64_t low_mask(unsigned width) {
  return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
}
}  // namespace

PackedInts::PackedInts(std::span<const std::uint64_t> values, unsigned width)
    : size_(values.size()), width_(width) {
  if (width == 0 || width > 64) throw InputError("packed ints: width must be in [1, 64]");
  words_.assign((size_ * width_ + 63) / 64, 0);
  const std::uint64_t mask = low_mask(width_);
  for (std::uint64_t i = 0; i < size_; ++i) {
    const std::uint64_t v = values[i];
    if (v & ~mask) throw InputError("packed ints: value does not fit width");
    const std::uint64_t bit = i * width_;
    const unsigned off = bit & 63;
    words_[bit >> 6] |= v << off;
    if (off + width_ > 64) words_[(bit >> 6) + 1] |= v >> (64 - off);
  }
}

std::uint64_t PackedInts::operator[](std::uint64_t i) const {
  const std::uint64_t bit = i * width_;
  const unsigned off = bit & 63;
  std::uint64_t v = words_[bit >> 6] >> off;
  if (off + width_ > 64) v |= words_[(bit >> 6) + 1] << (64 - off);
  return v & low_mask(width_);
}

void PackedInts::serialize(BinaryWriter& out) const {
  out.u8(static_cast<std::uint8_t>(width_));
  out.u64(size_);
  out.words(words_);
}

PackedInts PackedInts::load(BinaryReader& in) {
  PackedInts p;
  p.width_ = in.u8();
  if (p.width_ == 0 || p.width_ > 64) throw FormatError("packed ints: bad width");
  p.size_ = in.u64();
  if (p.size_ > in.remaining() * 8 / p.width_ + 1) throw FormatError("packed ints: truncated");
  p.words_ = in.words((p.size_ * p.width_ + 63) / 64);
  return p;
}

}  // namespace k2t
