#include "k2t/bit_sequence.h"

#include <bit>
#include <string>

namespace k2t {

namespace {

// Position of the j-th (1-based) set bit of `w`; requires popcount(w) >= j.
unsigned select_in_word(std::uint64_t w, std::uint64_t j) {
  for (std::uint64_t k = 1; k < j; ++k) w &= w - 1;
  return static_cast<unsigned>(std::countr_zero(w));
}

[[noreturn]] void out_of_range(std::uint64_t i, std::uint64_t n) {
  throw RangeError("bit position " + std::to_string(i) + " out of range [0, " +
                   std::to_string(n) + ")");
}

}  // namespace

BitSequence::BitSequence(const std::vector<bool>& bits) : size_(bits.size()) {
  words_.assign((size_ + 63) / 64, 0);
  for (std::uint64_t i = 0; i < size_; ++i)
    if (bits[i]) words_[i >> 6] |= std::uint64_t{1} << (i & 63);
  build_directory();
}

BitSequence::BitSequence(std::vector<std::uint64_t> words, std::uint64_t size)
    : words_(std::move(words)), size_(size) {
  words_.resize((size_ + 63) / 64, 0);
  if (size_ & 63) words_.back() &= (std::uint64_t{1} << (size_ & 63)) - 1;
  build_directory();
}

void BitSequence::build_directory() {
  const std::uint64_t nsb = (words_.size() + kWordsPerSuperblock - 1) / kWordsPerSuperblock;
  superblocks_.assign(nsb + 1, 0);
  hyperblocks_.assign(((nsb + 1) >> kSuperblocksPerHyperLog) + 1, 0);
  std::uint64_t total = 0;
  for (std::uint64_t sb = 0; sb <= nsb; ++sb) {
    const std::uint64_t hb = sb >> kSuperblocksPerHyperLog;
    if ((sb & ((std::uint64_t{1} << kSuperblocksPerHyperLog) - 1)) == 0) hyperblocks_[hb] = total;
    superblocks_[sb] = static_cast<std::uint32_t>(total - hyperblocks_[hb]);
    if (sb == nsb) break;
    const std::uint64_t end = std::min<std::uint64_t>(words_.size(), (sb + 1) * kWordsPerSuperblock);
    for (std::uint64_t w = sb * kWordsPerSuperblock; w < end; ++w) total += std::popcount(words_[w]);
  }
  ones_ = total;
}

bool BitSequence::access(std::uint64_t i) const {
  if (i >= size_) out_of_range(i, size_);
  return get(i);
}

std::uint64_t BitSequence::rank1_unchecked(std::uint64_t i) const {
  const std::uint64_t word = i >> 6;
  const std::uint64_t sb = word / kWordsPerSuperblock;
  std::uint64_t r = ones_before_superblock(sb);
  for (std::uint64_t w = sb * kWordsPerSuperblock; w < word; ++w) r += std::popcount(words_[w]);
  const unsigned bit = i & 63;
  const std::uint64_t mask = bit == 63 ? ~std::uint64_t{0} : (std::uint64_t{1} << (bit + 1)) - 1;
  return r + std::popcount(words_[word] & mask);
}

std::uint64_t BitSequence::rank1(std::uint64_t i) const {
  if (i >= size_) out_of_range(i, size_);
  return rank1_unchecked(i);
}

std::uint64_t BitSequence::rank0(std::uint64_t i) const { return i + 1 - rank1(i); }

std::int64_t BitSequence::select1(std::uint64_t j) const {
  if (j == 0) return -1;
  if (j > ones_) throw NotFoundError("select1: occurrence " + std::to_string(j) + " of " + std::to_string(ones_));
  // Last superblock whose preceding count is < j.
  std::uint64_t lo = 0, hi = superblocks_.size() - 1;
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (ones_before_superblock(mid) < j) lo = mid;
    else hi = mid;
  }
  std::uint64_t rest = j - ones_before_superblock(lo);
  for (std::uint64_t w = lo * kWordsPerSuperblock; w < words_.size(); ++w) {
    const std::uint64_t pc = std::popcount(words_[w]);
    if (rest <= pc) return static_cast<std::int64_t>(w * 64 + select_in_word(words_[w], rest));
    rest -= pc;
  }
  throw NotFoundError("select1: directory inconsistent");
}

std::int64_t BitSequence::select0(std::uint64_t j) const {
  if (j == 0) return -1;
  const std::uint64_t zeros = size_ - ones_;
  if (j > zeros) throw NotFoundError("select0: occurrence " + std::to_string(j) + " of " + std::to_string(zeros));
  auto zeros_before = [&](std::uint64_t sb) { return sb * kSuperblockBits - ones_before_superblock(sb); };
  std::uint64_t lo = 0, hi = superblocks_.size() - 1;
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (zeros_before(mid) < j) lo = mid;
    else hi = mid;
  }
  std::uint64_t rest = j - zeros_before(lo);
  for (std::uint64_t w = lo * kWordsPerSuperblock; w < words_.size(); ++w) {
    const std::uint64_t pc = 64 - std::popcount(words_[w]);
    if (rest <= pc) return static_cast<std::int64_t>(w * 64 + select_in_word(~words_[w], rest));
    rest -= pc;
  }
  throw NotFoundError("select0: directory inconsistent");
}

void BitSequence::serialize(BinaryWriter& out) const {
  out.u64(size_);
  out.words(words_);
}

BitSequence BitSequence::load(BinaryReader& in) {
  const std::uint64_t n = in.u64();
  auto words = in.words((n + 63) / 64);
  if ((n & 63) && (words.back() >> (n & 63)) != 0) throw FormatError("bit sequence: nonzero padding");
  return BitSequence(std::move(words), n);
}

}  // namespace k2t
