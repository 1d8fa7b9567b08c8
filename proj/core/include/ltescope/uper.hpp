// Bit-level engine for ASN.1 unaligned PER (X.691 subset).
//
// Multi-bit fields use big-endian bit order: the first bit read from the
// stream is the most significant bit of the returned value. Only the
// encoding forms needed by the Rel-8 RRC subset are implemented: constrained
// whole numbers, sequence preambles, and the single-byte unconstrained
// length form (< 128). Fragmented lengths are rejected.

#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <span>
#include <variant>
#include <vector>

namespace ltescope {

enum class DecodeErrorKind {
  out_of_bits,
  bad_choice_index,
  constraint_violation,
  unsupported_extension,
};

const char* to_string(DecodeErrorKind kind);

struct DecodeError {
  std::size_t bit_offset = 0;
  DecodeErrorKind kind = DecodeErrorKind::out_of_bits;

  bool operator==(const DecodeError&) const = default;
};

/// Every decoder either returns a value or exactly one DecodeError.
template <typename T>
using DecodeResult = std::variant<T, DecodeError>;

template <typename T>
bool decode_ok(const DecodeResult<T>& r) {
  return std::holds_alternative<T>(r);
}

// Thrown by the primitives below (and by encoders on constraint violations);
// the message-level decoders catch it and surface a DecodeResult.
class CodecFailure : public std::exception {
 public:
  explicit CodecFailure(DecodeError err) : err_(err) {}
  const DecodeError& error() const noexcept { return err_; }
  const char* what() const noexcept override { return to_string(err_.kind); }

 private:
  DecodeError err_;
};

class BitReader {
 public:
  BitReader() = default;
  explicit BitReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::size_t bit_offset() const { return pos_; }
  std::size_t bit_size() const { return data_.size() * 8; }
  std::size_t bits_remaining() const { return bit_size() - pos_; }

  bool read_bit() {
    if (pos_ >= bit_size()) {
      throw CodecFailure({pos_, DecodeErrorKind::out_of_bits});
    }
    const bool bit = (data_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1;
    ++pos_;
    return bit;
  }

  /// Reads `count` bits (0..64), MSB first.
  std::uint64_t read_bits(unsigned count) {
    if (count > bits_remaining()) {
      throw CodecFailure({pos_, DecodeErrorKind::out_of_bits});
    }
    std::uint64_t value = 0;
    for (unsigned i = 0; i < count; ++i) {
      value = (value << 1) | ((data_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1);
      ++pos_;
    }
    return value;
  }

  void skip_bits(std::size_t count) {
    if (count > bits_remaining()) {
      throw CodecFailure({pos_, DecodeErrorKind::out_of_bits});
    }
    pos_ += count;
  }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

class BitWriter {
 public:
  std::size_t bit_size() const { return nbits_; }

  void write_bit(bool bit) {
    if ((nbits_ & 7) == 0) {
      bytes_.push_back(0);
    }
    if (bit) {
      bytes_.back() |= static_cast<std::uint8_t>(1u << (7 - (nbits_ & 7)));
    }
    ++nbits_;
  }

  /// Writes the low `count` bits of `value`, MSB first.
  void write_bits(std::uint64_t value, unsigned count) {
    for (unsigned i = count; i > 0; --i) {
      write_bit((value >> (i - 1)) & 1);
    }
  }

  /// Zero-pads to a byte boundary and returns the buffer.
  std::vector<std::uint8_t> finish() {
    nbits_ = bytes_.size() * 8;
    return std::move(bytes_);
  }

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t nbits_ = 0;
};

/// Constrained whole number over [lo, hi]. Reads ceil(log2(hi-lo+1)) bits
/// when hi > lo and zero bits when lo == hi. Throws CodecFailure with
/// constraint_violation when the raw value exceeds hi.
std::int64_t decode_constrained_int(BitReader& r, std::int64_t lo, std::int64_t hi);
void encode_constrained_int(BitWriter& w, std::int64_t value, std::int64_t lo, std::int64_t hi);

struct SequencePreamble {
  bool extended = false;
  std::uint32_t presence = 0;  // bit (count-1-i) holds field i, declaration order
  unsigned optional_count = 0;

  bool present(unsigned field_index) const {
    return (presence >> (optional_count - 1 - field_index)) & 1;
  }
};

/// Reads the extension bit (if the sequence is marked extensible) followed by
/// `optional_count` presence bits in declaration order.
SequencePreamble decode_sequence_preamble(BitReader& r, bool has_extension_marker,
                                          unsigned optional_count);
void encode_sequence_preamble(BitWriter& w, bool has_extension_marker, bool extended,
                              std::uint32_t presence, unsigned optional_count);

/// Unconstrained length determinant, single-byte form only (0..127). The
/// 14-bit and fragmented forms are rejected with unsupported_extension.
std::size_t decode_length_determinant(BitReader& r);
void encode_length_determinant(BitWriter& w, std::size_t length);

}  // namespace ltescope
