#include "ltescope/uper.hpp"

#include <bit>

namespace ltescope {

const char* to_string(DecodeErrorKind kind) {
  switch (kind) {
    case DecodeErrorKind::out_of_bits: return "out_of_bits";
    case DecodeErrorKind::bad_choice_index: return "bad_choice_index";
    case DecodeErrorKind::constraint_violation: return "constraint_violation";
    case DecodeErrorKind::unsupported_extension: return "unsupported_extension";
  }
  return "unknown";
}

namespace {

unsigned range_bit_width(std::int64_t lo, std::int64_t hi) {
  const auto range = static_cast<std::uint64_t>(hi - lo);  // hi-lo+1 values
  return range == 0 ? 0u : static_cast<unsigned>(std::bit_width(range));
}

}  // namespace

std::int64_t decode_constrained_int(BitReader& r, std::int64_t lo, std::int64_t hi) {
  const std::size_t at = r.bit_offset();
  const unsigned width = range_bit_width(lo, hi);
  if (width == 0) {
    return lo;
  }
  const auto raw = r.read_bits(width);
  if (raw > static_cast<std::uint64_t>(hi - lo)) {
    throw CodecFailure({at, DecodeErrorKind::constraint_violation});
  }
  return lo + static_cast<std::int64_t>(raw);
}

void encode_constrained_int(BitWriter& w, std::int64_t value, std::int64_t lo,
                            std::int64_t hi) {
  if (value < lo || value > hi) {
    throw CodecFailure({w.bit_size(), DecodeErrorKind::constraint_violation});
  }
  const unsigned width = range_bit_width(lo, hi);
  if (width > 0) {
    w.write_bits(static_cast<std::uint64_t>(value - lo), width);
  }
}

SequencePreamble decode_sequence_preamble(BitReader& r, bool has_extension_marker,
                                          unsigned optional_count) {
  SequencePreamble p;
  p.optional_count = optional_count;
  if (has_extension_marker) {
    p.extended = r.read_bit();
  }
  if (optional_count > 0) {
    p.presence = static_cast<std::uint32_t>(r.read_bits(optional_count));
  }
  return p;
}

void encode_sequence_preamble(BitWriter& w, bool has_extension_marker, bool extended,
                              std::uint32_t presence, unsigned optional_count) {
  if (has_extension_marker) {
    w.write_bit(extended);
  }
  if (optional_count > 0) {
    w.write_bits(presence, optional_count);
  }
}

std::size_t decode_length_determinant(BitReader& r) {
  const std::size_t at = r.bit_offset();
  if (!r.read_bit()) {
    return static_cast<std::size_t>(r.read_bits(7));
  }
  // 10xxxxxx (14-bit) and 11xxxxxx (fragmented) forms are outside the subset.
  throw CodecFailure({at, DecodeErrorKind::unsupported_extension});
}

void encode_length_determinant(BitWriter& w, std::size_t length) {
  if (length > 127) {
    throw CodecFailure({w.bit_size(), DecodeErrorKind::constraint_violation});
  }
  w.write_bit(false);
  w.write_bits(length, 7);
}

}  // namespace ltescope
