#pragma once

#include "q2logic/scheduler.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace q2 {

// .q2l binary layout, little-endian throughout.
//
// Per bitstream: one 24-byte header followed by one 44-byte record per QPU.
//
// Header: magic "Q2LG" (4) | version u16 | reserved u16 | n_qubits u8 |
//         n_qpu u8 | n_sysqbits u8 | reserved u8 | rotation i16 |
//         reserved u16 | bitstream_index u32 | reserved u32
//
// Record: m00,m01,m10,m11 row-major as (re f32, im f32) (32) | opcode u8
//         (0 nop, 1 unary, 2 controlled) | target u8 | control u8 | flags u8 |
//         gate_id u32 | reserved u32
inline constexpr std::size_t kHeaderSize = 24;
inline constexpr std::size_t kRecordSize = 44;
inline constexpr std::uint16_t kFormatVersion = 1;
inline constexpr char kMagic[4] = {'Q', '2', 'L', 'G'};

class DecodeError : public std::runtime_error {
public:
    DecodeError(std::size_t offset, const std::string& message);

    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// Serialize plans for `cfg`. Matrices are truncated to single precision;
// output bytes are deterministic. NOP records carry the identity matrix.
std::vector<std::uint8_t> encode(const std::vector<BitstreamPlan>& plans,
                                 const SystemConfig& cfg);

struct DecodedProgram {
    SystemConfig config;
    std::vector<BitstreamPlan> plans;
};

// Inverse of encode. Window starts are reconstructed by accumulating
// rotations from the canonical mapping. All invariants are revalidated;
// reserved fields must be zero so every accepted stream re-encodes
// byte-exactly.
DecodedProgram decode(std::span<const std::uint8_t> bytes);

}  // namespace q2
