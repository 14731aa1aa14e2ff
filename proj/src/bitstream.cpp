#include "q2logic/bitstream.hpp"

#include <bit>
#include <cstring>

namespace q2 {

DecodeError::DecodeError(std::size_t offset, const std::string& message)
    : std::runtime_error(message + " (offset " + std::to_string(offset) + ")"),
      offset_(offset) {}

namespace {

void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v) { out.push_back(v); }

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    put_u16(out, static_cast<std::uint16_t>(v & 0xffff));
    put_u16(out, static_cast<std::uint16_t>(v >> 16));
}

void put_i16(std::vector<std::uint8_t>& out, std::int16_t v) {
    put_u16(out, static_cast<std::uint16_t>(v));
}

void put_f32(std::vector<std::uint8_t>& out, float v) {
    put_u32(out, std::bit_cast<std::uint32_t>(v));
}

void put_complex_f32(std::vector<std::uint8_t>& out, const cdouble& v) {
    put_f32(out, static_cast<float>(v.real()));
    put_f32(out, static_cast<float>(v.imag()));
}

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t offset() const { return pos_; }
    std::size_t remaining() const { return bytes_.size() - pos_; }

    void require(std::size_t count, const char* what) const {
        if (remaining() < count) {
            throw DecodeError(pos_, std::string("truncated stream: ") + what + " needs " +
                                        std::to_string(count) + " byte(s), " +
                                        std::to_string(remaining()) + " left");
        }
    }

    std::uint8_t u8() {
        require(1, "field");
        return bytes_[pos_++];
    }

    std::uint16_t u16() {
        require(2, "field");
        const std::uint16_t v =
            static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
        pos_ += 2;
        return v;
    }

    std::uint32_t u32() {
        const std::uint32_t lo = u16();
        const std::uint32_t hi = u16();
        return lo | (hi << 16);
    }

    std::int16_t i16() { return static_cast<std::int16_t>(u16()); }

    float f32() { return std::bit_cast<float>(u32()); }

    cdouble complex_f32() {
        const float re = f32();
        const float im = f32();
        return {static_cast<double>(re), static_cast<double>(im)};
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

bool is_identity_f32(const GateMatrix& m) {
    return m.m00 == cdouble{1.0, 0.0} && m.m01 == cdouble{0.0, 0.0} &&
           m.m10 == cdouble{0.0, 0.0} && m.m11 == cdouble{1.0, 0.0};
}

}  // namespace

std::vector<std::uint8_t> encode(const std::vector<BitstreamPlan>& plans,
                                 const SystemConfig& cfg) {
    cfg.validate();
    if (cfg.n_qubits > 255 || cfg.n_qpu > 255 || cfg.n_sysqbits > 255) {
        throw std::invalid_argument("config field exceeds the 8-bit encoding range");
    }

    std::vector<std::uint8_t> out;
    out.reserve(plans.size() * (kHeaderSize + cfg.n_qpu * kRecordSize));
    for (std::size_t i = 0; i < plans.size(); ++i) {
        const BitstreamPlan& plan = plans[i];
        if (static_cast<int>(plan.slots.size()) != cfg.n_qpu) {
            throw std::invalid_argument("plan " + std::to_string(i) + " has " +
                                        std::to_string(plan.slots.size()) + " slots, expected " +
                                        std::to_string(cfg.n_qpu));
        }
        if (plan.rotation_out <= -cfg.n_qubits || plan.rotation_out >= cfg.n_qubits) {
            throw std::invalid_argument("rotation out of range in plan " + std::to_string(i));
        }

        out.insert(out.end(), kMagic, kMagic + 4);
        put_u16(out, kFormatVersion);
        put_u16(out, 0);
        put_u8(out, static_cast<std::uint8_t>(cfg.n_qubits));
        put_u8(out, static_cast<std::uint8_t>(cfg.n_qpu));
        put_u8(out, static_cast<std::uint8_t>(cfg.n_sysqbits));
        put_u8(out, 0);
        put_i16(out, static_cast<std::int16_t>(plan.rotation_out));
        put_u16(out, 0);
        put_u32(out, static_cast<std::uint32_t>(i));
        put_u32(out, 0);

        for (const PlanSlot& slot : plan.slots) {
            const GateMatrix& m = slot.is_nop() ? GateMatrix::identity() : slot.matrix;
            put_complex_f32(out, m.m00);
            put_complex_f32(out, m.m01);
            put_complex_f32(out, m.m10);
            put_complex_f32(out, m.m11);
            put_u8(out, static_cast<std::uint8_t>(slot.kind));
            put_u8(out, slot.is_nop() ? 0 : static_cast<std::uint8_t>(slot.target_pos));
            put_u8(out, slot.kind == SlotKind::controlled
                            ? static_cast<std::uint8_t>(slot.control_pos)
                            : 0);
            put_u8(out, 0);  // flags
            put_u32(out, slot.is_nop() ? 0 : slot.gate_id);
            put_u32(out, 0);
        }
    }
    return out;
}

DecodedProgram decode(std::span<const std::uint8_t> bytes) {
    Reader reader(bytes);
    DecodedProgram result;
    bool have_config = false;
    int window_start = 0;

    while (reader.remaining() > 0) {
        const std::size_t header_offset = reader.offset();
        reader.require(kHeaderSize, "bitstream header");

        char magic[4];
        for (char& c : magic) c = static_cast<char>(reader.u8());
        if (std::memcmp(magic, kMagic, 4) != 0) {
            throw DecodeError(header_offset, "bad magic");
        }
        const std::uint16_t version = reader.u16();
        if (version != kFormatVersion) {
            throw DecodeError(header_offset + 4,
                              "unsupported format version " + std::to_string(version));
        }
        if (reader.u16() != 0) throw DecodeError(header_offset + 6, "reserved field not zero");
        const int n_qubits = reader.u8();
        const int n_qpu = reader.u8();
        const int n_sysqbits = reader.u8();
        if (reader.u8() != 0) throw DecodeError(header_offset + 11, "reserved field not zero");
        const int rotation = reader.i16();
        if (reader.u16() != 0) throw DecodeError(header_offset + 14, "reserved field not zero");
        const std::uint32_t index = reader.u32();
        if (reader.u32() != 0) throw DecodeError(header_offset + 20, "reserved field not zero");

        if (n_qubits < 1 || n_qpu < 1 || n_sysqbits < 1) {
            throw DecodeError(header_offset, "invalid system configuration in header");
        }
        if (!have_config) {
            result.config.n_qubits = n_qubits;
            result.config.n_qpu = n_qpu;
            result.config.n_sysqbits = n_sysqbits;
            have_config = true;
        } else if (n_qubits != result.config.n_qubits || n_qpu != result.config.n_qpu ||
                   n_sysqbits != result.config.n_sysqbits) {
            throw DecodeError(header_offset, "inconsistent system configuration across headers");
        }
        if (index != result.plans.size()) {
            throw DecodeError(header_offset + 16,
                              "bitstream index " + std::to_string(index) + " out of sequence");
        }
        if (rotation <= -n_qubits || rotation >= n_qubits) {
            throw DecodeError(header_offset + 12, "rotation out of range");
        }

        BitstreamPlan plan;
        plan.window_start = window_start;
        plan.rotation_out = rotation;
        plan.slots.reserve(n_qpu);
        for (int q = 0; q < n_qpu; ++q) {
            const std::size_t record_offset = reader.offset();
            reader.require(kRecordSize, "QPU record");
            PlanSlot slot;
            slot.matrix.m00 = reader.complex_f32();
            slot.matrix.m01 = reader.complex_f32();
            slot.matrix.m10 = reader.complex_f32();
            slot.matrix.m11 = reader.complex_f32();
            const std::uint8_t opcode = reader.u8();
            slot.target_pos = reader.u8();
            slot.control_pos = reader.u8();
            const std::uint8_t flags = reader.u8();
            slot.gate_id = reader.u32();
            const std::uint32_t reserved = reader.u32();

            if (opcode > 2) {
                throw DecodeError(record_offset + 32,
                                  "invalid opcode " + std::to_string(opcode));
            }
            slot.kind = static_cast<SlotKind>(opcode);
            if (flags != 0) throw DecodeError(record_offset + 35, "flags not zero");
            if (reserved != 0) throw DecodeError(record_offset + 40, "reserved field not zero");
            if (slot.is_nop()) {
                if (!is_identity_f32(slot.matrix)) {
                    throw DecodeError(record_offset, "NOP record without identity matrix");
                }
                if (slot.target_pos != 0 || slot.control_pos != 0 || slot.gate_id != 0) {
                    throw DecodeError(record_offset + 33, "NOP record with nonzero operands");
                }
            } else {
                const int max_target = std::min(n_sysqbits, n_qubits);
                if (slot.target_pos >= max_target) {
                    throw DecodeError(record_offset + 33,
                                      "target position " + std::to_string(slot.target_pos) +
                                          " outside the window of width " +
                                          std::to_string(max_target));
                }
                if (slot.kind == SlotKind::controlled && slot.control_pos >= n_qubits) {
                    throw DecodeError(record_offset + 34, "control position out of range");
                }
                if (slot.kind == SlotKind::unary && slot.control_pos != 0) {
                    throw DecodeError(record_offset + 34, "unary record with control set");
                }
            }
            plan.slots.push_back(std::move(slot));
        }
        result.plans.push_back(std::move(plan));
        window_start = ((window_start + rotation) % n_qubits + n_qubits) % n_qubits;
    }

    if (!have_config) {
        throw DecodeError(0, "empty stream");
    }
    return result;
}

}  // namespace q2
