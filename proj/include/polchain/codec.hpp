#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>

#include "polchain/crypto.hpp"
#include "polchain/geo.hpp"

namespace polchain {

class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Big-endian, fixed-width, no framing.
class ByteWriter {
public:
    explicit ByteWriter(Bytes& out) : out_(out) {}

    void u8(std::uint8_t v) { out_.push_back(v); }
    void u32(std::uint32_t v) {
        for (int s = 24; s >= 0; s -= 8) out_.push_back(static_cast<std::uint8_t>(v >> s));
    }
    void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
    void u64(std::uint64_t v) {
        for (int s = 56; s >= 0; s -= 8) out_.push_back(static_cast<std::uint8_t>(v >> s));
    }
    void raw(ByteView b) { out_.insert(out_.end(), b.begin(), b.end()); }
    template <std::size_t N, typename Tag>
    void fixed(const FixedBytes<N, Tag>& v) { raw(v.view()); }
    void location(const GeoLocation& loc) {
        i32(loc.lat_microdeg);
        i32(loc.lon_microdeg);
    }

private:
    Bytes& out_;
};

class ByteReader {
public:
    explicit ByteReader(ByteView in) : in_(in) {}

    std::uint8_t u8() { return take(1)[0]; }
    std::uint32_t u32() {
        auto b = take(4);
        std::uint32_t v = 0;
        for (auto x : b) v = v << 8 | x;
        return v;
    }
    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
    std::uint64_t u64() {
        auto b = take(8);
        std::uint64_t v = 0;
        for (auto x : b) v = v << 8 | x;
        return v;
    }
    template <typename Fixed>
    Fixed fixed() {
        Fixed v;
        auto b = take(Fixed::size);
        std::copy(b.begin(), b.end(), v.bytes.begin());
        return v;
    }
    GeoLocation location() {
        GeoLocation loc;
        loc.lat_microdeg = i32();
        loc.lon_microdeg = i32();
        return loc;
    }
    ByteView take(std::size_t n) {
        if (in_.size() - pos_ < n) throw DecodeError("truncated input");
        auto v = in_.subspan(pos_, n);
        pos_ += n;
        return v;
    }
    std::size_t remaining() const { return in_.size() - pos_; }
    void expect_end() const {
        if (pos_ != in_.size()) throw DecodeError("trailing bytes");
    }

private:
    ByteView in_;
    std::size_t pos_ = 0;
};

}  // namespace polchain
