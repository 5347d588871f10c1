#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace polchain {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// Fixed-size byte string. The tag keeps keys, digests and signatures from
/// being mixed up even when their sizes coincide.
template <std::size_t N, typename Tag>
struct FixedBytes {
    static constexpr std::size_t size = N;
    std::array<std::uint8_t, N> bytes{};

    auto operator<=>(const FixedBytes&) const = default;
    bool operator==(const FixedBytes&) const = default;

    ByteView view() const { return {bytes.data(), bytes.size()}; }
    bool is_zero() const {
        for (auto b : bytes)
            if (b != 0) return false;
        return true;
    }
};

struct PublicKeyTag {};
struct SecretKeyTag {};
struct SeedTag {};
struct DigestTag {};
struct SignatureTag {};

using PublicKey = FixedBytes<32, PublicKeyTag>;
using SecretKey = FixedBytes<64, SecretKeyTag>;
using Seed = FixedBytes<32, SeedTag>;
using Digest = FixedBytes<32, DigestTag>;
using Signature = FixedBytes<64, SignatureTag>;

struct FixedBytesHash {
    template <std::size_t N, typename Tag>
    std::size_t operator()(const FixedBytes<N, Tag>& v) const noexcept {
        std::size_t h;
        std::memcpy(&h, v.bytes.data(), sizeof(h));
        return h;
    }
};

/// A peer's key pair. The public half is the peer's network identifier.
struct PeerIdentity {
    PublicKey public_key;
    SecretKey private_key;
};

/// Ed25519 key pair derived deterministically from a 32-byte seed.
PeerIdentity generate_identity(const Seed& seed);
/// Key pair from the system CSPRNG.
PeerIdentity random_identity();

Signature sign(ByteView payload, const SecretKey& key);
bool verify(const Signature& sig, ByteView payload, const PublicKey& pk);

/// SHA-256.
Digest hash(ByteView payload);

std::string to_hex(ByteView bytes);
template <std::size_t N, typename Tag>
std::string to_hex(const FixedBytes<N, Tag>& v) {
    return to_hex(v.view());
}
/// Throws std::invalid_argument on odd length or non-hex characters.
Bytes from_hex(std::string_view hex);

/// While alive, memoizes verify() and hash() on the calling thread. Both are
/// pure, so this changes cost only, never outcomes. Nested scopes share the
/// outermost cache.
class ScopedCryptoCache {
public:
    ScopedCryptoCache();
    ~ScopedCryptoCache();
    ScopedCryptoCache(const ScopedCryptoCache&) = delete;
    ScopedCryptoCache& operator=(const ScopedCryptoCache&) = delete;

private:
    bool owner_;
};

}  // namespace polchain

template <std::size_t N, typename Tag>
struct std::hash<polchain::FixedBytes<N, Tag>> {
    std::size_t operator()(const polchain::FixedBytes<N, Tag>& v) const noexcept {
        return polchain::FixedBytesHash{}(v);
    }
};
