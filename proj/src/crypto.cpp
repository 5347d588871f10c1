#include "polchain/crypto.hpp"

#include <sodium.h>

#include <memory>
#include <stdexcept>
#include <unordered_map>

namespace polchain {
namespace {

void ensure_sodium() {
    static const int rc = sodium_init();
    if (rc < 0) throw std::runtime_error("libsodium initialisation failed");
}

struct Memo {
    std::unordered_map<std::string, bool> verified;
    std::unordered_map<std::string, Digest> hashed;
};

thread_local std::unique_ptr<Memo> tl_memo;

std::string as_key(ByteView v) { return std::string(reinterpret_cast<const char*>(v.data()), v.size()); }

}  // namespace

PeerIdentity generate_identity(const Seed& seed) {
    ensure_sodium();
    PeerIdentity id;
    crypto_sign_seed_keypair(id.public_key.bytes.data(), id.private_key.bytes.data(),
                             seed.bytes.data());
    return id;
}

PeerIdentity random_identity() {
    ensure_sodium();
    Seed seed;
    randombytes_buf(seed.bytes.data(), seed.bytes.size());
    auto id = generate_identity(seed);
    sodium_memzero(seed.bytes.data(), seed.bytes.size());
    return id;
}

Signature sign(ByteView payload, const SecretKey& key) {
    ensure_sodium();
    Signature sig;
    crypto_sign_detached(sig.bytes.data(), nullptr, payload.data(), payload.size(),
                         key.bytes.data());
    return sig;
}

bool verify(const Signature& sig, ByteView payload, const PublicKey& pk) {
    ensure_sodium();
    auto* cache = tl_memo ? &tl_memo->verified : nullptr;
    std::string key;
    if (cache) {
        key.reserve(sig.bytes.size() + pk.bytes.size() + payload.size());
        key.append(reinterpret_cast<const char*>(sig.bytes.data()), sig.bytes.size());
        key.append(reinterpret_cast<const char*>(pk.bytes.data()), pk.bytes.size());
        key.append(reinterpret_cast<const char*>(payload.data()), payload.size());
        if (auto it = cache->find(key); it != cache->end()) return it->second;
    }
    const bool ok = crypto_sign_verify_detached(sig.bytes.data(), payload.data(), payload.size(),
                                                pk.bytes.data()) == 0;
    if (cache) cache->emplace(std::move(key), ok);
    return ok;
}

Digest hash(ByteView payload) {
    ensure_sodium();
    auto compute = [&] {
        Digest d;
        crypto_hash_sha256(d.bytes.data(), payload.data(), payload.size());
        return d;
    };
    if (!tl_memo) return compute();
    auto key = as_key(payload);
    if (auto it = tl_memo->hashed.find(key); it != tl_memo->hashed.end()) return it->second;
    const auto d = compute();
    tl_memo->hashed.emplace(std::move(key), d);
    return d;
}

std::string to_hex(ByteView bytes) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) throw std::invalid_argument("hex string has odd length");
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::invalid_argument("invalid hex character");
    };
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
    return out;
}

ScopedCryptoCache::ScopedCryptoCache() : owner_(!tl_memo) {
    if (owner_) tl_memo = std::make_unique<Memo>();
}

ScopedCryptoCache::~ScopedCryptoCache() {
    if (owner_) tl_memo.reset();
}

}  // namespace polchain
