#include "polchain/block.hpp"

#include <algorithm>

namespace polchain {

Bytes block_signing_payload(const Block& b) {
    Bytes out;
    out.reserve(1 + 4 + b.proofs.size() * kResponseWireSize + 64);
    ByteWriter w(out);
    w.u8(static_cast<std::uint8_t>(Tag::Block));
    w.u32(static_cast<std::uint32_t>(b.proofs.size()));
    for (const auto& p : b.proofs) write_response_wire(w, p);
    w.fixed(b.producer_pk);
    w.fixed(b.prev_hash);
    return out;
}

Bytes encode_block_wire(const Block& b) {
    auto out = block_signing_payload(b);
    ByteWriter w(out);
    w.fixed(b.signature);
    return out;
}

Block decode_block_wire(ByteView wire) {
    ByteReader rd(wire);
    if (rd.u8() != static_cast<std::uint8_t>(Tag::Block)) throw DecodeError("not a block");
    const auto count = rd.u32();
    if (static_cast<std::size_t>(count) * kResponseWireSize > rd.remaining())
        throw DecodeError("proof count exceeds input");
    Block b;
    b.proofs.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) b.proofs.push_back(read_response_wire(rd));
    b.producer_pk = rd.fixed<PublicKey>();
    b.prev_hash = rd.fixed<Digest>();
    b.signature = rd.fixed<Signature>();
    rd.expect_end();
    return b;
}

Digest block_hash(const Block& b) { return hash(block_signing_payload(b)); }

BlockHeader header_of(const Block& b) { return {block_hash(b), b.producer_pk, b.prev_hash}; }

void sort_canonical(std::vector<ProofResponse>& proofs) {
    std::vector<std::pair<ProofId, ProofResponse>> keyed;
    keyed.reserve(proofs.size());
    for (auto& p : proofs) keyed.emplace_back(proof_id(p), std::move(p));
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    proofs.clear();
    for (auto& [id, p] : keyed) proofs.push_back(std::move(p));
}

Block make_block(std::vector<ProofResponse> proofs, const PeerIdentity& producer,
                 const Digest& prev_hash) {
    Block b;
    b.proofs = std::move(proofs);
    sort_canonical(b.proofs);
    b.producer_pk = producer.public_key;
    b.prev_hash = prev_hash;
    b.signature = sign(block_signing_payload(b), producer.private_key);
    return b;
}

bool block_signature_valid(const Block& b) {
    return verify(b.signature, block_signing_payload(b), b.producer_pk);
}

bool block_is_canonical(const Block& b) {
    if (b.proofs.empty()) return false;
    ProofId prev{};
    for (std::size_t i = 0; i < b.proofs.size(); ++i) {
        auto id = proof_id(b.proofs[i]);
        if (i > 0 && !(prev < id)) return false;
        prev = id;
    }
    return true;
}

}  // namespace polchain
