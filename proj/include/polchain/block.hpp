#pragma once

#include <vector>

#include "polchain/crypto.hpp"
#include "polchain/messages.hpp"

namespace polchain {

/// Signed batch of proofs-of-location. Proofs are kept sorted by proof_id so
/// the block hash does not depend on the order in which proofs arrived.
struct Block {
    std::vector<ProofResponse> proofs;
    PublicKey producer_pk;
    Digest prev_hash;
    Signature signature;

    bool operator==(const Block&) const = default;
};

/// What survives pruning: producer and back-link.
struct BlockHeader {
    Digest block_hash;
    PublicKey producer_pk;
    Digest prev_hash;

    bool operator==(const BlockHeader&) const = default;
};

/// Tag 0x03, u32 proof count, each proof's 256-byte wire form, producer_pk,
/// prev_hash. This is what the producer signs.
Bytes block_signing_payload(const Block& b);
/// block_signing_payload(b) followed by the 64-byte signature.
Bytes encode_block_wire(const Block& b);
Block decode_block_wire(ByteView wire);

/// Hash of the signing payload (signature excluded).
Digest block_hash(const Block& b);
BlockHeader header_of(const Block& b);

/// Sorts proofs canonically and signs.
Block make_block(std::vector<ProofResponse> proofs, const PeerIdentity& producer,
                 const Digest& prev_hash);

bool block_signature_valid(const Block& b);
/// Proofs non-empty, sorted by proof_id, pairwise distinct ids.
bool block_is_canonical(const Block& b);

void sort_canonical(std::vector<ProofResponse>& proofs);

}  // namespace polchain
