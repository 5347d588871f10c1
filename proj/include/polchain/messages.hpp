#pragma once

#include <cstdint>
#include <stdexcept>

#include "polchain/codec.hpp"
#include "polchain/crypto.hpp"
#include "polchain/geo.hpp"

namespace polchain {

/// Domain-separation tags prefixed to every signed payload.
enum class Tag : std::uint8_t { Request = 0x01, Response = 0x02, Block = 0x03 };

inline constexpr std::size_t kRequestBodySize = 32 + 4 + 4 + 32 + 8;                // 80
inline constexpr std::size_t kRequestWireSize = kRequestBodySize + Signature::size;  // 144
inline constexpr std::size_t kResponseBodySize = kRequestWireSize + 32 + 4 + 4 + 8;  // 192
inline constexpr std::size_t kResponseWireSize = kResponseBodySize + Signature::size;  // 256

struct ProofRequest {
    PublicKey requester_pk;
    GeoLocation location;
    Digest prev_block_hash;
    std::uint64_t timestamp_ms = 0;
    Signature signature;

    bool operator==(const ProofRequest&) const = default;
};

/// A verified response is a proof-of-location.
struct ProofResponse {
    ProofRequest request;
    PublicKey responder_pk;
    GeoLocation location;
    std::uint64_t timestamp_ms = 0;
    Signature signature;

    bool operator==(const ProofResponse&) const = default;
};

struct ProofIdTag {};
using ProofId = FixedBytes<32, ProofIdTag>;

class SelfResponseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The 80 field bytes of a request: requester_pk, lat, lon, prev_block_hash,
/// timestamp_ms. Signature excluded.
Bytes encode_request(const ProofRequest& r);
/// Tag 0x01 followed by encode_request(r); the bytes that get signed.
Bytes request_signing_payload(const ProofRequest& r);
/// encode_request(r) followed by the signature (144 bytes).
Bytes encode_request_wire(const ProofRequest& r);
ProofRequest decode_request_wire(ByteView wire);

/// Embedded request wire (144), responder_pk, lat, lon, timestamp_ms.
Bytes encode_response(const ProofResponse& r);
Bytes response_signing_payload(const ProofResponse& r);
/// encode_response(r) followed by the signature (256 bytes).
Bytes encode_response_wire(const ProofResponse& r);
ProofResponse decode_response_wire(ByteView wire);

void write_request_wire(ByteWriter& w, const ProofRequest& r);
ProofRequest read_request_wire(ByteReader& rd);
void write_response_wire(ByteWriter& w, const ProofResponse& r);
ProofResponse read_response_wire(ByteReader& rd);

ProofRequest make_request(const PeerIdentity& id, const GeoLocation& loc, const Digest& tip,
                          std::uint64_t now_ms);
ProofResponse make_response(const ProofRequest& req, const PeerIdentity& id,
                            const GeoLocation& loc, std::uint64_t now_ms);

bool request_signature_valid(const ProofRequest& r);
/// Checks the response signature and the embedded request signature.
bool response_signatures_valid(const ProofResponse& r);

/// Identifier of a request: hash of its signing payload.
Digest request_id(const ProofRequest& r);

/// Hash over the signed content of both parties, signatures excluded:
/// tag 0x02, the 80 request field bytes, responder_pk, lat, lon, timestamp_ms.
/// Re-signing the same content therefore cannot mint a fresh id.
ProofId proof_id(const ProofResponse& p);

}  // namespace polchain
