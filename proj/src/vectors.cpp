#include "polchain/vectors.hpp"

#include "polchain/block.hpp"
#include "polchain/messages.hpp"

namespace polchain {
namespace {

PeerIdentity identity_from_byte(std::uint8_t b) {
    Seed s;
    s.bytes.fill(b);
    return generate_identity(s);
}

template <typename T>
Bytes bytes_of(const T& v) {
    return Bytes(v.bytes.begin(), v.bytes.end());
}

}  // namespace

std::vector<GoldenVector> golden_vectors() {
    const auto requester = identity_from_byte(0x01);
    const auto responder = identity_from_byte(0x02);
    const auto producer = identity_from_byte(0x03);
    const auto genesis = hash({});

    const auto req = make_request(requester, GeoLocation{44'801'500, 10'327'900}, genesis,
                                  1'700'000'000'000ULL);
    const auto res = make_response(req, responder, GeoLocation{44'801'600, 10'328'000},
                                   1'700'000'000'250ULL);
    const auto blk = make_block({res}, producer, genesis);

    return {
        {"genesis_digest", bytes_of(genesis)},
        {"requester_pk", bytes_of(requester.public_key)},
        {"responder_pk", bytes_of(responder.public_key)},
        {"producer_pk", bytes_of(producer.public_key)},
        {"request_signing_payload", request_signing_payload(req)},
        {"request_wire", encode_request_wire(req)},
        {"request_id", bytes_of(request_id(req))},
        {"response_signing_payload", response_signing_payload(res)},
        {"response_wire", encode_response_wire(res)},
        {"proof_id", bytes_of(proof_id(res))},
        {"block_signing_payload", block_signing_payload(blk)},
        {"block_wire", encode_block_wire(blk)},
        {"block_hash", bytes_of(block_hash(blk))},
    };
}

}  // namespace polchain
