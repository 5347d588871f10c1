#include "polchain/messages.hpp"

namespace polchain {
namespace {

void write_request_fields(ByteWriter& w, const ProofRequest& r) {
    w.fixed(r.requester_pk);
    w.location(r.location);
    w.fixed(r.prev_block_hash);
    w.u64(r.timestamp_ms);
}

void write_response_fields(ByteWriter& w, const ProofResponse& r) {
    write_request_wire(w, r.request);
    w.fixed(r.responder_pk);
    w.location(r.location);
    w.u64(r.timestamp_ms);
}

}  // namespace

Bytes encode_request(const ProofRequest& r) {
    Bytes out;
    out.reserve(kRequestBodySize);
    ByteWriter w(out);
    write_request_fields(w, r);
    return out;
}

Bytes request_signing_payload(const ProofRequest& r) {
    Bytes out;
    out.reserve(1 + kRequestBodySize);
    ByteWriter w(out);
    w.u8(static_cast<std::uint8_t>(Tag::Request));
    write_request_fields(w, r);
    return out;
}

void write_request_wire(ByteWriter& w, const ProofRequest& r) {
    write_request_fields(w, r);
    w.fixed(r.signature);
}

ProofRequest read_request_wire(ByteReader& rd) {
    ProofRequest r;
    r.requester_pk = rd.fixed<PublicKey>();
    r.location = rd.location();
    r.prev_block_hash = rd.fixed<Digest>();
    r.timestamp_ms = rd.u64();
    r.signature = rd.fixed<Signature>();
    return r;
}

Bytes encode_request_wire(const ProofRequest& r) {
    Bytes out;
    out.reserve(kRequestWireSize);
    ByteWriter w(out);
    write_request_wire(w, r);
    return out;
}

ProofRequest decode_request_wire(ByteView wire) {
    ByteReader rd(wire);
    auto r = read_request_wire(rd);
    rd.expect_end();
    return r;
}

Bytes encode_response(const ProofResponse& r) {
    Bytes out;
    out.reserve(kResponseBodySize);
    ByteWriter w(out);
    write_response_fields(w, r);
    return out;
}

Bytes response_signing_payload(const ProofResponse& r) {
    Bytes out;
    out.reserve(1 + kResponseBodySize);
    ByteWriter w(out);
    w.u8(static_cast<std::uint8_t>(Tag::Response));
    write_response_fields(w, r);
    return out;
}

void write_response_wire(ByteWriter& w, const ProofResponse& r) {
    write_response_fields(w, r);
    w.fixed(r.signature);
}

ProofResponse read_response_wire(ByteReader& rd) {
    ProofResponse r;
    r.request = read_request_wire(rd);
    r.responder_pk = rd.fixed<PublicKey>();
    r.location = rd.location();
    r.timestamp_ms = rd.u64();
    r.signature = rd.fixed<Signature>();
    return r;
}

Bytes encode_response_wire(const ProofResponse& r) {
    Bytes out;
    out.reserve(kResponseWireSize);
    ByteWriter w(out);
    write_response_wire(w, r);
    return out;
}

ProofResponse decode_response_wire(ByteView wire) {
    ByteReader rd(wire);
    auto r = read_response_wire(rd);
    rd.expect_end();
    return r;
}

ProofRequest make_request(const PeerIdentity& id, const GeoLocation& loc, const Digest& tip,
                          std::uint64_t now_ms) {
    require_valid(loc);
    ProofRequest r;
    r.requester_pk = id.public_key;
    r.location = loc;
    r.prev_block_hash = tip;
    r.timestamp_ms = now_ms;
    r.signature = sign(request_signing_payload(r), id.private_key);
    return r;
}

ProofResponse make_response(const ProofRequest& req, const PeerIdentity& id,
                            const GeoLocation& loc, std::uint64_t now_ms) {
    if (id.public_key == req.requester_pk)
        throw SelfResponseError("a peer cannot answer its own proof request");
    require_valid(loc);
    ProofResponse r;
    r.request = req;
    r.responder_pk = id.public_key;
    r.location = loc;
    r.timestamp_ms = now_ms;
    r.signature = sign(response_signing_payload(r), id.private_key);
    return r;
}

bool request_signature_valid(const ProofRequest& r) {
    return verify(r.signature, request_signing_payload(r), r.requester_pk);
}

bool response_signatures_valid(const ProofResponse& r) {
    return request_signature_valid(r.request) &&
           verify(r.signature, response_signing_payload(r), r.responder_pk);
}

Digest request_id(const ProofRequest& r) { return hash(request_signing_payload(r)); }

ProofId proof_id(const ProofResponse& p) {
    Bytes buf;
    buf.reserve(1 + kRequestBodySize + 32 + 4 + 4 + 8);
    ByteWriter w(buf);
    w.u8(static_cast<std::uint8_t>(Tag::Response));
    write_request_fields(w, p.request);
    w.fixed(p.responder_pk);
    w.location(p.location);
    w.u64(p.timestamp_ms);
    return ProofId{hash(buf).bytes};
}

}  // namespace polchain
