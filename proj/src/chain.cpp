#include "polchain/chain.hpp"

#include <algorithm>

namespace polchain {

AppendResult append(ChainStore& store, const Block& b, const ValidationContext& ctx) {
    AppendResult result;
    result.block_hash = block_hash(b);
    if (store.contains(result.block_hash)) {
        result.status = AppendStatus::AlreadyKnown;
        return result;
    }
    const auto verdict = verify_block(b, ctx);
    if (!verdict.accepted()) {
        result.status = AppendStatus::Rejected;
        result.reason = verdict.reason;
        result.trigger_sync = verdict.trigger_sync;
        return result;
    }
    result.status =
        verdict.outcome == Outcome::Fork ? AppendStatus::ForkRetained : AppendStatus::Accepted;
    const auto old_head = store.head();
    store.insert(b, result.block_hash);
    store.set_head(choose_head(store));
    result.head_changed = store.head() != old_head;
    if (store.params().prune) store.prune();
    return result;
}

std::vector<AppendResult> ingest(ChainStore& store, Block b, OrphanPool& orphans,
                                 const ContextFactory& make_ctx) {
    std::vector<AppendResult> results;
    auto r = append(store, b, make_ctx(store));
    results.push_back(r);
    if (r.status == AppendStatus::Rejected && r.trigger_sync) {
        const auto h = r.block_hash;
        const bool parked = std::any_of(orphans.blocks.begin(), orphans.blocks.end(),
                                        [&](const Block& o) { return block_hash(o) == h; });
        if (!parked) {
            if (orphans.blocks.size() >= orphans.capacity) orphans.blocks.erase(orphans.blocks.begin());
            orphans.blocks.push_back(std::move(b));
        }
        return results;
    }
    if (!r.stored()) return results;

    bool progress = true;
    while (progress) {
        progress = false;
        for (std::size_t i = 0; i < orphans.blocks.size(); ++i) {
            if (!store.contains(orphans.blocks[i].prev_hash)) continue;
            Block o = std::move(orphans.blocks[i]);
            orphans.blocks.erase(orphans.blocks.begin() + static_cast<std::ptrdiff_t>(i));
            auto orr = append(store, o, make_ctx(store));
            results.push_back(orr);
            progress = true;
            break;
        }
    }
    return results;
}

std::vector<AppendResult> sync(ChainStore& local, const std::vector<Block>& remote_view,
                               const ContextFactory& make_ctx) {
    OrphanPool pool;
    pool.capacity = remote_view.size() + 1;
    std::vector<AppendResult> results;
    for (const auto& b : remote_view) {
        auto rs = ingest(local, b, pool, make_ctx);
        results.insert(results.end(), rs.begin(), rs.end());
    }
    return results;
}

std::optional<Block> assemble_block(const std::vector<ProofResponse>& pending,
                                    const PeerIdentity& id, const ChainStore& store) {
    std::vector<ProofResponse> chosen;
    std::vector<ProofId> seen;
    const auto& head = store.head();
    for (const auto& p : pending) {
        const auto pid = proof_id(p);
        if (std::find(seen.begin(), seen.end(), pid) != seen.end()) continue;
        if (store.branch_contains_proof(head, pid)) continue;
        if (!anchor_in_window(store, head, p.request.prev_block_hash)) continue;
        seen.push_back(pid);
        chosen.push_back(p);
    }
    if (chosen.empty()) return std::nullopt;
    return make_block(std::move(chosen), id, head);
}

Bytes dump_chain(const ChainStore& store) {
    Bytes out;
    ByteWriter w(out);
    for (const auto& b : store.branch_blocks(store.head())) {
        const auto wire = encode_block_wire(b);
        w.u32(static_cast<std::uint32_t>(wire.size()));
        w.raw(wire);
    }
    return out;
}

ValidationContext neutral_context(const ChainStore& store, RangeParams range) {
    ValidationContext ctx;
    ctx.chain_head = store.head();
    ctx.chain_view = &store;
    ctx.range = range;
    return ctx;
}

ChainStore load_chain(ByteView dump, ChainParams params, RangeParams range) {
    ChainStore store(params);
    ByteReader rd(dump);
    std::vector<Block> blocks;
    while (rd.remaining() > 0) {
        const auto len = rd.u32();
        blocks.push_back(decode_block_wire(rd.take(len)));
    }
    if (blocks.empty()) return store;
    // Dumps of pruned stores start above genesis and cannot be re-validated.
    if (blocks.front().prev_hash != store.genesis())
        throw DecodeError("chain dump does not start at genesis");
    for (const auto& b : blocks) {
        auto r = append(store, b, neutral_context(store, range));
        if (!r.stored()) throw DecodeError("invalid block in chain dump");
    }
    return store;
}

}  // namespace polchain
