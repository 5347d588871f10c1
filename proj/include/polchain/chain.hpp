#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "polchain/block.hpp"
#include "polchain/chain_store.hpp"
#include "polchain/validation.hpp"

namespace polchain {

enum class AppendStatus { Accepted, ForkRetained, Rejected, AlreadyKnown };

struct AppendResult {
    AppendStatus status = AppendStatus::Rejected;
    std::optional<RejectReason> reason;
    /// Parent unknown: the caller should synchronise with the sender.
    bool trigger_sync = false;
    bool head_changed = false;
    Digest block_hash;

    bool stored() const {
        return status == AppendStatus::Accepted || status == AppendStatus::ForkRetained;
    }
};

/// Validates b against ctx; stores it and re-runs fork-choice on success.
/// Prunes afterwards when the store has pruning enabled.
AppendResult append(ChainStore& store, const Block& b, const ValidationContext& ctx);

/// Builds a context for the store's current state. Used where several blocks
/// are applied in a row and the head moves between them.
using ContextFactory = std::function<ValidationContext(const ChainStore&)>;

/// Blocks waiting for their parent.
struct OrphanPool {
    std::vector<Block> blocks;
    std::size_t capacity = 512;
};

/// append(), parking blocks whose parent is unknown and re-trying parked
/// blocks after every successful append. Results cover b and any orphans it
/// connected, in application order.
std::vector<AppendResult> ingest(ChainStore& store, Block b, OrphanPool& orphans,
                                 const ContextFactory& make_ctx);

/// Applies a remote view (parents before children is typical but not
/// required). Invalid blocks are rejected individually; the rest proceeds.
std::vector<AppendResult> sync(ChainStore& local, const std::vector<Block>& remote_view,
                               const ContextFactory& make_ctx);

/// Every pending proof not yet confirmed on the head branch and still anchored
/// within the latest T blocks, signed into a block on head. Empty when nothing
/// qualifies.
std::optional<Block> assemble_block(const std::vector<ProofResponse>& pending,
                                    const PeerIdentity& id, const ChainStore& store);

/// Main branch, genesis side first: u32 big-endian length then the block wire
/// bytes, repeated. Pruned blocks cannot be dumped; the dump starts after them.
Bytes dump_chain(const ChainStore& store);
/// Rebuilds a store by appending each dumped block with a neutral context.
ChainStore load_chain(ByteView dump, ChainParams params, RangeParams range = {});

/// Context carrying only what block validation needs from a peer that is not
/// named in any of the proofs.
ValidationContext neutral_context(const ChainStore& store, RangeParams range = {});

}  // namespace polchain
