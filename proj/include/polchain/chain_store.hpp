#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "polchain/block.hpp"

namespace polchain {

class MissingBodyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownBlockError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

struct ChainParams {
    /// Stake window T. Pruning keeps bodies for the latest 2T heights.
    std::uint32_t window = 5;
    /// Prune automatically after every head change.
    bool prune = false;
};

struct ChainEntry {
    BlockHeader header;
    std::optional<Block> body;
    std::uint64_t height = 0;
};

/// Proof appearances (as requester or responder) per peer within a window.
using StakeTable = std::map<PublicKey, std::uint64_t>;

/// Block tree rooted at a virtual genesis whose digest is hash(""). Holds full
/// bodies or, once pruned, headers. Not thread-safe: one writer, and readers
/// must not overlap with mutation.
class ChainStore {
public:
    explicit ChainStore(ChainParams params = {});

    const ChainParams& params() const { return params_; }
    const Digest& genesis() const { return genesis_; }
    const Digest& head() const { return head_; }
    std::uint64_t head_height() const { return height_of(head_); }

    bool contains(const Digest& h) const { return entries_.contains(h); }
    const ChainEntry* find(const Digest& h) const;
    /// Throws UnknownBlockError.
    const ChainEntry& at(const Digest& h) const;
    std::uint64_t height_of(const Digest& h) const { return at(h).height; }
    const std::vector<Digest>& children(const Digest& h) const;
    std::size_t size() const { return entries_.size(); }
    std::size_t body_count() const;
    std::uint64_t max_height() const;
    std::vector<Digest> tips_at_max_height() const;

    /// Up to n non-genesis entries ending at tip, tip first.
    std::vector<Digest> latest(const Digest& tip, std::size_t n) const;
    /// Ancestor of tip (inclusive) at the given height.
    std::optional<Digest> ancestor_at(const Digest& tip, std::uint64_t height) const;
    /// True when anc lies on the path genesis..tip (inclusive).
    bool is_ancestor(const Digest& anc, const Digest& tip) const;
    /// True when a body on the path genesis..tip contains the proof. Pruned
    /// bodies are no longer consulted.
    bool branch_contains_proof(const Digest& tip, const ProofId& id) const;
    /// Bodies on the path ending at tip with height >= min_height, oldest first.
    /// Stops at the first pruned entry walking backwards.
    std::vector<Block> branch_blocks(const Digest& tip, std::uint64_t min_height = 1) const;

    /// Stores a block whose parent is present. No validation. Idempotent.
    /// Returns the block hash.
    Digest insert(Block b);
    /// Same, with the block hash already computed by the caller.
    Digest insert(Block b, const Digest& known_hash);
    void set_head(const Digest& h);
    /// Replaces bodies at height <= max_height - 2T by their headers.
    void prune();

    const StakeTable& stake_at(const Digest& tip) const;

private:
    ChainParams params_;
    Digest genesis_;
    Digest head_;
    std::unordered_map<Digest, ChainEntry> entries_;
    std::unordered_map<Digest, std::vector<Digest>> children_;
    std::map<std::uint64_t, std::vector<Digest>> by_height_;
    std::unordered_map<ProofId, std::vector<Digest>> proof_index_;
    mutable std::unordered_map<Digest, StakeTable> stake_cache_;
};

/// counts[p] = proofs in the latest min(T, height) blocks ending at tip in which
/// p is requester or responder. Throws MissingBodyError if one of those blocks
/// was pruned.
StakeTable compute_stake(const ChainStore& store, const Digest& tip);

/// Producers of the latest T blocks ending at tip.
std::set<PublicKey> recent_producers(const ChainStore& store, const Digest& tip);

/// Stake argmax among peers that produced none of the latest T blocks; ties go
/// to the lexicographically smallest key. Empty when nobody qualifies.
std::optional<PublicKey> eligible_leader(const ChainStore& store, const Digest& tip);

/// Whether pk may produce the block extending tip: the eligible leader if
/// there is one, otherwise (open round: fresh network, or every stakeholder
/// produced recently) any peer outside the latest T producers.
bool may_mint(const ChainStore& store, const Digest& tip, const PublicKey& pk);

/// Longest branch; then the tip producer's stake measured on the window that
/// made it leader (ending at the tip's parent); then the smallest tip hash.
Digest choose_head(const ChainStore& store);

}  // namespace polchain
