#include "polchain/chain_store.hpp"

#include <algorithm>

namespace polchain {

ChainStore::ChainStore(ChainParams params) : params_(params) {
    if (params_.window == 0) throw std::invalid_argument("stake window T must be positive");
    genesis_ = hash(ByteView{});
    head_ = genesis_;
    ChainEntry g;
    g.header.block_hash = genesis_;
    g.height = 0;
    entries_.emplace(genesis_, std::move(g));
    by_height_[0].push_back(genesis_);
}

const ChainEntry* ChainStore::find(const Digest& h) const {
    auto it = entries_.find(h);
    return it == entries_.end() ? nullptr : &it->second;
}

const ChainEntry& ChainStore::at(const Digest& h) const {
    auto* e = find(h);
    if (!e) throw UnknownBlockError("unknown block " + to_hex(h));
    return *e;
}

const std::vector<Digest>& ChainStore::children(const Digest& h) const {
    static const std::vector<Digest> none;
    auto it = children_.find(h);
    return it == children_.end() ? none : it->second;
}

std::size_t ChainStore::body_count() const {
    return static_cast<std::size_t>(
        std::count_if(entries_.begin(), entries_.end(),
                       [](const auto& kv) { return kv.second.body.has_value(); }));
}

std::uint64_t ChainStore::max_height() const { return by_height_.rbegin()->first; }

std::vector<Digest> ChainStore::tips_at_max_height() const {
    return by_height_.rbegin()->second;
}

std::vector<Digest> ChainStore::latest(const Digest& tip, std::size_t n) const {
    std::vector<Digest> out;
    const ChainEntry* e = &at(tip);
    while (out.size() < n && e->height > 0) {
        out.push_back(e->header.block_hash);
        e = &at(e->header.prev_hash);
    }
    return out;
}

std::optional<Digest> ChainStore::ancestor_at(const Digest& tip, std::uint64_t height) const {
    const ChainEntry* e = &at(tip);
    if (height > e->height) return std::nullopt;
    while (e->height > height) e = &at(e->header.prev_hash);
    return e->header.block_hash;
}

bool ChainStore::is_ancestor(const Digest& anc, const Digest& tip) const {
    auto* a = find(anc);
    if (!a || !contains(tip)) return false;
    auto found = ancestor_at(tip, a->height);
    return found && *found == anc;
}

bool ChainStore::branch_contains_proof(const Digest& tip, const ProofId& id) const {
    auto it = proof_index_.find(id);
    if (it == proof_index_.end()) return false;
    return std::any_of(it->second.begin(), it->second.end(),
                       [&](const Digest& b) { return is_ancestor(b, tip); });
}

std::vector<Block> ChainStore::branch_blocks(const Digest& tip, std::uint64_t min_height) const {
    std::vector<Block> out;
    const ChainEntry* e = &at(tip);
    while (e->height >= min_height && e->height > 0 && e->body) {
        out.push_back(*e->body);
        e = &at(e->header.prev_hash);
    }
    std::reverse(out.begin(), out.end());
    return out;
}

Digest ChainStore::insert(Block b) {
    const auto h = block_hash(b);
    return insert(std::move(b), h);
}

Digest ChainStore::insert(Block b, const Digest& known_hash) {
    BlockHeader header{known_hash, b.producer_pk, b.prev_hash};
    const Digest h = header.block_hash;
    if (contains(h)) return h;
    const auto& parent = at(b.prev_hash);
    ChainEntry e;
    e.header = header;
    e.height = parent.height + 1;
    for (const auto& p : b.proofs) proof_index_[proof_id(p)].push_back(h);
    e.body = std::move(b);
    children_[header.prev_hash].push_back(h);
    by_height_[e.height].push_back(h);
    entries_.emplace(h, std::move(e));
    return h;
}

void ChainStore::set_head(const Digest& h) {
    at(h);
    head_ = h;
}

void ChainStore::prune() {
    const std::uint64_t keep = 2ULL * params_.window;
    const std::uint64_t top = max_height();
    if (top <= keep) return;
    const std::uint64_t cutoff = top - keep;
    for (auto it = by_height_.begin(); it != by_height_.end() && it->first <= cutoff; ++it) {
        for (const auto& h : it->second) {
            auto& e = entries_.at(h);
            if (!e.body) continue;
            for (const auto& p : e.body->proofs) {
                auto idx = proof_index_.find(proof_id(p));
                if (idx == proof_index_.end()) continue;
                std::erase(idx->second, h);
                if (idx->second.empty()) proof_index_.erase(idx);
            }
            e.body.reset();
        }
    }
}

const StakeTable& ChainStore::stake_at(const Digest& tip) const {
    if (auto it = stake_cache_.find(tip); it != stake_cache_.end()) return it->second;
    StakeTable table;
    for (const auto& h : latest(tip, params_.window)) {
        const auto& e = at(h);
        if (!e.body) throw MissingBodyError("body of block " + to_hex(h) + " was pruned");
        for (const auto& p : e.body->proofs) {
            ++table[p.request.requester_pk];
            ++table[p.responder_pk];
        }
    }
    return stake_cache_.emplace(tip, std::move(table)).first->second;
}

StakeTable compute_stake(const ChainStore& store, const Digest& tip) { return store.stake_at(tip); }

std::set<PublicKey> recent_producers(const ChainStore& store, const Digest& tip) {
    std::set<PublicKey> out;
    for (const auto& h : store.latest(tip, store.params().window))
        out.insert(store.at(h).header.producer_pk);
    return out;
}

std::optional<PublicKey> eligible_leader(const ChainStore& store, const Digest& tip) {
    const auto& stake = store.stake_at(tip);
    const auto recent = recent_producers(store, tip);
    std::optional<PublicKey> best;
    std::uint64_t best_count = 0;
    // Map iteration is ascending by key, so strict > keeps the smallest key on ties.
    for (const auto& [pk, count] : stake) {
        if (recent.contains(pk)) continue;
        if (!best || count > best_count) {
            best = pk;
            best_count = count;
        }
    }
    return best;
}

bool may_mint(const ChainStore& store, const Digest& tip, const PublicKey& pk) {
    if (auto leader = eligible_leader(store, tip)) return *leader == pk;
    return !recent_producers(store, tip).contains(pk);
}

Digest choose_head(const ChainStore& store) {
    const auto tips = store.tips_at_max_height();
    if (tips.size() == 1) return tips.front();
    std::optional<Digest> best;
    std::uint64_t best_stake = 0;
    for (const auto& t : tips) {
        const auto& e = store.at(t);
        const auto& stake = store.stake_at(e.header.prev_hash);
        auto it = stake.find(e.header.producer_pk);
        const std::uint64_t s = it == stake.end() ? 0 : it->second;
        if (!best || s > best_stake || (s == best_stake && t < *best)) {
            best = t;
            best_stake = s;
        }
    }
    return *best;
}

}  // namespace polchain
