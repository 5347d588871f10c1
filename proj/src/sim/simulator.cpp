#include "polchain/sim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace polchain::sim {
namespace {

constexpr double kDefaultSpoofDisplacementM = 10'000.0;
constexpr double kDefaultCollusionDisplacementM = 1'000.0;
constexpr std::uint64_t kEventLimit = 50'000'000;
constexpr int kPlacementAttempts = 1000;

std::string verdict_name(const Verdict& v) {
    switch (v.outcome) {
        case Outcome::Accept: return "Accept";
        case Outcome::Fork: return "Fork";
        case Outcome::Reject: break;
    }
    return std::string(to_string(*v.reason));
}

bool is_protocol_message(std::string_view action) {
    return action == "request" || action == "response" || action == "proof";
}

}  // namespace

Simulation::Simulation(ScenarioConfig cfg) : cfg_(std::move(cfg)), rng_(cfg_.seed) {
    validate(cfg_);
    const ChainParams chain{cfg_.T, cfg_.prune};
    peers_.reserve(cfg_.n_peers);
    for (std::size_t i = 0; i < cfg_.n_peers; ++i) {
        peers_.emplace_back(chain);
        peers_[i].index = i;
        peers_[i].identity = generate_identity(rng_.seed32());
    }
    for (const auto& a : cfg_.adversaries) {
        AdversaryRole role;
        role.kind = a.kind;
        role.collusion_case = a.collusion_case;
        role.victim = a.victim;
        if (a.kind == AttackKind::Collusion) {
            role.collusion_lead = true;
            role.partner = a.partner;
            role.partner_identity = peers_[*a.partner].identity;
            AdversaryRole partner = role;
            partner.collusion_lead = false;
            partner.partner = a.peer;
            partner.partner_identity.reset();
            roles_[*a.partner] = partner;
        }
        roles_[a.peer] = role;
    }
    generate_world();
    for (std::size_t i = 0; i < peers_.size(); ++i) owner_[peers_[i].identity.public_key] = i;
    rebuild_neighborhoods();
    mint_scheduled_.assign(cfg_.n_peers, std::nullopt);

    for (std::size_t i = 0; i < peers_.size(); ++i) {
        Event e;
        e.t = rng_.between(0, cfg_.request_period_ms - 1);
        e.peer = i;
        e.kind = Event::Tick;
        if (e.t < cfg_.duration_ms) schedule(std::move(e));
    }
    if (cfg_.pseudonym_rotation_rate_per_hour > 0) {
        const double rate_per_ms = cfg_.pseudonym_rotation_rate_per_hour / 3.6e6;
        rotation_clock_.assign(cfg_.n_peers, 0.0);
        for (std::size_t i = 0; i < peers_.size(); ++i) {
            if (!is_honest(i)) continue;
            rotation_clock_[i] = rng_.exponential(rate_per_ms);
            if (rotation_clock_[i] < static_cast<double>(cfg_.duration_ms))
                schedule(Event{static_cast<std::uint64_t>(rotation_clock_[i]), 0, i, Event::Rotate, {}});
        }
    }
}

void Simulation::generate_world() {
    const auto origin = GeoLocation::from_degrees(cfg_.origin_lat, cfg_.origin_lon);
    const double half = cfg_.world_extent_m / 2;
    world_.resize(cfg_.n_peers);
    for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
        for (std::size_t i = 0; i < peers_.size(); ++i) {
            const double north = rng_.uniform(-half, half);
            const double east = rng_.uniform(-half, half);
            const auto loc = offset_m(origin, north, east);
            peers_[i].true_location = loc;
            peers_[i].claim_location = loc;
            world_[i] = PeerRecord{peers_[i].identity.public_key, loc, loc};
        }
        place_adversaries();
        if (honest_connected()) return;
    }
}

void Simulation::place_adversaries() {
    const auto origin = GeoLocation::from_degrees(cfg_.origin_lat, cfg_.origin_lon);
    const double half = cfg_.world_extent_m / 2;
    std::vector<PeerIndex> honest;
    for (std::size_t i = 0; i < peers_.size(); ++i)
        if (is_honest(i)) honest.push_back(i);
    auto farthest_honest = [&](const GeoLocation& from) {
        PeerIndex best = honest.front();
        for (auto h : honest)
            if (distance_m(from, peers_[h].true_location) > distance_m(from, peers_[best].true_location))
                best = h;
        return best;
    };
    auto nearest_honest = [&](const GeoLocation& from) {
        PeerIndex best = honest.front();
        for (auto h : honest)
            if (distance_m(from, peers_[h].true_location) < distance_m(from, peers_[best].true_location))
                best = h;
        return best;
    };
    auto set_true = [&](PeerIndex p, GeoLocation loc) {
        peers_[p].true_location = loc;
        peers_[p].claim_location = loc;
        world_[p].true_location = loc;
        world_[p].declared_location = loc;
    };

    for (const auto& a : cfg_.adversaries) {
        auto& role = roles_[a.peer];
        auto& self = peers_[a.peer];
        switch (a.kind) {
            case AttackKind::SpoofOwnLocation:
                self.claim_location =
                    offset_m(self.true_location, a.displacement_m.value_or(kDefaultSpoofDisplacementM), 0);
                break;
            case AttackKind::SpoofOtherLocation:
                role.victim = a.victim.value_or(nearest_honest(self.true_location));
                break;
            case AttackKind::ReplayProof:
            case AttackKind::IdentityObserver:
                break;
            case AttackKind::Collusion: {
                const auto lead = a.peer;
                const auto partner = *a.partner;
                auto& prole = roles_[partner];
                if (*a.collusion_case == CollusionCase::D) {
                    const auto anchor = honest[rng_.index(honest.size())];
                    set_true(lead, offset_m(peers_[anchor].true_location, 30, 0));
                    set_true(partner, offset_m(peers_[lead].true_location, 0, 40));
                    const auto victim = a.victim.value_or(farthest_honest(peers_[lead].true_location));
                    world_[lead].declared_location = offset_m(peers_[victim].true_location, 20, 0);
                    role.victim = prole.victim = victim;
                    role.partner_claim = peers_[partner].claim_location;
                    break;
                }
                const double disp = a.displacement_m.value_or(kDefaultCollusionDisplacementM);
                set_true(lead, offset_m(origin, rng_.uniform(-half, half), half + disp));
                set_true(partner, offset_m(peers_[lead].true_location, 0, 40));
                const auto victim = a.victim.value_or(honest[rng_.index(honest.size())]);
                const auto& vloc = peers_[victim].true_location;
                peers_[lead].claim_location = offset_m(vloc, 20, 0);
                peers_[partner].claim_location = offset_m(vloc, 0, 20);
                role.victim = prole.victim = victim;
                role.partner_claim = peers_[partner].claim_location;
                if (*a.collusion_case == CollusionCase::A) {
                    world_[lead].declared_location = peers_[lead].claim_location;
                    world_[partner].declared_location = peers_[partner].claim_location;
                } else if (*a.collusion_case == CollusionCase::B) {
                    const auto& other = peers_[farthest_honest(vloc)].true_location;
                    world_[lead].declared_location = offset_m(other, 20, 0);
                    world_[partner].declared_location = offset_m(other, 0, 20);
                }
                break;
            }
        }
    }
}

bool Simulation::honest_connected() const {
    const OverlayParams ov{cfg_.k_contacts};
    std::map<PublicKey, PeerIndex> index;
    for (std::size_t i = 0; i < world_.size(); ++i) index[world_[i].pk] = i;
    std::vector<std::vector<PeerIndex>> adj(world_.size());
    for (std::size_t i = 0; i < world_.size(); ++i) {
        if (!is_honest(i)) continue;
        for (const auto& c : contacts_of(world_, world_[i].pk, ov)) {
            const auto j = index.at(c);
            if (!is_honest(j)) continue;
            adj[i].push_back(j);
            adj[j].push_back(i);
        }
    }
    std::vector<bool> seen(world_.size(), false);
    std::optional<PeerIndex> start;
    std::size_t honest = 0;
    for (std::size_t i = 0; i < world_.size(); ++i)
        if (is_honest(i)) {
            ++honest;
            if (!start) start = i;
        }
    std::deque<PeerIndex> q{*start};
    seen[*start] = true;
    std::size_t reached = 1;
    while (!q.empty()) {
        const auto u = q.front();
        q.pop_front();
        for (auto v : adj[u])
            if (!seen[v]) {
                seen[v] = true;
                ++reached;
                q.push_back(v);
            }
    }
    return reached == honest;
}

void Simulation::rebuild_neighborhoods() {
    const RangeParams range{cfg_.max_range_m};
    const OverlayParams ov{cfg_.k_contacts};
    std::map<PublicKey, PeerIndex> index;
    for (std::size_t i = 0; i < world_.size(); ++i) index[world_[i].pk] = i;

    neighborhoods_.assign(world_.size(), {});
    for (std::size_t p = 0; p < world_.size(); ++p) {
        auto& nb = neighborhoods_[p];
        const ContextSettings settings{range, ov, 0, cfg_.freshness_window_ms};
        nb.base = build_context(world_, world_[p].pk, peers_[p].store, settings);
        nb.base.chain_view = nullptr;
        nb.base.range_check_enabled = !cfg_.disable_range_check;
        for (const auto& c : nb.base.overlay_contacts) nb.contacts.push_back(index.at(c));
        for (const auto& r : nb.base.radio_reachable) nb.radio.push_back(index.at(r));
        std::sort(nb.contacts.begin(), nb.contacts.end());
        std::sort(nb.radio.begin(), nb.radio.end());
    }
    for (std::size_t p = 0; p < world_.size(); ++p) {
        for (auto c : neighborhoods_[p].contacts) {
            neighborhoods_[p].gossip.push_back(c);
            neighborhoods_[c].gossip.push_back(p);
        }
    }
    for (auto& nb : neighborhoods_) {
        std::sort(nb.gossip.begin(), nb.gossip.end());
        nb.gossip.erase(std::unique(nb.gossip.begin(), nb.gossip.end()), nb.gossip.end());
    }
}

void Simulation::schedule(Event e) {
    e.seq = seq_++;
    queue_.push_back(std::move(e));
    std::push_heap(queue_.begin(), queue_.end(), Later{});
}

void Simulation::run() {
    ScopedCryptoCache cache;
    std::uint64_t processed = 0;
    while (!queue_.empty()) {
        std::pop_heap(queue_.begin(), queue_.end(), Later{});
        Event e = std::move(queue_.back());
        queue_.pop_back();
        now_ = e.t;
        dispatch(e);
        if (++processed > kEventLimit) throw std::runtime_error("simulation exceeded the event limit");
    }
}

void Simulation::dispatch(const Event& e) {
    const StepSettings st{now_, now_ < cfg_.duration_ms, cfg_.mint_delay_ms};
    const auto p = e.peer;
    auto step = [&](const PeerEvent& ev) {
        if (is_honest(p)) return honest_peer_step(peers_[p], ev, world_, neighborhoods_[p], st);
        return adversary_step(peers_[p], roles_.at(p), ev, world_, neighborhoods_[p], st, rng_);
    };
    switch (e.kind) {
        case Event::Tick: {
            if (!st.active) return;
            apply(p, step(Tick{}));
            const auto next = now_ + cfg_.request_period_ms;
            if (next < cfg_.duration_ms) schedule(Event{next, 0, p, Event::Tick, {}});
            return;
        }
        case Event::Mint:
            if (mint_scheduled_[p] != now_) return;
            mint_scheduled_[p].reset();
            apply(p, step(MintCheck{}));
            return;
        case Event::Arrive:
            apply(p, step(*e.arrival));
            return;
        case Event::Rotate: {
            if (!st.active) return;
            const auto old = peers_[p].identity.public_key;
            rotate_identity(peers_[p], rng_);
            const auto& pk = peers_[p].identity.public_key;
            world_[p].pk = pk;
            owner_[pk] = p;
            rebuild_neighborhoods();
            ++stats_.rotations;
            emit(now_, p, "rotate", "Accept", to_hex(old).substr(0, 16) + "->" + to_hex(pk).substr(0, 16));
            rotation_clock_[p] += rng_.exponential(cfg_.pseudonym_rotation_rate_per_hour / 3.6e6);
            if (rotation_clock_[p] < static_cast<double>(cfg_.duration_ms))
                schedule(Event{static_cast<std::uint64_t>(rotation_clock_[p]), 0, p, Event::Rotate, {}});
            return;
        }
    }
}

void Simulation::apply(PeerIndex p, Actions&& a) {
    const bool honest = is_honest(p);
    stats_.attack.injected += a.injected.size();
    injected_.insert(a.injected.begin(), a.injected.end());
    fabricated_.insert(a.fabricated.begin(), a.fabricated.end());

    for (const auto& o : a.observations) {
        if (honest) {
            if (!o.verdict.accepted()) ++stats_.rejections[std::string(to_string(*o.verdict.reason))];
            if (o.fork_stored) ++stats_.forks_observed;
            if (o.subject && is_protocol_message(o.action) && injected_.contains(*o.subject)) {
                if (o.verdict.accepted()) ++stats_.attack.honest_accepts;
                else ++stats_.attack.honest_rejects[std::string(to_string(*o.verdict.reason))];
            }
        }
        if (on_event || cfg_.record_events)
            emit(now_, p, o.action, verdict_name(o.verdict),
                 o.subject ? to_hex(*o.subject).substr(0, 16) : std::string{});
    }

    if (a.mint_at && (!mint_scheduled_[p] || *mint_scheduled_[p] > *a.mint_at)) {
        mint_scheduled_[p] = *a.mint_at;
        schedule(Event{*a.mint_at, 0, p, Event::Mint, {}});
    }

    for (auto& s : a.sends) {
        const bool may_speak_for =
            s.from == p || (!honest && roles_.at(p).partner && *roles_.at(p).partner == s.from);
        if (!may_speak_for) throw std::logic_error("peer sent on behalf of an unrelated peer");
        const auto& nb = neighborhoods_[s.from];
        std::vector<PeerIndex> recipients;
        const std::vector<PeerIndex>* reach = nullptr;
        if (s.channel == Channel::Radio) reach = &nb.radio;
        else if (s.channel == Channel::Overlay) reach = &nb.gossip;
        if (s.to) {
            for (auto r : *s.to)
                if (!reach || std::binary_search(reach->begin(), reach->end(), r)) recipients.push_back(r);
        } else if (reach) {
            recipients = *reach;
        }
        for (auto r : recipients) {
            if (r == s.from) continue;
            ++stats_.messages_sent;
            const auto at = deliver(now_, cfg_, rng_);
            if (!at) {
                ++stats_.messages_lost;
                continue;
            }
            schedule(Event{*at, 0, r, Event::Arrive, Arrival{s.from, s.msg}});
        }
    }
}

void Simulation::emit(std::uint64_t t, PeerIndex peer, std::string_view action, std::string verdict,
                      std::string detail) {
    if (!on_event && !cfg_.record_events) return;
    EventRecord rec{t, peer, std::string(action), std::move(verdict), std::move(detail)};
    if (on_event) on_event(rec);
    if (cfg_.record_events) stats_.events.push_back(std::move(rec));
}

bool Simulation::is_fake(const ProofResponse& p) const {
    const auto a = owner_.find(p.request.requester_pk);
    const auto b = owner_.find(p.responder_pk);
    if (a == owner_.end() || b == owner_.end()) return true;
    const double r = cfg_.max_range_m;
    const auto& ta = peers_[a->second].true_location;
    const auto& tb = peers_[b->second].true_location;
    return distance_m(ta, tb) > r || distance_m(p.request.location, ta) > r ||
           distance_m(p.location, tb) > r;
}

SimReport Simulation::report() const {
    SimReport r = stats_;
    r.seed = cfg_.seed;
    for (const auto& s : peers_) r.final_heads.push_back(to_hex(s.store.head()));

    std::vector<PeerIndex> honest;
    for (std::size_t i = 0; i < peers_.size(); ++i)
        if (is_honest(i)) honest.push_back(i);
    const auto& ref = peers_[honest.front()].store;
    r.main_height = ref.head_height();
    for (const auto& b : ref.branch_blocks(ref.head())) r.confirmed_proofs += b.proofs.size();
    r.convergence = std::all_of(honest.begin(), honest.end(), [&](PeerIndex i) {
        return peers_[i].store.head() == ref.head();
    });

    std::set<Digest> visited;
    std::set<ProofId> seen;
    for (auto i : honest) {
        const auto& store = peers_[i].store;
        for (auto h = store.head(); h != store.genesis() && visited.insert(h).second;) {
            const auto& e = store.at(h);
            if (!e.body) break;
            for (const auto& p : e.body->proofs) {
                const auto id = proof_id(p);
                if (!seen.insert(id).second) continue;
                if (is_fake(p)) ++r.fake_proofs_confirmed;
                if (fabricated_.contains(id)) ++r.attack.confirmed;
            }
            h = e.header.prev_hash;
        }
    }

    for (const auto& [idx, role] : roles_) {
        if (role.kind != AttackKind::IdentityObserver) continue;
        struct Sighting {
            std::uint64_t first_t = ~std::uint64_t{0}, last_t = 0;
            GeoLocation first_loc, last_loc;
        };
        std::map<PublicKey, Sighting> seen_pk;
        auto note = [&](const PublicKey& pk, std::uint64_t t, const GeoLocation& loc) {
            auto& s = seen_pk[pk];
            if (t < s.first_t) s.first_t = t, s.first_loc = loc;
            if (t >= s.last_t) s.last_t = t, s.last_loc = loc;
        };
        const auto& store = peers_[idx].store;
        for (const auto& b : store.branch_blocks(store.head()))
            for (const auto& p : b.proofs) {
                note(p.request.requester_pk, p.request.timestamp_ms, p.request.location);
                note(p.responder_pk, p.timestamp_ms, p.location);
            }
        ObserverStats o;
        o.pseudonyms_observed = seen_pk.size();
        // Guess that a pseudonym which goes quiet continues as the next one
        // to appear within range of where it was last seen.
        std::set<PublicKey> claimed;
        for (const auto& [a, sa] : seen_pk) {
            const PublicKey* best = nullptr;
            std::uint64_t best_t = ~std::uint64_t{0};
            for (const auto& [b, sb] : seen_pk) {
                if (b == a || claimed.contains(b) || sb.first_t <= sa.last_t) continue;
                if (distance_m(sa.last_loc, sb.first_loc) > cfg_.max_range_m) continue;
                if (sb.first_t < best_t) best = &b, best_t = sb.first_t;
            }
            if (!best) continue;
            claimed.insert(*best);
            ++o.links_guessed;
            const auto oa = owner_.find(a), ob = owner_.find(*best);
            if (oa != owner_.end() && ob != owner_.end() && oa->second == ob->second) ++o.links_correct;
        }
        r.observers[idx] = o;
    }
    return r;
}

SimReport run(const ScenarioConfig& cfg) {
    Simulation sim(cfg);
    sim.run();
    return sim.report();
}

}  // namespace polchain::sim
