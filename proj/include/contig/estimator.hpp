#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "contig/complex.hpp"
#include "contig/loop_invariant.hpp"
#include "contig/maps.hpp"
#include "contig/random.hpp"
#include "contig/sampler.hpp"
#include "contig/standard.hpp"
#include "contig/walk.hpp"

namespace contig {

struct EstimatorConfig {
    WalkConfig walk;
    /// Cumulative trial budgets; the run stops after a round that adds no class.
    std::vector<std::uint64_t> schedule{1'000, 10'000, 100'000};
    unsigned workers = 1;
    /// Trials compared against one catalog snapshot. Results do not depend on workers.
    std::size_t batch = 64;
    VertexId base = 0;
    bool allow_collapse = true;
    /**
     * Skip walks between loops with different fundamental-group invariants.
     * Only used with contiguous steps, where such a walk cannot succeed.
     */
    bool prune = true;
    /**
     * Remember states visited by walks whose class is known; a later walk
     * reaching one of them is classified at once. Contiguous steps only.
     */
    bool memo = true;
    std::size_t memo_slots = std::size_t{1} << 24;
};

/// Open-addressing table from state hash to catalog index; stops growing at 3/4 load.
class StateMemo {
public:
    explicit StateMemo(std::size_t slots = 0)
    {
        std::size_t n = 1;
        while (n < slots)
            n <<= 1;
        keys_.assign(slots ? n : 0, 0);
        values_.assign(keys_.size(), 0);
    }

    std::optional<std::uint32_t> find(std::uint64_t h) const
    {
        if (keys_.empty() || h == 0)
            return std::nullopt;
        for (std::size_t i = h & (keys_.size() - 1);; i = (i + 1) & (keys_.size() - 1)) {
            if (keys_[i] == h)
                return values_[i];
            if (keys_[i] == 0)
                return std::nullopt;
        }
    }

    void insert(std::uint64_t h, std::uint32_t value)
    {
        if (keys_.empty() || h == 0 || 4 * (size_ + 1) > 3 * keys_.size())
            return;
        for (std::size_t i = h & (keys_.size() - 1);; i = (i + 1) & (keys_.size() - 1)) {
            if (keys_[i] == h)
                return;
            if (keys_[i] == 0) {
                keys_[i] = h;
                values_[i] = value;
                ++size_;
                return;
            }
        }
    }

    std::size_t size() const { return size_; }

private:
    std::vector<std::uint64_t> keys_;
    std::vector<std::uint32_t> values_;
    std::size_t size_ = 0;
};

struct EstimatorState {
    std::vector<Assignment> catalog;
    std::vector<std::uint64_t> class_hits;  // samples assigned to each entry
    std::uint64_t trials = 0;
    std::vector<std::uint64_t> schedule;
    std::vector<std::size_t> size_after_round;
    bool stabilized = false;
    std::uint64_t walks = 0;
    std::uint64_t walks_found = 0;
    std::uint64_t walks_skipped = 0;
    std::uint64_t walk_iterations = 0;
    std::uint64_t memo_hits = 0;
    std::size_t memo_size = 0;

    std::size_t class_count() const { return catalog.size(); }
};

namespace detail {

struct TrialOutcome {
    Assignment sample;
    std::string key;
    std::optional<std::size_t> match;
    Rng rng;
    std::uint64_t walks = 0, found = 0, skipped = 0, iterations = 0, memo_hits = 0;
    std::vector<std::uint64_t> visited;
};

inline constexpr std::size_t kMaxRecordedStates = std::size_t{1} << 17;

}  // namespace detail

/**
 * Randomized count of contiguity classes of based maps S^1_k -> y. Each
 * trial samples a uniform closed walk and compares it, nearest first by
 * map distance, against the catalog with the local search; it joins the
 * catalog when every comparison fails.
 */
inline EstimatorState estimate_class_count(const SimplicialComplex& y, int k, const EstimatorConfig& cfg)
{
    cfg.walk.validate();
    if (cfg.batch == 0)
        throw InvalidArgument("batch size must be positive");
    for (std::size_t i = 1; i < cfg.schedule.size(); ++i)
        if (cfg.schedule[i] <= cfg.schedule[i - 1])
            throw InvalidArgument("stop schedule must be strictly increasing");

    const auto circle = circle_complex(k);
    const auto dist = DistanceTable::cached(y);
    if (!dist.connected())
        throw InvalidArgument("target 1-skeleton is not connected");
    const ClosedWalkSampler sampler(y, cfg.base, k, cfg.allow_collapse);
    const bool prune = cfg.prune && cfg.walk.mode == StepSoundness::ContiguousSteps;
    const std::optional<LoopInvariant> invariant =
        prune ? std::optional<LoopInvariant>(LoopInvariant(y, cfg.base)) : std::nullopt;

    EstimatorState st;
    st.schedule = cfg.schedule;
    std::unordered_map<std::string, std::vector<std::size_t>> by_key;

    const unsigned workers = std::max(1U, cfg.workers);
    std::vector<WalkEngine> engines;
    for (unsigned w = 0; w < workers; ++w)
        engines.emplace_back(circle, y, VertexId{0}, cfg.walk.mode, dist);

    const bool use_memo = cfg.memo && cfg.walk.mode == StepSoundness::ContiguousSteps;
    StateMemo memo(use_memo ? cfg.memo_slots : 0);

    // Compares a sample against catalog entries [from, to) sharing its key.
    auto compare = [&](WalkEngine& engine, detail::TrialOutcome& t, std::size_t from, std::size_t to) {
        const auto it = by_key.find(t.key);
        std::vector<std::pair<std::uint64_t, std::size_t>> order;
        if (it != by_key.end()) {
            for (std::size_t idx : it->second)
                if (idx >= from && idx < to)
                    order.emplace_back(*map_distance(dist, t.sample, st.catalog[idx]), idx);
        }
        if (prune)
            t.skipped += (to - from) - order.size();
        std::sort(order.begin(), order.end());
        for (const auto& [d, idx] : order) {
            std::optional<std::uint32_t> hit;
            auto on_state = [&](std::uint64_t h) {
                if (!use_memo)
                    return false;
                if (t.visited.size() < detail::kMaxRecordedStates)
                    t.visited.push_back(h);
                hit = memo.find(h);
                return hit.has_value();
            };
            const auto r = engine.run_observed(t.sample, st.catalog[idx], cfg.walk, t.rng, on_state);
            ++t.walks;
            t.iterations += r.iterations;
            if (r.found) {
                ++t.found;
                t.memo_hits += r.found_early;
                t.match = r.found_early ? std::size_t{*hit} : idx;
                return;
            }
        }
    };

    auto run_trial = [&](WalkEngine& engine, std::uint64_t trial, std::size_t snapshot) {
        detail::TrialOutcome t{{}, {}, std::nullopt, stream_rng(cfg.walk.seed, trial), 0, 0, 0, 0, 0, {}};
        t.sample = sampler.sample(t.rng);
        if (prune)
            t.key = invariant->key(t.sample);
        if (use_memo) {
            if (const auto hit = memo.find(engine.hash(t.sample))) {
                t.match = *hit;
                ++t.memo_hits;
                return t;
            }
        }
        compare(engine, t, 0, snapshot);
        return t;
    };

    std::size_t size_before_round = 0;
    for (std::uint64_t budget : cfg.schedule) {
        while (st.trials < budget) {
            const std::uint64_t start = st.trials;
            const std::size_t count = static_cast<std::size_t>(std::min<std::uint64_t>(cfg.batch, budget - start));
            const std::size_t snapshot = st.catalog.size();
            std::vector<std::optional<detail::TrialOutcome>> results(count);
            if (workers == 1) {
                for (std::size_t i = 0; i < count; ++i)
                    results[i] = run_trial(engines[0], start + i, snapshot);
            } else {
                std::vector<std::thread> pool;
                for (unsigned w = 0; w < workers; ++w)
                    pool.emplace_back([&, w] {
                        for (std::size_t i = w; i < count; i += workers)
                            results[i] = run_trial(engines[w], start + i, snapshot);
                    });
                for (auto& th : pool)
                    th.join();
            }
            // Merge in trial order; misses are rechecked against entries added meanwhile.
            for (auto& slot : results) {
                auto& t = *slot;
                if (!t.match && st.catalog.size() > snapshot)
                    compare(engines[0], t, snapshot, st.catalog.size());
                st.walks += t.walks;
                st.walks_found += t.found;
                st.walks_skipped += t.skipped;
                st.walk_iterations += t.iterations;
                st.memo_hits += t.memo_hits;
                if (!t.match) {
                    t.match = st.catalog.size();
                    by_key[t.key].push_back(st.catalog.size());
                    st.catalog.push_back(t.sample);
                    st.class_hits.push_back(0);
                }
                ++st.class_hits[*t.match];
                // Every visited state is reached from the sample by contiguous steps.
                for (std::uint64_t h : t.visited)
                    memo.insert(h, static_cast<std::uint32_t>(*t.match));
            }
            st.trials += count;
        }
        st.size_after_round.push_back(st.catalog.size());
        if (st.size_after_round.size() >= 2 && st.catalog.size() == size_before_round) {
            st.stabilized = true;
            break;
        }
        size_before_round = st.catalog.size();
    }
    st.memo_size = memo.size();
    return st;
}

}  // namespace contig
