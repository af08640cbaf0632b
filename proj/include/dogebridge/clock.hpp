// Copyright (c) 2026 The Dogebridge developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#pragma once

#include <cstdint>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dogebridge {

/** Simulated seconds since the start of a run. Integer only. */
using SimTime = std::uint64_t;

enum class Interarrival { Deterministic, SeededExponential };

struct ClockParams {
    std::uint64_t eth_block_seconds = 14;
    std::uint64_t doge_block_seconds = 62;
    Interarrival doge_interarrival = Interarrival::Deterministic;

    bool valid() const { return eth_block_seconds > 0 && doge_block_seconds > 0; }
};

/** Ordinal of the most recent Ethereum block at time t. */
inline std::uint64_t ethereum_time(SimTime t, const ClockParams& p) { return t / p.eth_block_seconds; }

/** First simulated second belonging to Ethereum block e. */
inline SimTime eth_block_start(std::uint64_t e, const ClockParams& p) { return e * p.eth_block_seconds; }

/** ceil((d - k) * doge_block_seconds / eth_block_seconds). */
std::uint64_t challenge_window_eth_blocks(std::uint64_t d, std::uint64_t k, const ClockParams& p);

/** Ethereum blocks spanned by n expected Dogecoin blocks, rounded up. */
std::uint64_t doge_blocks_as_eth_blocks(std::uint64_t n, const ClockParams& p);

/** Seeded exponential draw with the given mean, rounded and clamped to >= 1. */
std::uint64_t exponential_seconds(std::mt19937_64& rng, std::uint64_t mean);

SimTime next_doge_block_time(SimTime prev, const ClockParams& p, std::mt19937_64& rng);

class PastEvent : public std::logic_error {
public:
    PastEvent(SimTime at, SimTime now)
        : std::logic_error("event scheduled at " + std::to_string(at) + " before current time " + std::to_string(now))
    {
    }
};

/**
 * Min-heap keyed on (time, seq). seq is a global insertion counter, so
 * events at the same time fire in the order they were scheduled.
 */
template <typename Event>
class EventQueue {
public:
    struct Item {
        SimTime time;
        std::uint64_t seq;
        Event event;
    };

    std::uint64_t schedule(SimTime at, Event event)
    {
        if (at < now_) throw PastEvent(at, now_);
        std::uint64_t s = next_seq_++;
        heap_.push(Item{at, s, std::move(event)});
        return s;
    }

    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }
    SimTime now() const { return now_; }
    SimTime next_time() const { return heap_.top().time; }

    Item pop()
    {
        Item it = heap_.top();
        heap_.pop();
        now_ = it.time;
        return it;
    }

    /** Pops and hands every event with time <= t_end to fn, in order. */
    template <typename Fn>
    void run_until(SimTime t_end, Fn&& fn)
    {
        while (!heap_.empty() && heap_.top().time <= t_end) {
            Item it = pop();
            fn(it);
        }
    }

private:
    struct Later {
        bool operator()(const Item& a, const Item& b) const
        {
            if (a.time != b.time) return a.time > b.time;
            return a.seq > b.seq;
        }
    };

    std::priority_queue<Item, std::vector<Item>, Later> heap_;
    SimTime now_ = 0;
    std::uint64_t next_seq_ = 0;
};

} // namespace dogebridge
