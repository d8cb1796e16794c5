#pragma once

#include <set>
#include <string>
#include <vector>

#include "trp/errors.hpp"

namespace trp {

// ── Timed words ──────────────────────────────────────────────────────────────
//
// A timed word is a finite sequence of (label set, timestamp) samples with
// strictly increasing integer times.  Between samples the labels of the most
// recent sample persist: querying any t with t_i <= t < t_{i+1} yields entry
// i's labels, and the last sample's labels persist beyond t_n.  Before the
// first sample no atomic proposition holds.

struct TimedWord {
    struct Entry {
        std::set<std::string> labels;
        int time = 0;
    };

    std::vector<Entry> entries;

    static TimedWord from_entries(std::vector<Entry> entries);

    bool empty() const noexcept { return entries.empty(); }
    int start_time() const;
    /// Time of the last sample; the word determines labels on
    /// [start_time, horizon] and, by persistence, beyond.
    int horizon() const;

    /// Labels holding at time t under persistence.  Returns the empty set for
    /// t < start_time; callers bound their queries via EvalOptions.
    const std::set<std::string>& labels_at(int t) const;
};

} // namespace trp
