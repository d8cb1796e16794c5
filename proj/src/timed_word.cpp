#include "trp/timed_word.hpp"

#include <algorithm>

namespace trp {

TimedWord TimedWord::from_entries(std::vector<Entry> entries) {
    if (entries.empty()) throw ModelError("timed word must have at least one entry");
    if (entries.front().time < 0) throw ModelError("timed word times must be nonnegative");
    for (std::size_t i = 1; i < entries.size(); ++i)
        if (entries[i].time <= entries[i - 1].time)
            throw ModelError("timed word times must be strictly increasing");
    TimedWord w;
    w.entries = std::move(entries);
    return w;
}

int TimedWord::start_time() const {
    if (entries.empty()) throw ModelError("empty timed word");
    return entries.front().time;
}

int TimedWord::horizon() const {
    if (entries.empty()) throw ModelError("empty timed word");
    return entries.back().time;
}

const std::set<std::string>& TimedWord::labels_at(int t) const {
    static const std::set<std::string> kNoLabels;
    if (entries.empty()) throw ModelError("empty timed word");
    if (t < entries.front().time) return kNoLabels;
    // last entry with time <= t
    auto it = std::upper_bound(entries.begin(), entries.end(), t,
                               [](int v, const Entry& e) { return v < e.time; });
    return std::prev(it)->labels;
}

} // namespace trp
