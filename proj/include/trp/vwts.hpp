#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "trp/errors.hpp"
#include "trp/timed_word.hpp"

#include <nlohmann/json_fwd.hpp>

namespace trp {

// ── Varying Weighted Transition System ───────────────────────────────────────
//
// States carry label sets; directed edges carry a positive integer duration
// that may change with the departure time.  Durations are authored as
// half-open-free windows {from_t, to_t, w} plus an optional per-edge default
// for uncovered times.  Every state has an implicit weight-1 self-loop unless
// the file lists the self-edge explicitly.

struct WeightWindow {
    int from_t = 0;
    int to_t = 0; // inclusive
    int weight = 1;
};

class Vwts {
public:
    struct EdgeSchedule {
        std::vector<WeightWindow> windows; // non-overlapping, sorted by from_t
        std::optional<int> default_weight;
    };

    Vwts(std::vector<std::string> state_names, std::vector<std::set<std::string>> labels,
         int initial);

    int num_states() const { return static_cast<int>(names_.size()); }
    int initial() const { return initial_; }
    int state_id(const std::string& name) const;
    const std::string& state_name(int s) const { return names_.at(s); }
    const std::set<std::string>& labels(int s) const { return labels_.at(s); }
    const std::set<std::string>& atoms() const { return atoms_; }

    /// Declares a directed edge; repeated calls extend the schedule.
    void add_edge(int from, int to, EdgeSchedule schedule);

    bool has_edge(int from, int to) const;
    /// Successor set Adj(s), sorted by state id.  Includes the implicit
    /// self-loop.
    std::vector<int> adjacency(int s) const;

    /// Duration of the move from s departing at time t toward s2.
    /// Throws ModelError when the edge is missing or its schedule leaves t
    /// uncovered with no default.
    int delta(int s, int t, int s2) const;

    static Vwts from_json(const nlohmann::json& j);
    static Vwts load_file(const std::string& path);

private:
    const EdgeSchedule* schedule(int from, int to) const;

    std::vector<std::string> names_;
    std::vector<std::set<std::string>> labels_;
    std::set<std::string> atoms_;
    int initial_ = 0;
    // edge schedules indexed [from][to]; empty optional = no edge
    std::vector<std::vector<std::optional<EdgeSchedule>>> edges_;
};

struct Path {
    std::vector<int> states; // states[0] must be the initial state for plans
};

struct TimeSequence {
    std::vector<int> times;
};

/// Arrival times of a path: t_0 = 0, t_i = t_{i-1} + delta(s_{i-1}, t_{i-1}, s_i).
/// Throws ModelError on a non-edge and OutOfHorizonError if the final time
/// would exceed the horizon.
TimeSequence time_sequence(const Vwts& ts, const Path& path, int horizon);

/// The word pairing each visited state's labels with its arrival time.
TimedWord timed_word(const Vwts& ts, const Path& path, int horizon);

} // namespace trp
