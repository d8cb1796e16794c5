#include "trp/vwts.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

namespace trp {

Vwts::Vwts(std::vector<std::string> state_names, std::vector<std::set<std::string>> labels,
           int initial)
    : names_(std::move(state_names)), labels_(std::move(labels)), initial_(initial) {
    if (names_.empty()) throw ModelError("transition system needs at least one state");
    if (labels_.size() != names_.size())
        throw ModelError("labels/state count mismatch");
    if (initial_ < 0 || initial_ >= num_states())
        throw ModelError("initial state out of range");
    for (const auto& ls : labels_) atoms_.insert(ls.begin(), ls.end());
    edges_.assign(names_.size(), std::vector<std::optional<EdgeSchedule>>(names_.size()));
}

int Vwts::state_id(const std::string& name) const {
    for (int i = 0; i < num_states(); ++i)
        if (names_[i] == name) return i;
    throw ModelError("unknown state '" + name + "'");
}

void Vwts::add_edge(int from, int to, EdgeSchedule schedule) {
    if (from < 0 || from >= num_states() || to < 0 || to >= num_states())
        throw ModelError("edge endpoint out of range");
    for (const auto& w : schedule.windows) {
        if (w.from_t > w.to_t) throw ModelError("weight window has from_t > to_t");
        if (w.weight < 1) throw ModelError("transition weights must be >= 1");
    }
    if (schedule.default_weight && *schedule.default_weight < 1)
        throw ModelError("transition weights must be >= 1");
    std::sort(schedule.windows.begin(), schedule.windows.end(),
              [](const WeightWindow& a, const WeightWindow& b) { return a.from_t < b.from_t; });
    for (std::size_t i = 1; i < schedule.windows.size(); ++i)
        if (schedule.windows[i].from_t <= schedule.windows[i - 1].to_t)
            throw ModelError("overlapping weight windows on edge " + names_[from] + "->" +
                             names_[to]);
    auto& slot = edges_[from][to];
    if (!slot) {
        slot = std::move(schedule);
        return;
    }
    for (auto& w : schedule.windows) slot->windows.push_back(w);
    std::sort(slot->windows.begin(), slot->windows.end(),
              [](const WeightWindow& a, const WeightWindow& b) { return a.from_t < b.from_t; });
    for (std::size_t i = 1; i < slot->windows.size(); ++i)
        if (slot->windows[i].from_t <= slot->windows[i - 1].to_t)
            throw ModelError("overlapping weight windows on edge " + names_[from] + "->" +
                             names_[to]);
    if (schedule.default_weight) slot->default_weight = schedule.default_weight;
}

const Vwts::EdgeSchedule* Vwts::schedule(int from, int to) const {
    if (from < 0 || from >= num_states() || to < 0 || to >= num_states())
        throw ModelError("state id out of range");
    const auto& slot = edges_[from][to];
    return slot ? &*slot : nullptr;
}

bool Vwts::has_edge(int from, int to) const {
    if (schedule(from, to)) return true;
    return from == to; // implicit self-loop
}

std::vector<int> Vwts::adjacency(int s) const {
    if (s < 0 || s >= num_states()) throw ModelError("state id out of range");
    std::vector<int> adj;
    for (int to = 0; to < num_states(); ++to)
        if (has_edge(s, to)) adj.push_back(to);
    return adj;
}

int Vwts::delta(int s, int t, int s2) const {
    const EdgeSchedule* sched = schedule(s, s2);
    if (!sched) {
        if (s == s2) return 1; // implicit unit self-loop
        throw ModelError("no edge " + names_[s] + "->" + names_[s2]);
    }
    for (const auto& w : sched->windows)
        if (t >= w.from_t && t <= w.to_t) return w.weight;
    if (sched->default_weight) return *sched->default_weight;
    throw ModelError("edge " + names_[s] + "->" + names_[s2] + " has no weight at t=" +
                     std::to_string(t));
}

Vwts Vwts::from_json(const nlohmann::json& j) {
    std::vector<std::string> names;
    std::vector<std::set<std::string>> labels;
    for (const auto& s : j.at("states")) {
        names.push_back(s.at("id").get<std::string>());
        std::set<std::string> ls;
        if (s.contains("labels"))
            for (const auto& l : s.at("labels")) ls.insert(l.get<std::string>());
        labels.push_back(std::move(ls));
    }
    Vwts ts(std::move(names), std::move(labels), 0);
    ts.initial_ = ts.state_id(j.at("initial").get<std::string>());

    for (const auto& e : j.at("edges")) {
        const int from = ts.state_id(e.at("from").get<std::string>());
        const int to = ts.state_id(e.at("to").get<std::string>());
        EdgeSchedule sched;
        if (e.contains("weight")) sched.default_weight = e.at("weight").get<int>();
        if (e.contains("default")) sched.default_weight = e.at("default").get<int>();
        if (e.contains("weights"))
            for (const auto& w : e.at("weights"))
                sched.windows.push_back({w.at("from_t").get<int>(), w.at("to_t").get<int>(),
                                         w.at("w").get<int>()});
        if (!sched.default_weight && sched.windows.empty())
            throw ModelError("edge without weight or weights");
        const bool bidir = e.value("bidirectional", false);
        ts.add_edge(from, to, sched);
        if (bidir && from != to) ts.add_edge(to, from, sched);
    }
    return ts;
}

Vwts Vwts::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open environment file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
        return from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("bad environment file '" + path + "': " + e.what());
    }
}

TimeSequence time_sequence(const Vwts& ts, const Path& path, int horizon) {
    if (path.states.empty()) throw ModelError("empty path");
    TimeSequence seq;
    seq.times.push_back(0);
    for (std::size_t i = 1; i < path.states.size(); ++i) {
        const int from = path.states[i - 1];
        const int to = path.states[i];
        if (!ts.has_edge(from, to))
            throw ModelError("path uses non-edge " + ts.state_name(from) + "->" +
                             ts.state_name(to));
        const int t = seq.times.back() + ts.delta(from, seq.times.back(), to);
        if (t > horizon)
            throw OutOfHorizonError("path exceeds horizon " + std::to_string(horizon) +
                                    " at step " + std::to_string(i));
        seq.times.push_back(t);
    }
    return seq;
}

TimedWord timed_word(const Vwts& ts, const Path& path, int horizon) {
    const TimeSequence seq = time_sequence(ts, path, horizon);
    std::vector<TimedWord::Entry> entries;
    entries.reserve(path.states.size());
    for (std::size_t i = 0; i < path.states.size(); ++i)
        entries.push_back({ts.labels(path.states[i]), seq.times[i]});
    return TimedWord::from_entries(std::move(entries));
}

} // namespace trp
