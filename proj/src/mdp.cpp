#include "trp/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

namespace trp {

namespace {

void validate_outcomes(const std::vector<DelayOutcome>& outcomes, const std::string& where) {
    if (outcomes.empty()) throw ModelError(where + ": empty outcome list");
    double mass = 0.0;
    for (const auto& o : outcomes) {
        if (o.dt < 1) throw ModelError(where + ": durations must be >= 1");
        if (o.prob <= 0.0) throw ModelError(where + ": outcome probabilities must be positive");
        mass += o.prob;
    }
    if (std::abs(mass - 1.0) > 1e-12)
        throw ModelError(where + ": outcome probabilities sum to " + std::to_string(mass));
}

} // namespace

LabeledMdp::LabeledMdp(std::vector<std::string> state_names,
                       std::vector<std::set<std::string>> labels, int initial)
    : names_(std::move(state_names)), labels_(std::move(labels)), initial_(initial) {
    if (names_.empty()) throw ModelError("MDP needs at least one state");
    if (labels_.size() != names_.size()) throw ModelError("labels/state count mismatch");
    if (initial_ < 0 || initial_ >= num_states()) throw ModelError("initial state out of range");
    for (const auto& ls : labels_) atoms_.insert(ls.begin(), ls.end());
    edge_index_.assign(names_.size(), std::vector<int>(names_.size(), -1));
}

int LabeledMdp::state_id(const std::string& name) const {
    for (int i = 0; i < num_states(); ++i)
        if (names_[i] == name) return i;
    throw ModelError("unknown state '" + name + "'");
}

void LabeledMdp::add_edge(Edge edge) {
    if (edge.from < 0 || edge.from >= num_states() || edge.to < 0 || edge.to >= num_states())
        throw ModelError("edge endpoint out of range");
    if (edge_index_[edge.from][edge.to] >= 0)
        throw ModelError("duplicate edge " + names_[edge.from] + "->" + names_[edge.to]);
    const std::string where = "edge " + names_[edge.from] + "->" + names_[edge.to];
    std::sort(edge.windows.begin(), edge.windows.end(),
              [](const DelayWindow& a, const DelayWindow& b) { return a.from_t < b.from_t; });
    for (std::size_t i = 0; i < edge.windows.size(); ++i) {
        if (edge.windows[i].from_t > edge.windows[i].to_t)
            throw ModelError(where + ": window has from_t > to_t");
        if (i > 0 && edge.windows[i].from_t <= edge.windows[i - 1].to_t)
            throw ModelError(where + ": overlapping delay windows");
        validate_outcomes(edge.windows[i].outcomes, where);
    }
    if (!edge.default_outcomes.empty()) validate_outcomes(edge.default_outcomes, where);
    edge_index_[edge.from][edge.to] = static_cast<int>(edges_.size());
    edges_.push_back(std::move(edge));
}

const std::vector<DelayOutcome>* LabeledMdp::outcomes(int s, int t, int s2) const {
    if (s < 0 || s >= num_states() || s2 < 0 || s2 >= num_states())
        throw ModelError("state id out of range");
    const int e = edge_index_[s][s2];
    if (e < 0) return nullptr;
    for (const auto& w : edges_[e].windows)
        if (t >= w.from_t && t <= w.to_t) return &w.outcomes;
    if (!edges_[e].default_outcomes.empty()) return &edges_[e].default_outcomes;
    return nullptr;
}

std::vector<int> LabeledMdp::enabled_actions(int s, int t) const {
    std::vector<int> targets;
    for (int s2 = 0; s2 < num_states(); ++s2) {
        if (s2 == s) {
            targets.push_back(s2); // wait is always available
            continue;
        }
        if (outcomes(s, t, s2)) targets.push_back(s2);
    }
    return targets;
}

std::vector<DelayOutcome> LabeledMdp::action_outcomes(int s, int t, int target) const {
    const std::vector<DelayOutcome>* o = outcomes(s, t, target);
    if (o) return *o;
    if (target == s) return {{1, 1.0}}; // synthesized unit wait
    throw ModelError("action " + names_[s] + "->" + names_[target] + " unsupported at t=" +
                     std::to_string(t));
}

LabeledMdp LabeledMdp::from_json(const nlohmann::json& j) {
    std::vector<std::string> names;
    std::vector<std::set<std::string>> labels;
    for (const auto& s : j.at("states")) {
        names.push_back(s.at("id").get<std::string>());
        std::set<std::string> ls;
        if (s.contains("labels"))
            for (const auto& l : s.at("labels")) ls.insert(l.get<std::string>());
        labels.push_back(std::move(ls));
    }
    LabeledMdp mdp(std::move(names), std::move(labels), 0);
    mdp.initial_ = mdp.state_id(j.at("initial").get<std::string>());

    auto parse_outcomes = [](const nlohmann::json& arr) {
        std::vector<DelayOutcome> out;
        for (const auto& o : arr)
            out.push_back({o.at("dt").get<int>(), o.at("p").get<double>()});
        return out;
    };

    for (const auto& e : j.at("edges")) {
        Edge edge;
        edge.from = mdp.state_id(e.at("from").get<std::string>());
        edge.to = mdp.state_id(e.at("to").get<std::string>());
        if (e.contains("delays"))
            for (const auto& w : e.at("delays"))
                edge.windows.push_back({w.at("from_t").get<int>(), w.at("to_t").get<int>(),
                                        parse_outcomes(w.at("outcomes"))});
        if (e.contains("outcomes")) edge.default_outcomes = parse_outcomes(e.at("outcomes"));
        if (edge.windows.empty() && edge.default_outcomes.empty())
            throw ModelError("edge without delays or outcomes");
        const bool bidir = e.value("bidirectional", false);
        if (bidir && edge.from != edge.to) {
            Edge back = edge;
            std::swap(back.from, back.to);
            mdp.add_edge(std::move(back));
        }
        mdp.add_edge(std::move(edge));
    }
    return mdp;
}

LabeledMdp LabeledMdp::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open MDP file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
        return from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("bad MDP file '" + path + "': " + e.what());
    }
}

HistoryTree HistoryTree::unroll(const LabeledMdp& mdp, int horizon, int boundary,
                                const UnrollLimits& limits,
                                std::vector<std::pair<int, int>> prefix) {
    if (horizon <= 0) throw ModelError("horizon must be positive");
    if (boundary < 0 || boundary > horizon) throw ModelError("boundary outside [0, horizon]");
    if (prefix.empty()) prefix.push_back({mdp.initial(), 0});
    HistoryTree tree;
    tree.mdp_ = &mdp;
    tree.horizon_ = horizon;
    tree.boundary_ = boundary;
    const auto [root_state, root_time] = prefix.back();
    prefix.pop_back();
    tree.prefix_ = std::move(prefix);
    tree.nodes_.push_back({-1, root_state, root_time, 0, false, -1, {}});
    tree.child_prob_.push_back(1.0);

    std::vector<int> frontier{0};
    while (!frontier.empty()) {
        std::vector<int> next;
        for (int id : frontier) {
            const int s = tree.nodes_[id].state;
            const int t = tree.nodes_[id].time;
            if (t >= boundary) continue; // absorbed
            for (int target : mdp.enabled_actions(s, t)) {
                // merge outcomes landing on the same clamped arrival
                std::vector<std::pair<int, double>> arrivals; // (time, prob)
                std::vector<bool> clamped;
                for (const auto& o : mdp.action_outcomes(s, t, target)) {
                    const int raw = t + o.dt;
                    const int at = std::min(raw, horizon);
                    bool found = false;
                    for (std::size_t k = 0; k < arrivals.size(); ++k)
                        if (arrivals[k].first == at) {
                            arrivals[k].second += o.prob;
                            found = true;
                        }
                    if (!found) {
                        arrivals.push_back({at, o.prob});
                        clamped.push_back(raw > horizon);
                    }
                }
                for (std::size_t k = 0; k < arrivals.size(); ++k) {
                    if (tree.nodes_.size() >= limits.max_nodes)
                        throw ResourceLimitError(
                            "history tree exceeds " + std::to_string(limits.max_nodes) +
                            " nodes; raise the cap or lower the horizon");
                    const int child = static_cast<int>(tree.nodes_.size());
                    tree.nodes_.push_back({id, target, arrivals[k].first,
                                           tree.nodes_[id].depth + 1, clamped[k], target, {}});
                    tree.child_prob_.push_back(arrivals[k].second);
                    tree.nodes_[id].children.push_back(child);
                    next.push_back(child);
                }
            }
        }
        frontier = std::move(next);
    }
    return tree;
}

std::vector<std::pair<int, int>> HistoryTree::trace(int id) const {
    std::vector<std::pair<int, int>> tail;
    for (int cur = id; cur >= 0; cur = nodes_[cur].parent)
        tail.push_back({nodes_[cur].state, nodes_[cur].time});
    std::vector<std::pair<int, int>> out = prefix_;
    out.insert(out.end(), tail.rbegin(), tail.rend());
    return out;
}

TimedWord HistoryTree::word(int id) const {
    std::vector<TimedWord::Entry> entries;
    for (const auto& [s, t] : trace(id)) {
        if (!entries.empty() && entries.back().time == t)
            entries.back().labels = mdp_->labels(s); // clamped arrivals share the time
        else
            entries.push_back({mdp_->labels(s), t});
    }
    return TimedWord::from_entries(std::move(entries));
}

std::string HistoryTree::trace_key(int id) const {
    std::string key;
    for (const auto& [s, t] : trace(id)) {
        key += mdp_->state_name(s);
        key += '@';
        key += std::to_string(t);
        key += '>';
    }
    return key;
}

std::vector<int> HistoryTree::leaves() const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
        if (nodes_[i].children.empty()) out.push_back(i);
    return out;
}

std::vector<std::vector<int>> reachable_histories(const HistoryTree& tree, int steps) {
    if (steps < 0) throw ModelError("steps must be >= 0");
    std::vector<std::vector<int>> per_step(static_cast<std::size_t>(steps) + 1);
    for (int id = 0; id < tree.size(); ++id) {
        const auto& n = tree.node(id);
        if (n.depth <= steps) per_step[static_cast<std::size_t>(n.depth)].push_back(id);
        if (n.children.empty() && tree.absorbed(id))
            for (int h = n.depth + 1; h <= steps; ++h)
                per_step[static_cast<std::size_t>(h)].push_back(id);
    }
    return per_step;
}

EvalOptions reward_eval_options(const RewardOptions& opts, int horizon) {
    EvalOptions e;
    e.until = opts.until;
    e.windows = WindowPolicy::Truncate;
    e.negative_padding =
        opts.variant == RobustnessVariant::Right ? opts.robustness_window : 0;
    e.horizon = horizon;
    return e;
}

double terminal_reward(const TaskSet& tasks, const HistoryTree& tree, int node,
                       const RewardOptions& opts) {
    if (tree.node(node).time != tree.horizon()) return 0.0;
    const TimedWord w = tree.word(node);
    const EvalOptions eval = reward_eval_options(opts, tree.horizon());
    double total = 0.0;
    for (const auto& task : tasks.tasks)
        total += task.priority * robustness(task.formula, w, 0, opts.variant, eval);
    return total;
}

} // namespace trp
