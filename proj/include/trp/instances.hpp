#pragma once

#include "trp/formula.hpp"
#include "trp/mdp.hpp"
#include "trp/rng.hpp"
#include "trp/timed_word.hpp"
#include "trp/vwts.hpp"

namespace trp {

// ── Instance generators ──────────────────────────────────────────────────────
//
// Seeded generators for differential suites and benchmarks.  All sampling
// goes through Rng, so a seed pins the instance on every platform.

struct FormulaGenOptions {
    int max_depth = 3;
    int max_interval = 4;  // upper bound on window widths and offsets
    int max_arity = 2;     // And/Or width
    bool allow_until = true;
};

Formula random_formula(Rng& rng, const std::vector<std::string>& atoms,
                       const FormulaGenOptions& opts);

TimedWord random_word(Rng& rng, const std::vector<std::string>& atoms, int max_entries,
                      int max_horizon);

struct VwtsGenOptions {
    int num_states = 4;
    int extra_edges = 3;    // beyond a connecting backbone
    int max_weight = 3;
    int horizon = 10;       // weight windows cover [0, horizon]
    int num_atoms = 3;
    double time_varying = 0.5; // chance an edge gets a second weight window
};

Vwts random_vwts(Rng& rng, const VwtsGenOptions& opts);

struct MdpGenOptions {
    int num_states = 3;
    int extra_edges = 1;
    int max_outcomes = 2;
    int max_delay = 3;
    int horizon = 8;
    int num_atoms = 2;
    double time_varying = 0.3;
};

LabeledMdp random_mdp(Rng& rng, const MdpGenOptions& opts);

/// Office-like corridor-and-rooms environment of a given size, deterministic
/// per (num_states, seed); weights vary over a midday congestion window.
Vwts office_vwts(int num_states, int horizon, std::uint64_t seed);

/// Matching task pool: eventually/globally visits over the office labels.
TaskSet office_tasks(int count, int horizon, std::uint64_t seed);

/// Small office-like MDP with stochastic congestion delays.
LabeledMdp office_mdp(int num_states, std::uint64_t seed);

std::vector<std::string> office_atom_pool();

} // namespace trp
