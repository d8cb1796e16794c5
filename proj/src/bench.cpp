#include "trp/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

#include "trp/instances.hpp"
#include "trp/parallel.hpp"

namespace trp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

} // namespace

std::vector<BenchRow> bench_vwts(const VwtsBenchParams& params) {
    struct Cell {
        int states, tasks, horizon;
    };
    std::vector<Cell> cells;
    for (int s : params.states)
        for (int d : params.tasks)
            for (int t : params.horizons) cells.push_back({s, d, t});

    std::vector<BenchRow> rows(cells.size());
    parallel_for(
        cells.size(),
        [&](std::size_t i) {
            const Cell& cell = cells[i];
            const Vwts ts = office_vwts(cell.states, cell.horizon, params.seed);
            const TaskSet tasks = office_tasks(cell.tasks, cell.horizon, params.seed);
            EncodingConfig cfg;
            cfg.horizon = cell.horizon;
            cfg.robustness_window = params.robustness_window;
            cfg.variant = RobustnessVariant::Right;

            const auto t0 = Clock::now();
            const Problem1 enc = build_problem1(ts, tasks, cfg);
            BenchRow row;
            row.model = "vwts";
            row.states = cell.states;
            row.tasks = cell.tasks;
            row.horizon = cell.horizon;
            row.t_encoding = seconds_since(t0);
            row.lpvars = static_cast<int>(enc.model.vars.size());
            row.lpconst = static_cast<int>(enc.model.cons.size());
            row.t_solving = -1.0;
            if (params.solve_limit_s > 0.0) {
                SolveOptions sopts;
                sopts.time_limit_s = params.solve_limit_s;
                const auto t1 = Clock::now();
                solve_milp(enc.model, sopts);
                row.t_solving = seconds_since(t1);
            }
            rows[i] = std::move(row);
        },
        params.workers);
    return rows;
}

std::vector<BenchRow> bench_mdp(const MdpBenchParams& params) {
    std::vector<BenchRow> rows;
    const LabeledMdp mdp = office_mdp(params.states, params.seed);
    for (int d : params.tasks)
        for (int T : params.horizons)
            for (int Tr : params.recedings) {
                TaskSet tasks;
                {
                    const auto pool = office_atom_pool();
                    for (int i = 0; i < d; ++i) {
                        const std::string& atom = pool[static_cast<std::size_t>(i + 1) %
                                                       pool.size()];
                        tasks.tasks.push_back(
                            {make_eventually({0, std::max(2, T / 2)}, make_atom(atom)),
                             static_cast<double>(1 + i)});
                    }
                }
                RecedingConfig cfg;
                cfg.horizon = T;
                cfg.receding = Tr;
                cfg.robustness_window = params.robustness_window;
                cfg.workers = params.workers;
                cfg.solver.time_limit_s = params.milp_time_limit_s;
                RewardCache cache;
                const RecedingPlan plan =
                    plan_receding(mdp, tasks, cfg, std::min(Tr, T), {}, &cache);
                BenchRow row;
                row.model = "mdp";
                row.states = params.states;
                row.tasks = d;
                row.horizon = T;
                row.receding = Tr;
                row.t_encoding = plan.encode_seconds;
                row.t_solving = plan.solve_seconds;
                row.lpvars = static_cast<int>(plan.lp.model.vars.size());
                row.lpconst = static_cast<int>(plan.lp.model.cons.size());
                rows.push_back(row);
            }
    return rows;
}

void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
    out << "model,states,tasks,horizon,receding,t_encoding,t_solving,lpvars,lpconst\n";
    char buf[64];
    for (const auto& r : rows) {
        out << r.model << ',' << r.states << ',' << r.tasks << ',' << r.horizon << ',';
        if (r.receding > 0) out << r.receding;
        out << ',';
        std::snprintf(buf, sizeof(buf), "%.4f", r.t_encoding);
        out << buf << ',';
        if (r.t_solving >= 0.0) {
            std::snprintf(buf, sizeof(buf), "%.4f", r.t_solving);
            out << buf;
        }
        out << ',' << r.lpvars << ',' << r.lpconst << '\n';
    }
}

void write_bench_svg(const std::vector<BenchRow>& rows, std::ostream& out) {
    const int width = 640;
    const int height = 420;
    const int margin = 50;
    int max_h = 1;
    int max_v = 1;
    for (const auto& r : rows) {
        max_h = std::max(max_h, r.horizon);
        max_v = std::max({max_v, r.lpvars, r.lpconst});
    }
    auto sx = [&](double h) { return margin + (width - 2 * margin) * h / max_h; };
    auto sy = [&](double v) { return height - margin - (height - 2 * margin) * v / max_v; };

    std::map<std::string, std::vector<const BenchRow*>> series;
    for (const auto& r : rows)
        series[r.model + "_S" + std::to_string(r.states) + "_D" + std::to_string(r.tasks)]
            .push_back(&r);

    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='"
        << height << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<line x1='" << margin << "' y1='" << height - margin << "' x2='" << width - margin
        << "' y2='" << height - margin << "' stroke='black'/>\n";
    out << "<line x1='" << margin << "' y1='" << margin << "' x2='" << margin << "' y2='"
        << height - margin << "' stroke='black'/>\n";
    out << "<text x='" << width / 2 << "' y='" << height - 12
        << "' font-size='12'>horizon T</text>\n";
    out << "<text x='8' y='" << margin - 8 << "' font-size='12'>model size</text>\n";

    static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                   "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
    int ci = 0;
    int legend_y = margin;
    for (auto& [name, pts] : series) {
        std::sort(pts.begin(), pts.end(),
                  [](const BenchRow* a, const BenchRow* b) { return a->horizon < b->horizon; });
        const char* color = colors[ci++ % 8];
        for (int pass = 0; pass < 2; ++pass) {
            out << "<polyline fill='none' stroke='" << color << "'"
                << (pass ? " stroke-dasharray='5,4'" : "") << " points='";
            for (const auto* r : pts)
                out << sx(r->horizon) << ',' << sy(pass ? r->lpconst : r->lpvars) << ' ';
            out << "'/>\n";
        }
        out << "<text x='" << width - margin + 4 << "' y='" << legend_y << "' font-size='10' fill='"
            << color << "'>" << name << "</text>\n";
        legend_y += 14;
    }
    out << "</svg>\n";
}

} // namespace trp
