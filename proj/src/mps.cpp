#include "trp/milp.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace trp {

namespace {

// Fixed-format MPS fields start at 1-indexed columns 2, 5, 15, 25, 40, 50.
constexpr std::size_t kFieldStart[6] = {1, 4, 14, 24, 39, 49};

void put_field(std::string& line, int field, const std::string& text) {
    const std::size_t start = kFieldStart[field];
    if (line.size() < start) line.resize(start, ' ');
    line += text;
}

std::string fmt_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    if (std::string(buf).size() > 12) std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string var_name(int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "X%07d", i + 1);
    return buf;
}

std::string row_name(int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "C%07d", i + 1);
    return buf;
}

class ColumnEmitter {
public:
    ColumnEmitter(std::ostream& out, std::string col) : out_(out), col_(std::move(col)) {}
    ~ColumnEmitter() { flush(); }

    void add(const std::string& row, double value) {
        if (pending_) {
            put_field(line_, 4, row);
            put_field(line_, 5, fmt_num(value));
            out_ << line_ << '\n';
            line_.clear();
            pending_ = false;
            return;
        }
        put_field(line_, 1, col_);
        put_field(line_, 2, row);
        put_field(line_, 3, fmt_num(value));
        pending_ = true;
    }

    void flush() {
        if (pending_) {
            out_ << line_ << '\n';
            line_.clear();
            pending_ = false;
        }
    }

private:
    std::ostream& out_;
    std::string col_;
    std::string line_;
    bool pending_ = false;
};

} // namespace

void write_mps(const MilpModel& m, std::ostream& out) {
    m.validate();

    std::string line = "NAME";
    put_field(line, 2, m.name.empty() ? "MODEL" : m.name.substr(0, 8));
    out << line << '\n';
    out << "OBJSENSE\n    MAX\n";

    out << "ROWS\n";
    line.clear();
    put_field(line, 0, "N");
    put_field(line, 1, "OBJ");
    out << line << '\n';
    for (std::size_t i = 0; i < m.cons.size(); ++i) {
        line.clear();
        const char* type = m.cons[i].sense == ConSense::Le   ? "L"
                           : m.cons[i].sense == ConSense::Ge ? "G"
                                                             : "E";
        put_field(line, 0, type);
        put_field(line, 1, row_name(static_cast<int>(i)));
        out << line << '\n';
    }

    // column-major view of the constraint matrix
    std::vector<std::vector<std::pair<int, double>>> cols(m.vars.size());
    for (std::size_t r = 0; r < m.cons.size(); ++r)
        for (const auto& t : m.cons[r].expr.terms)
            cols[static_cast<std::size_t>(t.var)].push_back({static_cast<int>(r), t.coef});
    std::vector<double> obj(m.vars.size(), 0.0);
    for (const auto& t : m.objective.terms) obj[static_cast<std::size_t>(t.var)] += t.coef;

    out << "COLUMNS\n";
    bool in_integer = false;
    int marker_id = 0;
    auto marker = [&](const char* kind) {
        std::string l;
        put_field(l, 1, "M" + std::to_string(++marker_id));
        put_field(l, 2, "'MARKER'");
        put_field(l, 4, kind);
        out << l << '\n';
    };
    for (std::size_t v = 0; v < m.vars.size(); ++v) {
        const bool integral = m.vars[v].kind != VarKind::Continuous;
        if (integral && !in_integer) { marker("'INTORG'"); in_integer = true; }
        if (!integral && in_integer) { marker("'INTEND'"); in_integer = false; }
        ColumnEmitter emit(out, var_name(static_cast<int>(v)));
        bool any = false;
        if (obj[v] != 0.0) { emit.add("OBJ", obj[v]); any = true; }
        for (const auto& [r, coef] : cols[v]) { emit.add(row_name(r), coef); any = true; }
        if (!any) emit.add("OBJ", 0.0); // keep the column known to readers
    }
    if (in_integer) marker("'INTEND'");

    out << "RHS\n";
    {
        ColumnEmitter emit(out, "RHS1");
        for (std::size_t r = 0; r < m.cons.size(); ++r)
            if (m.cons[r].rhs != 0.0) emit.add(row_name(static_cast<int>(r)), m.cons[r].rhs);
    }

    out << "BOUNDS\n";
    for (std::size_t v = 0; v < m.vars.size(); ++v) {
        const auto& var = m.vars[v];
        auto bound = [&](const char* type, bool with_value, double value) {
            std::string l;
            put_field(l, 0, type);
            put_field(l, 1, "BND1");
            put_field(l, 2, var_name(static_cast<int>(v)));
            if (with_value) put_field(l, 3, fmt_num(value));
            out << l << '\n';
        };
        if (var.kind == VarKind::Binary && var.lo == 0.0 && var.hi == 1.0) {
            bound("BV", false, 0);
            continue;
        }
        if (var.lo == var.hi) {
            bound("FX", true, var.lo);
            continue;
        }
        if (std::isinf(var.lo))
            bound("MI", false, 0);
        else
            bound("LO", true, var.lo);
        if (std::isinf(var.hi))
            bound("PL", false, 0);
        else
            bound("UP", true, var.hi);
    }
    out << "ENDATA\n";
}

std::string to_mps(const MilpModel& m) {
    std::ostringstream out;
    write_mps(m, out);
    return out.str();
}

namespace {

std::vector<std::string> tokens(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

} // namespace

MilpModel read_mps(std::istream& in) {
    MilpModel m;
    std::map<std::string, int> row_ids;  // constraint rows
    std::map<std::string, int> col_ids;
    std::string obj_row;
    bool maximize = false;
    bool expect_objsense_value = false;
    bool in_integer = false;

    enum class Section { None, Rows, Columns, Rhs, Bounds, Ranges } section = Section::None;

    auto column = [&](const std::string& name) {
        auto it = col_ids.find(name);
        if (it != col_ids.end()) return it->second;
        const int id = m.add_var(name, in_integer ? VarKind::Integer : VarKind::Continuous,
                                 0.0, kInf);
        col_ids.emplace(name, id);
        return id;
    };

    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '*') continue;
        if (line[0] != ' ' && line[0] != '\t') {
            auto tk = tokens(line);
            if (tk.empty()) continue;
            const std::string& head = tk[0];
            expect_objsense_value = false;
            if (head == "NAME") {
                if (tk.size() > 1) m.name = tk[1];
                section = Section::None;
            } else if (head == "OBJSENSE") {
                if (tk.size() > 1)
                    maximize = tk[1] == "MAX" || tk[1] == "MAXIMIZE";
                else
                    expect_objsense_value = true;
                section = Section::None;
            } else if (head == "ROWS") {
                section = Section::Rows;
            } else if (head == "COLUMNS") {
                section = Section::Columns;
            } else if (head == "RHS") {
                section = Section::Rhs;
            } else if (head == "RANGES") {
                section = Section::Ranges;
            } else if (head == "BOUNDS") {
                section = Section::Bounds;
            } else if (head == "ENDATA") {
                break;
            } else {
                throw ParseError("unknown MPS section '" + head + "'");
            }
            continue;
        }

        auto tk = tokens(line);
        if (tk.empty()) continue;
        if (expect_objsense_value) {
            maximize = tk[0] == "MAX" || tk[0] == "MAXIMIZE";
            expect_objsense_value = false;
            continue;
        }
        switch (section) {
        case Section::Rows: {
            if (tk.size() < 2) throw ParseError("bad ROWS line: " + line);
            const std::string& type = tk[0];
            const std::string& name = tk[1];
            if (type == "N") {
                if (obj_row.empty()) obj_row = name; // later N rows are ignored
            } else {
                ConSense sense = type == "L"   ? ConSense::Le
                                 : type == "G" ? ConSense::Ge
                                 : type == "E" ? ConSense::Eq
                                               : throw ParseError("bad row type " + type);
                row_ids.emplace(name, static_cast<int>(m.cons.size()));
                m.cons.push_back({name, {}, sense, 0.0});
            }
            break;
        }
        case Section::Columns: {
            bool is_marker = false;
            for (const auto& t : tk)
                if (t == "'MARKER'") is_marker = true;
            if (is_marker) {
                for (const auto& t : tk) {
                    if (t == "'INTORG'") in_integer = true;
                    if (t == "'INTEND'") in_integer = false;
                }
                break;
            }
            if (tk.size() < 3 || tk.size() % 2 == 0)
                throw ParseError("bad COLUMNS line: " + line);
            const int var = column(tk[0]);
            for (std::size_t i = 1; i + 1 < tk.size(); i += 2) {
                const double value = std::stod(tk[i + 1]);
                if (tk[i] == obj_row) {
                    if (value != 0.0) m.objective.add(var, value);
                } else {
                    auto it = row_ids.find(tk[i]);
                    if (it == row_ids.end())
                        throw ParseError("COLUMNS references unknown row " + tk[i]);
                    m.cons[static_cast<std::size_t>(it->second)].expr.add(var, value);
                }
            }
            break;
        }
        case Section::Rhs: {
            if (tk.size() < 3 || tk.size() % 2 == 0) throw ParseError("bad RHS line: " + line);
            for (std::size_t i = 1; i + 1 < tk.size(); i += 2) {
                if (tk[i] == obj_row) continue; // objective offset unsupported, ignored
                auto it = row_ids.find(tk[i]);
                if (it == row_ids.end()) throw ParseError("RHS references unknown row " + tk[i]);
                m.cons[static_cast<std::size_t>(it->second)].rhs = std::stod(tk[i + 1]);
            }
            break;
        }
        case Section::Bounds: {
            if (tk.size() < 3) throw ParseError("bad BOUNDS line: " + line);
            const std::string& type = tk[0];
            const int var = column(tk[2]);
            auto& v = m.vars[static_cast<std::size_t>(var)];
            const double value = tk.size() > 3 ? std::stod(tk[3]) : 0.0;
            if (type == "UP") v.hi = value;
            else if (type == "LO") v.lo = value;
            else if (type == "FX") v.lo = v.hi = value;
            else if (type == "FR") { v.lo = -kInf; v.hi = kInf; }
            else if (type == "MI") v.lo = -kInf;
            else if (type == "PL") v.hi = kInf;
            else if (type == "BV") { v.kind = VarKind::Binary; v.lo = 0.0; v.hi = 1.0; }
            else if (type == "UI") { v.kind = VarKind::Integer; v.hi = value; }
            else if (type == "LI") { v.kind = VarKind::Integer; v.lo = value; }
            else throw ParseError("unsupported bound type " + type);
            break;
        }
        case Section::Ranges:
            throw ParseError("MPS RANGES section is not supported");
        case Section::None:
            break;
        }
    }

    if (!maximize)
        for (auto& t : m.objective.terms) t.coef = -t.coef;
    for (auto& c : m.cons) c.expr.normalize();
    m.objective.normalize();
    m.validate();
    return m;
}

} // namespace trp
