#include "mines/solver.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace mines {

namespace {

struct CoordHash {
    std::size_t operator()(Coord c) const noexcept {
        return std::hash<long long>{}((static_cast<long long>(c.col) << 32) ^
                                      static_cast<unsigned>(c.row));
    }
};

// Backtracking search state. Each clue keeps its residual requirement
// (clue minus flagged neighbours) and running counts of assigned mines and
// undecided neighbours so that both rules are O(1) to test.
class Engine {
public:
    explicit Engine(const Board& b) {
        vars_ = b.covered_cells();
        for (std::size_t i = 0; i < vars_.size(); ++i) index_[vars_[i]] = static_cast<int>(i);
        var_clues_.resize(vars_.size());
        for (const auto& [c, cell] : b.cells) {
            if (!cell.is_clue()) continue;
            Clue k;
            k.need = cell.clue;
            for (Coord n : neighbors(b.grid, c)) {
                const Cell* nc = b.find(n);
                if (!nc) continue;
                if (nc->is_flagged()) --k.need;
                if (nc->is_covered()) k.vars.push_back(index_.at(n));
            }
            k.undecided = static_cast<int>(k.vars.size());
            int id = static_cast<int>(clues_.size());
            for (int v : k.vars) var_clues_[v].push_back(id);
            clues_.push_back(std::move(k));
        }
        value_.assign(vars_.size(), -1);
    }

    const std::vector<Coord>& vars() const { return vars_; }
    int index(Coord c) const {
        auto it = index_.find(c);
        return it == index_.end() ? -1 : it->second;
    }
    int value(int v) const { return value_[v]; }

    // Returns false on an immediate conflict with an earlier decision.
    bool assign(int v, bool mine) {
        if (value_[v] != -1) return value_[v] == static_cast<int>(mine);
        value_[v] = mine ? 1 : 0;
        trail_.push_back(v);
        for (int c : var_clues_[v]) {
            --clues_[c].undecided;
            if (mine) ++clues_[c].mines;
            queue_.push_back(c);
        }
        return true;
    }

    std::size_t mark() const { return trail_.size(); }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            int v = trail_.back();
            trail_.pop_back();
            for (int c : var_clues_[v]) {
                ++clues_[c].undecided;
                if (value_[v] == 1) --clues_[c].mines;
            }
            value_[v] = -1;
        }
        queue_.clear();
    }

    void enqueue_all() {
        for (std::size_t c = 0; c < clues_.size(); ++c) queue_.push_back(static_cast<int>(c));
    }

    bool propagate() {
        while (!queue_.empty()) {
            int c = queue_.back();
            queue_.pop_back();
            const Clue& k = clues_[c];
            int rem = k.need - k.mines;
            if (rem < 0 || rem > k.undecided) {
                queue_.clear();
                return false;
            }
            if (k.undecided == 0 || (rem != 0 && rem != k.undecided)) continue;
            bool mine = rem != 0;
            for (int v : k.vars)
                if (value_[v] == -1) assign(v, mine);
        }
        return true;
    }

private:
    struct Clue {
        int need = 0;
        int mines = 0;
        int undecided = 0;
        std::vector<int> vars;
    };

    std::vector<Coord> vars_;
    std::unordered_map<Coord, int, CoordHash> index_;
    std::vector<Clue> clues_;
    std::vector<std::vector<int>> var_clues_;
    std::vector<int> value_;
    std::vector<int> trail_;
    std::vector<int> queue_;
};

class Search {
public:
    using Visit = std::function<bool(const std::vector<Coord>&, const Assignment&)>;

    Search(Engine& e, const Limits& limits, const Visit& visit)
        : e_(e), limits_(limits), visit_(visit), row_(e.vars().size()) {}

    void run() {
        e_.enqueue_all();
        if (e_.propagate()) descend(0);
    }

private:
    // Returns false once the visitor asked to stop.
    bool descend(std::size_t from) {
        const std::size_t n = e_.vars().size();
        while (from < n && e_.value(static_cast<int>(from)) != -1) ++from;
        if (from == n) {
            if (++found_ > limits_.max_solutions)
                throw LimitExceeded("more than " + std::to_string(limits_.max_solutions) +
                                    " solutions");
            for (std::size_t i = 0; i < n; ++i) row_[i] = e_.value(static_cast<int>(i)) == 1;
            return visit_(e_.vars(), row_);
        }
        for (bool mine : {true, false}) {
            auto m = e_.mark();
            e_.assign(static_cast<int>(from), mine);
            bool keep_going = !e_.propagate() || descend(from + 1);
            e_.undo(m);
            if (!keep_going) return false;
        }
        return true;
    }

    Engine& e_;
    const Limits& limits_;
    const Visit& visit_;
    Assignment row_;
    std::size_t found_ = 0;
};

void check_covered_limit(const Board& b, const Limits& limits) {
    std::size_t n = 0;
    for (const auto& [c, cell] : b.cells)
        if (cell.is_covered()) ++n;
    if (n > limits.max_covered)
        throw LimitExceeded(std::to_string(n) + " covered cells exceed the limit of " +
                            std::to_string(limits.max_covered));
}

}  // namespace

std::size_t SolutionSet::index_of(Coord c) const {
    auto it = std::lower_bound(coords.begin(), coords.end(), c);
    if (it == coords.end() || *it != c) throw UnknownCoord(c);
    return static_cast<std::size_t>(it - coords.begin());
}

PartialAssignment PartialAssignment::blank(const Board& b) {
    PartialAssignment p;
    for (Coord c : b.covered_cells()) p.undecided.insert(c);
    return p;
}

std::optional<PartialAssignment> propagate(const Board& b, const PartialAssignment& start) {
    Engine e(b);
    for (const auto& [c, mine] : start.decided) {
        int v = e.index(c);
        if (v < 0) throw PinError(c);
        if (!e.assign(v, mine)) return std::nullopt;
    }
    e.enqueue_all();
    if (!e.propagate()) return std::nullopt;
    PartialAssignment out;
    for (std::size_t i = 0; i < e.vars().size(); ++i) {
        int v = e.value(static_cast<int>(i));
        if (v == -1)
            out.undecided.insert(e.vars()[i]);
        else
            out.decided[e.vars()[i]] = v == 1;
    }
    return out;
}

void for_each_solution(const Board& b, const std::vector<Pin>& pins, const Limits& limits,
                       const std::function<bool(const std::vector<Coord>&, const Assignment&)>& f) {
    check_covered_limit(b, limits);
    Engine e(b);
    for (const Pin& p : pins)
        if (e.index(p.at) < 0) throw PinError(p.at);
    for (const Pin& p : pins)
        if (!e.assign(e.index(p.at), p.mine)) return;
    Search(e, limits, f).run();
}

SolutionSet enumerate_solutions(const Board& b, const std::vector<Pin>& pins,
                                const Limits& limits) {
    SolutionSet s;
    s.coords = b.covered_cells();
    for_each_solution(b, pins, limits, [&](const std::vector<Coord>&, const Assignment& a) {
        s.solutions.push_back(a);
        return true;
    });
    return s;
}

std::uint64_t count_solutions(const Board& b, const std::vector<Pin>& pins,
                              const Limits& limits) {
    std::uint64_t n = 0;
    for_each_solution(b, pins, limits, [&](const std::vector<Coord>&, const Assignment&) {
        ++n;
        return true;
    });
    return n;
}

std::map<Coord, bool> forced_cells(const SolutionSet& s) {
    if (s.empty()) throw EmptySolutionSet();
    std::map<Coord, bool> out;
    for (std::size_t i = 0; i < s.coords.size(); ++i) {
        bool v = s.solutions.front()[i];
        bool constant = std::all_of(s.solutions.begin(), s.solutions.end(),
                                    [&](const Assignment& a) { return a[i] == v; });
        if (constant) out[s.coords[i]] = v;
    }
    return out;
}

std::set<std::vector<bool>> project_solutions(const SolutionSet& s,
                                              const std::vector<Coord>& cells) {
    std::vector<std::size_t> idx;
    for (Coord c : cells) idx.push_back(s.index_of(c));
    std::set<std::vector<bool>> out;
    for (const auto& a : s.solutions) {
        std::vector<bool> t;
        for (auto i : idx) t.push_back(a[i]);
        out.insert(std::move(t));
    }
    return out;
}

bool satisfies(const Board& b, const std::vector<Coord>& coords, const Assignment& a) {
    std::map<Coord, bool> value;
    for (std::size_t i = 0; i < coords.size(); ++i) value[coords[i]] = a[i];
    for (const auto& [c, cell] : b.cells) {
        if (!cell.is_clue()) continue;
        int mines = 0;
        for (Coord n : neighbors(b.grid, c)) {
            const Cell* nc = b.find(n);
            if (!nc) continue;
            if (nc->is_flagged()) ++mines;
            if (nc->is_covered() && value.at(n)) ++mines;
        }
        if (mines != cell.clue) return false;
    }
    return true;
}

bool ClaimReport::pass() const {
    return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
}

bool ClaimReport::pass(ClaimResult::Kind kind) const {
    return std::all_of(results.begin(), results.end(),
                       [&](const auto& r) { return r.kind != kind || r.pass; });
}

ClaimReport check_claims(const Board& b, const Limits& limits) {
    SolutionSet s = enumerate_solutions(b, {}, limits);
    if (s.empty()) throw EmptySolutionSet();
    ClaimReport report;
    report.solutions = s.size();
    for (Coord c : b.mines) {
        std::size_t i = s.index_of(c);
        std::size_t clear = std::count_if(s.solutions.begin(), s.solutions.end(),
                                          [&](const Assignment& a) { return !a[i]; });
        report.results.push_back({ClaimResult::Kind::ForcedMine, "mine " + to_string(c),
                                  clear == 0,
                                  clear == 0 ? "" : "clear in " + std::to_string(clear) +
                                                        " of " + std::to_string(s.size()) +
                                                        " solutions"});
    }
    for (const std::string& name : b.label_names()) {
        std::vector<std::pair<std::size_t, bool>> cells;
        for (const Label* l : b.labels_named(name)) cells.push_back({s.index_of(l->at), l->primed});
        std::size_t bad = 0;
        for (const auto& a : s.solutions) {
            bool ref = a[cells.front().first] != cells.front().second;
            bool ok = std::all_of(cells.begin(), cells.end(), [&](const auto& lc) {
                return (a[lc.first] != lc.second) == ref;
            });
            if (!ok) ++bad;
        }
        report.results.push_back({ClaimResult::Kind::LabelConsistency, "label " + name, bad == 0,
                                  bad == 0 ? "" : "inconsistent in " + std::to_string(bad) +
                                                      " of " + std::to_string(s.size()) +
                                                      " solutions"});
    }
    return report;
}

std::string dump_solutions(const SolutionSet& s) {
    std::ostringstream out;
    out << "coords";
    for (Coord c : s.coords) out << ' ' << c.col << ',' << c.row;
    out << '\n';
    for (const auto& a : s.solutions) {
        for (bool m : a) out << (m ? 'M' : '.');
        out << '\n';
    }
    return out.str();
}

}  // namespace mines
