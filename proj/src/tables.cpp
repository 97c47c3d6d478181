#include "mines/gadgets.hpp"

namespace mines {

namespace {

std::vector<bool> bits(std::string_view s) {
    std::vector<bool> out;
    for (char c : s) out.push_back(c == 'T');
    return out;
}

TruthTable table(std::vector<std::string> inputs, std::vector<std::string> internals,
                 std::vector<std::string> outputs,
                 std::initializer_list<std::pair<std::string_view, std::initializer_list<std::string_view>>> rows) {
    TruthTable t{std::move(inputs), std::move(internals), std::move(outputs), {}};
    for (const auto& [in, admissible] : rows)
        for (auto a : admissible) t.rows[bits(in)].insert(bits(a));
    return t;
}

}  // namespace

std::optional<TruthTable> expected_table(const std::string& name) {
    if (name == "sq_wire" || name == "sq_curve" || name == "hex_curve" ||
        name == "hex_phase_changer")
        return table({"x"}, {}, {"out"}, {{"T", {"T"}}, {"F", {"F"}}});
    if (name == "hex_wire" || name == "hex_wire_legacy")
        return table({}, {}, {"out"}, {{"", {"T", "F"}}});
    if (name == "sq_splitter" || name == "hex_splitter")
        return table({"x"}, {}, {"out1", "out2"}, {{"T", {"TT"}}, {"F", {"FF"}}});
    if (name == "sq_not" || name == "hex_not" || name == "hex_not_legacy")
        return table({"x"}, {}, {"out"}, {{"T", {"F"}}, {"F", {"T"}}});
    if (name == "sq_and")
        // Row F,F: the blue 4 forces exactly one of s, r; both completions occur.
        return table({"u", "v"}, {"s", "r", "a1", "a2", "a3", "b1", "b2", "b3"}, {"t"},
                     {{"TT", {"TTFTTFTTT"}},
                      {"TF", {"TTTFTTFTF"}},
                      {"FT", {"TTTFTTFTF"}},
                      {"FF", {"FTTTFTFTF", "TFTFTTTFF"}}});
    if (name == "sq_or")
        return table({"u", "v"}, {"s", "a1", "a2", "a3"}, {"r"},
                     {{"TT", {"TTTFT"}}, {"TF", {"FTFTT"}}, {"FT", {"FTFTT"}}, {"FF", {"FFTTF"}}});
    if (name == "hex_or")
        return table({"u", "v"}, {"s", "a1", "a2", "a3", "a4", "a5", "a6"}, {"r"},
                     {{"TT", {"TTFTTTFT"}},
                      {"TF", {"FFTTFTFT", "FFTFTTFT"}},
                      {"FT", {"FFTTFTFT", "FFTFTTFT"}},
                      {"FF", {"FFTTTFTF"}}});
    if (name == "hex_and")
        return table({"u", "v"}, {"s", "a1", "a2", "a3", "a4", "a5", "a6"}, {"r"},
                     {{"TT", {"TTTTFTFT"}},
                      {"TF", {"TTTFTFTF", "TTFTTFTF"}},
                      {"FT", {"TTTFTFTF", "TTFTTFTF"}},
                      {"FF", {"FFTTTFTF"}}});
    return std::nullopt;
}

}  // namespace mines
