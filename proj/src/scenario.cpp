#include "privbr/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "privbr/errors.hpp"

namespace privbr {

namespace {

[[noreturn]] void parse_fail(const std::string& origin, int line, const std::string& msg) {
    fail("parse", origin + ":" + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

double parse_double(const std::string& tok, const std::string& origin, int line) {
    try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size() || !std::isfinite(v)) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        parse_fail(origin, line, "expected a number, got '" + tok + "'");
    }
}

// %.17g round-trips doubles exactly and keeps integers short.
std::string format_double(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

} // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& origin) {
    Scenario scenario;
    enum class Section { None, Meta, Vertices, Edges, Players, Defaults };
    Section section = Section::None;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::vector<std::string> tokens = split_ws(line);
        if (tokens.empty()) continue;

        if (tokens[0].front() == '[') {
            const std::string header = tokens[0];
            if (header == "[meta]") section = Section::Meta;
            else if (header == "[vertices]") section = Section::Vertices;
            else if (header == "[edges]") section = Section::Edges;
            else if (header == "[players]") section = Section::Players;
            else if (header == "[defaults]") section = Section::Defaults;
            else parse_fail(origin, lineno, "unknown section " + header);
            continue;
        }

        switch (section) {
            case Section::None:
                parse_fail(origin, lineno, "content before any [section] header");
            case Section::Meta: {
                if (tokens[0] == "name" && tokens.size() >= 2) {
                    scenario.name = tokens[1];
                } else if (tokens[0] == "description") {
                    std::string rest;
                    for (std::size_t i = 1; i < tokens.size(); ++i) {
                        if (i > 1) rest += ' ';
                        rest += tokens[i];
                    }
                    scenario.description = rest;
                } else {
                    parse_fail(origin, lineno, "expected 'name' or 'description'");
                }
                break;
            }
            case Section::Vertices: {
                for (const std::string& v : tokens) scenario.raw.vertices.push_back(v);
                break;
            }
            case Section::Edges: {
                if (tokens.size() < 5)
                    parse_fail(origin, lineno,
                               "edge needs: id tail head (linear a b | table v0 ... vn)");
                RawEdge edge;
                edge.id = tokens[0];
                edge.tail = tokens[1];
                edge.head = tokens[2];
                edge.line = lineno;
                if (tokens[3] == "linear") {
                    if (tokens.size() != 6)
                        parse_fail(origin, lineno, "linear loss needs two numbers");
                    LinearLossSpec lin;
                    lin.intercept = parse_double(tokens[4], origin, lineno);
                    lin.slope = parse_double(tokens[5], origin, lineno);
                    edge.loss = lin;
                } else if (tokens[3] == "table") {
                    std::vector<double> values;
                    for (std::size_t i = 4; i < tokens.size(); ++i)
                        values.push_back(parse_double(tokens[i], origin, lineno));
                    edge.loss = values;
                } else {
                    parse_fail(origin, lineno,
                               "loss spec must be 'linear' or 'table', got '" + tokens[3] +
                                   "'");
                }
                scenario.raw.edges.push_back(std::move(edge));
                break;
            }
            case Section::Players: {
                if (tokens.size() != 2)
                    parse_fail(origin, lineno, "player needs: source destination");
                RawPlayer p;
                p.source = tokens[0];
                p.destination = tokens[1];
                p.line = lineno;
                scenario.raw.players.push_back(std::move(p));
                break;
            }
            case Section::Defaults: {
                if (tokens.size() != 2)
                    parse_fail(origin, lineno, "defaults line needs: key value");
                const std::string& key = tokens[0];
                if (key == "alpha") scenario.alpha = parse_double(tokens[1], origin, lineno);
                else if (key == "epsilon")
                    scenario.epsilon = parse_double(tokens[1], origin, lineno);
                else if (key == "beta") scenario.beta = parse_double(tokens[1], origin, lineno);
                else if (key == "L_bound") {
                    const double v = parse_double(tokens[1], origin, lineno);
                    scenario.raw.l_bound = static_cast<int>(v);
                } else {
                    parse_fail(origin, lineno,
                               "unknown default '" + key +
                                   "' (alpha, epsilon, beta, L_bound)");
                }
                break;
            }
        }
    }

    if (scenario.name.empty()) scenario.name = origin;
    scenario.game = validate_game(scenario.raw);
    scenario.types = validate_players(scenario.game, scenario.raw);
    return scenario;
}

Scenario parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("parse", "cannot open scenario file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_text(buffer.str(), path);
}

std::string format_scenario(const Scenario& scenario) {
    std::ostringstream out;
    out << "[meta]\n";
    out << "name " << scenario.name << "\n";
    if (!scenario.description.empty()) out << "description " << scenario.description << "\n";
    out << "\n[vertices]\n";
    for (const std::string& v : scenario.game.vertices) out << v << "\n";
    out << "\n[edges]\n";
    for (const Edge& e : scenario.game.edges) {
        out << e.id << " " << scenario.game.vertices[static_cast<std::size_t>(e.tail)] << " "
            << scenario.game.vertices[static_cast<std::size_t>(e.head)] << " table";
        for (double v : e.loss.values()) out << " " << format_double(v);
        out << "\n";
    }
    out << "\n[players]\n";
    for (const PlayerType& t : scenario.types)
        out << scenario.game.vertices[static_cast<std::size_t>(t.source)] << " "
            << scenario.game.vertices[static_cast<std::size_t>(t.destination)] << "\n";
    out << "\n[defaults]\n";
    if (scenario.alpha) out << "alpha " << format_double(*scenario.alpha) << "\n";
    if (scenario.epsilon) out << "epsilon " << format_double(*scenario.epsilon) << "\n";
    if (scenario.beta) out << "beta " << format_double(*scenario.beta) << "\n";
    if (scenario.raw.l_bound) out << "L_bound " << *scenario.raw.l_bound << "\n";
    return out.str();
}

} // namespace privbr
