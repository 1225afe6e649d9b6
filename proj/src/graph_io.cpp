#include "homgibbs/graph_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace homgibbs {

using nlohmann::json;

namespace {

json read_json(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

void write_json(const json& j, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

struct Parsed {
    std::size_t n = 0;
    std::vector<Edge> edges;
    std::vector<std::string> labels;
};

Parsed parse_common(const json& j, std::string_view expected_type)
{
    if (!j.is_object())
        throw std::invalid_argument("graph JSON must be an object");
    if (j.contains("type") && j.at("type") != expected_type)
        throw std::invalid_argument("expected graph type '" + std::string(expected_type) + "', got " +
                                    j.at("type").dump());
    Parsed p;
    if (!j.contains("q") || !j.at("q").is_number_integer() || j.at("q").get<long long>() < 0)
        throw std::invalid_argument("field 'q' must be a non-negative integer");
    p.n = j.at("q").get<std::size_t>();

    auto index = [&](const json& v, const char* field) {
        if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<std::size_t>() >= p.n)
            throw std::invalid_argument(std::string("field '") + field + "' has an index out of range: " + v.dump());
        return v.get<std::uint32_t>();
    };

    if (j.contains("adjacency")) {
        const auto& m = j.at("adjacency");
        if (!m.is_array() || m.size() != p.n)
            throw std::invalid_argument("field 'adjacency' must be a q x q matrix");
        for (std::size_t a = 0; a < p.n; ++a) {
            if (!m[a].is_array() || m[a].size() != p.n)
                throw std::invalid_argument("field 'adjacency' must be a q x q matrix");
            for (std::size_t b = 0; b < p.n; ++b) {
                const bool ab = m[a][b].get<int>() != 0;
                const bool ba = m[b][a].get<int>() != 0;
                if (ab != ba)
                    throw std::invalid_argument("asymmetric adjacency between " + std::to_string(a) + " and " +
                                                std::to_string(b));
                if (ab && a <= b)
                    p.edges.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)});
            }
        }
    }
    if (j.contains("edges")) {
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2)
                throw std::invalid_argument("each entry of 'edges' must be a pair");
            p.edges.push_back({index(e[0], "edges"), index(e[1], "edges")});
        }
    }
    if (j.contains("loops"))
        for (const auto& v : j.at("loops")) {
            auto i = index(v, "loops");
            p.edges.push_back({i, i});
        }
    if (j.contains("labels")) {
        p.labels.resize(p.n);
        for (std::size_t i = 0; i < p.n; ++i)
            p.labels[i] = std::to_string(i);
        for (const auto& [key, value] : j.at("labels").items()) {
            std::size_t pos = 0;
            auto i = std::stoul(key, &pos);
            if (pos != key.size() || i >= p.n)
                throw std::invalid_argument("label key '" + key + "' is not a node index");
            p.labels[i] = value.get<std::string>();
        }
    }
    return p;
}

std::string dot_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\')
            out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

}  // namespace

json to_json(const ConstraintGraph& h)
{
    json j;
    j["type"] = "constraint";
    j["q"] = h.size();
    j["edges"] = json::array();
    j["loops"] = json::array();
    for (const auto& e : h.edges()) {
        if (e.a == e.b)
            j["loops"].push_back(e.a);
        else
            j["edges"].push_back({e.a, e.b});
    }
    if (!h.labels().empty()) {
        j["labels"] = json::object();
        for (Node i = 0; i < h.size(); ++i)
            j["labels"][std::to_string(i)] = h.labels()[i];
    }
    return j;
}

json to_json(const Board& g)
{
    json j;
    j["type"] = "board";
    j["q"] = g.size();
    j["edges"] = json::array();
    for (const auto& e : g.edges())
        j["edges"].push_back({e.a, e.b});
    const auto& geo = g.geometry();
    if (geo.kind == BoardGeometry::Kind::grid) {
        j["coords"] = json::array();
        for (const auto& c : geo.coords) {
            json row = json::array();
            for (unsigned k = 0; k < std::max(1U, geo.dim); ++k)
                row.push_back(c[k]);
            j["coords"].push_back(row);
        }
    }
    return j;
}

ConstraintGraph constraint_graph_from_json(const json& j)
{
    auto p = parse_common(j, "constraint");
    return ConstraintGraph(p.n, p.edges, std::move(p.labels));
}

Board board_from_json(const json& j)
{
    auto p = parse_common(j, "board");
    for (const auto& e : p.edges)
        if (e.a == e.b)
            throw std::invalid_argument("board has a loop at site " + std::to_string(e.a));
    BoardGeometry geo;
    if (j.contains("coords")) {
        const auto& cs = j.at("coords");
        if (!cs.is_array() || cs.size() != p.n)
            throw std::invalid_argument("field 'coords' must list one coordinate tuple per site");
        geo.kind = BoardGeometry::Kind::grid;
        for (const auto& c : cs) {
            if (!c.is_array() || c.empty() || c.size() > 3)
                throw std::invalid_argument("coordinate tuples must have 1 to 3 entries");
            geo.dim = static_cast<unsigned>(c.size());
            std::array<int, 3> xyz{0, 0, 0};
            for (std::size_t k = 0; k < c.size(); ++k)
                xyz[k] = c[k].get<int>();
            geo.coords.push_back(xyz);
        }
    }
    return Board(p.n, p.edges, std::move(geo));
}

ConstraintGraph load_constraint_graph(const std::filesystem::path& path)
{
    return constraint_graph_from_json(read_json(path));
}

Board load_board(const std::filesystem::path& path) { return board_from_json(read_json(path)); }

void save(const ConstraintGraph& h, const std::filesystem::path& path) { write_json(to_json(h), path); }
void save(const Board& g, const std::filesystem::path& path) { write_json(to_json(g), path); }

ConstraintGraph resolve_constraint_graph(const std::string& spec)
{
    if (std::filesystem::is_regular_file(spec))
        return load_constraint_graph(spec);
    return make_standard(spec);
}

Board resolve_board(const std::string& spec)
{
    if (std::filesystem::is_regular_file(spec))
        return load_board(spec);
    return make_board(spec);
}

std::string export_dot(const ConstraintGraph& h)
{
    std::ostringstream out;
    out << "graph H {\n";
    for (Node i = 0; i < h.size(); ++i) {
        out << "  n" << i << " [label=\"" << dot_escape(h.label(i)) << "\"";
        if (h.looped(i))
            out << ", peripheries=2";
        out << "];\n";
    }
    for (const auto& e : h.edges())
        if (e.a != e.b)
            out << "  n" << e.a << " -- n" << e.b << ";\n";
    out << "}\n";
    return out.str();
}

std::string export_dot(const Board& g)
{
    std::ostringstream out;
    out << "graph G {\n";
    for (Site s = 0; s < g.size(); ++s)
        out << "  s" << s << ";\n";
    for (const auto& e : g.edges())
        out << "  s" << e.a << " -- s" << e.b << ";\n";
    out << "}\n";
    return out.str();
}

}  // namespace homgibbs
