#pragma once

#include "homgibbs/graphs.hpp"

#include <filesystem>
#include <string>

#include <json.hpp>

namespace homgibbs {

// JSON schema shared by both graph kinds:
//   {"type": "constraint" | "board", "q": n, "edges": [[i, j], ...],
//    "loops": [i, ...], "labels": {"0": "name", ...}}
// Edges are listed once. A file may instead give a full 0/1 "adjacency"
// matrix, which must be symmetric. Boards reject loops and may carry
// "coords": [[x, y], ...] for rendering.

nlohmann::json to_json(const ConstraintGraph& h);
nlohmann::json to_json(const Board& g);
ConstraintGraph constraint_graph_from_json(const nlohmann::json& j);
Board board_from_json(const nlohmann::json& j);

ConstraintGraph load_constraint_graph(const std::filesystem::path& path);
Board load_board(const std::filesystem::path& path);
void save(const ConstraintGraph& h, const std::filesystem::path& path);
void save(const Board& g, const std::filesystem::path& path);

/// Resolves a standard name (see make_standard) or else a JSON file path.
ConstraintGraph resolve_constraint_graph(const std::string& spec);
/// Resolves a standard name (see make_board) or else a JSON file path.
Board resolve_board(const std::string& spec);

std::string export_dot(const ConstraintGraph& h);
std::string export_dot(const Board& g);

}  // namespace homgibbs
