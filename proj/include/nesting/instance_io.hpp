#pragma once

// JSON instance loading. Schema:
// {
//   "name": str,
//   "board": {"width": num, "length_ub": num, "gx": num, "gy": num},
//   "pieces": [{"id": str, "vertices": [[x,y],...], "reference": [x,y]?,
//               "demand": int, "rotations_deg": [num,...]?}, ...]
// }
// reference defaults to the bounding-box bottom-left corner, rotations to
// {0}. Errors carry the JSON path of the offending field.

#include <cmath>
#include <fstream>
#include <numbers>
#include <string>

#include <json.hpp>

#include "nesting/dotgrid.hpp"

namespace nesting {

struct InstanceFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline double require_number(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number())
    throw InstanceFormatError(path + ": expected a number");
  return j.get<double>();
}

inline Point2 require_point(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2)
    throw InstanceFormatError(path + ": expected [x, y]");
  return {require_number(j[0], path + "[0]"), require_number(j[1], path + "[1]")};
}

}  // namespace detail

inline Instance parse_instance(const nlohmann::json& j) {
  if (!j.is_object()) throw InstanceFormatError("$: expected an object");
  Instance inst;
  if (!j.contains("name") || !j["name"].is_string())
    throw InstanceFormatError("$.name: expected a string");
  inst.name = j["name"].get<std::string>();

  if (!j.contains("board") || !j["board"].is_object())
    throw InstanceFormatError("$.board: expected an object");
  const nlohmann::json& b = j["board"];
  const double width = detail::require_number(
      b.contains("width") ? b["width"] : nlohmann::json(), "$.board.width");
  const double length_ub = detail::require_number(
      b.contains("length_ub") ? b["length_ub"] : nlohmann::json(),
      "$.board.length_ub");
  const double gx = detail::require_number(
      b.contains("gx") ? b["gx"] : nlohmann::json(), "$.board.gx");
  const double gy = detail::require_number(
      b.contains("gy") ? b["gy"] : nlohmann::json(), "$.board.gy");
  inst.board = build_board(width, length_ub, gx, gy);

  if (!j.contains("pieces") || !j["pieces"].is_array() || j["pieces"].empty())
    throw InstanceFormatError("$.pieces: expected a non-empty array");
  for (std::size_t p = 0; p < j["pieces"].size(); ++p) {
    const std::string path = "$.pieces[" + std::to_string(p) + "]";
    const nlohmann::json& pj = j["pieces"][p];
    if (!pj.is_object()) throw InstanceFormatError(path + ": expected an object");

    if (!pj.contains("vertices") || !pj["vertices"].is_array() ||
        pj["vertices"].size() < 3)
      throw InstanceFormatError(path + ".vertices: expected >= 3 points");
    std::vector<Point2> verts;
    for (std::size_t i = 0; i < pj["vertices"].size(); ++i)
      verts.push_back(detail::require_point(
          pj["vertices"][i], path + ".vertices[" + std::to_string(i) + "]"));

    PieceType type;
    try {
      if (pj.contains("reference")) {
        type.polygon = make_polygon(
            verts, detail::require_point(pj["reference"], path + ".reference"));
      } else {
        type.polygon = make_polygon(verts);
      }
    } catch (const InvalidGeometryError& e) {
      throw InstanceFormatError(path + ".vertices: " + e.what());
    }

    if (!pj.contains("demand") || !pj["demand"].is_number_integer() ||
        pj["demand"].get<int>() <= 0)
      throw InstanceFormatError(path + ".demand: expected a positive integer");
    type.demand = pj["demand"].get<int>();

    if (pj.contains("rotations_deg")) {
      if (!pj["rotations_deg"].is_array() || pj["rotations_deg"].empty())
        throw InstanceFormatError(path +
                                  ".rotations_deg: expected a non-empty array");
      type.rotations.clear();
      for (std::size_t i = 0; i < pj["rotations_deg"].size(); ++i) {
        const double deg = detail::require_number(
            pj["rotations_deg"][i],
            path + ".rotations_deg[" + std::to_string(i) + "]");
        type.rotations.push_back(deg * std::numbers::pi / 180.0);
      }
    }
    inst.types.push_back(std::move(type));
  }
  return inst;
}

inline Instance load_instance(const std::string& file_path) {
  std::ifstream is(file_path);
  if (!is) throw InstanceFormatError("cannot open " + file_path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InstanceFormatError(file_path + ": " + e.what());
  }
  try {
    return parse_instance(j);
  } catch (const InstanceFormatError& e) {
    throw InstanceFormatError(file_path + ": " + e.what());
  }
}

}  // namespace nesting
