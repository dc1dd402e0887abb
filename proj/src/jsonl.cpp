#include "boxlab/jsonl.hpp"

#include <fstream>
#include <functional>

#include <json.hpp>

namespace boxlab {

namespace {

using nlohmann::json;

double number_field(const json& j, const char* name) {
  if (!j.contains(name)) throw std::runtime_error(std::string("missing field '") + name + "'");
  const auto& v = j.at(name);
  if (!v.is_number()) throw std::runtime_error(std::string("field '") + name + "' must be a number");
  return v.get<double>();
}

std::string id_field(const json& j, const char* name) {
  if (!j.contains(name)) throw std::runtime_error(std::string("missing field '") + name + "'");
  const auto& v = j.at(name);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw std::runtime_error(std::string("field '") + name + "' must be a string or integer");
}

Box box_from_json(const json& j) {
  return Box(number_field(j, "cx"), number_field(j, "cy"),
             number_field(j, "w"), number_field(j, "h"));
}

template <typename T>
std::vector<T> read_lines(const std::string& path,
                          const std::function<T(const json&)>& parse) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::vector<T> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    try {
      out.push_back(parse(json::parse(line)));
    } catch (const std::exception& e) {
      throw ParseError(path, line_no, e.what());
    }
  }
  return out;
}

}  // namespace

ParseError::ParseError(const std::string& path, std::size_t line,
                       const std::string& detail)
    : std::runtime_error(path + ":" + std::to_string(line) + ": " + detail) {}

std::vector<Box> read_boxes_jsonl(const std::string& path) {
  return read_lines<Box>(path, [](const json& j) { return box_from_json(j); });
}

std::vector<Detection> read_detections_jsonl(const std::string& path) {
  return read_lines<Detection>(path, [](const json& j) {
    Detection det{box_from_json(j), number_field(j, "score"),
                  id_field(j, "image_id")};
    if (det.score < 0.0 || det.score > 1.0)
      throw std::runtime_error("field 'score' must lie in [0, 1]");
    return det;
  });
}

std::vector<GroundTruth> read_ground_truths_jsonl(const std::string& path) {
  return read_lines<GroundTruth>(path, [](const json& j) {
    return GroundTruth{box_from_json(j), id_field(j, "image_id")};
  });
}

std::string box_to_json_line(const Box& box) {
  json j;
  j["cx"] = box.cx;
  j["cy"] = box.cy;
  j["w"] = box.w;
  j["h"] = box.h;
  return j.dump();
}

std::string detection_to_json_line(const Detection& det) {
  json j;
  j["cx"] = det.box.cx;
  j["cy"] = det.box.cy;
  j["w"] = det.box.w;
  j["h"] = det.box.h;
  j["score"] = det.score;
  j["image_id"] = det.image_id;
  return j.dump();
}

}  // namespace boxlab
