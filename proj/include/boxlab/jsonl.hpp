#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "boxlab/geometry.hpp"
#include "boxlab/postprocess.hpp"

namespace boxlab {

// Line-delimited JSON records. Boxes are {"cx":..,"cy":..,"w":..,"h":..};
// detections add "score" and "image_id"; ground truths add "image_id".
// Blank lines and lines starting with '#' (report preambles) are skipped.
// Parse failures throw ParseError naming the file, line and field.

struct ParseError : std::runtime_error {
  ParseError(const std::string& path, std::size_t line,
             const std::string& detail);
};

std::vector<Box> read_boxes_jsonl(const std::string& path);
std::vector<Detection> read_detections_jsonl(const std::string& path);
std::vector<GroundTruth> read_ground_truths_jsonl(const std::string& path);

std::string box_to_json_line(const Box& box);
std::string detection_to_json_line(const Detection& det);

}  // namespace boxlab
