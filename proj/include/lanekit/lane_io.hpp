#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lanekit/eval.hpp"
#include "lanekit/lane.hpp"

namespace lanekit {

class LaneParseError : public std::runtime_error {
 public:
  LaneParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Dataset-level consistency problems (missing files, id mismatches).
class DatasetError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LaneFile {
  std::vector<Lane> lanes;
  int skipped_lines = 0;  // lines with fewer than two distinct-y points
};

/// Parses the one-lane-per-line format: each nonempty line is an
/// even-length whitespace-separated sequence of reals, alternating x y.
/// Lines that do not yield at least two distinct-y points are skipped and
/// counted. Odd token counts and non-numeric tokens abort with the
/// offending line number.
inline LaneFile parse_lane_file(std::string_view text) {
  LaneFile out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    std::vector<double> values;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
      double v = 0.0;
      const auto [end, ec] = std::from_chars(line.data() + i, line.data() + j, v);
      if (ec != std::errc{} || end != line.data() + j || !std::isfinite(v))
        throw LaneParseError(line_no,
                             "invalid number '" + std::string(line.substr(i, j - i)) + "'");
      values.push_back(v);
      i = j;
    }
    if (values.empty()) continue;
    if (values.size() % 2 != 0) throw LaneParseError(line_no, "odd token count");

    std::vector<Point> pts;
    pts.reserve(values.size() / 2);
    for (std::size_t k = 0; k < values.size(); k += 2) pts.push_back({values[k], values[k + 1]});
    if (pts.size() < 2) {
      ++out.skipped_lines;
      continue;
    }
    try {
      out.lanes.emplace_back(std::move(pts));
    } catch (const std::invalid_argument&) {
      ++out.skipped_lines;  // all points collapsed onto one y
    }
  }
  return out;
}

inline std::string format_coord(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.5f", v);
  return buf;
}

/// One lane per line, "x y" pairs with 5 decimals. write -> parse -> write
/// is the identity on the emitted text.
inline std::string write_lane_file(const std::vector<Lane>& lanes) {
  std::string out;
  for (const Lane& lane : lanes) {
    bool first = true;
    for (const Point& p : lane.points()) {
      if (!first) out += ' ';
      out += format_coord(p.x);
      out += ' ';
      out += format_coord(p.y);
      first = false;
    }
    out += '\n';
  }
  return out;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DatasetError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw DatasetError("write failed for " + path.string());
}

struct ImageRecord {
  std::string id;
  std::filesystem::path lane_file;
  std::string category;  // empty = uncategorized

  friend bool operator==(const ImageRecord&, const ImageRecord&) = default;
};

struct DatasetIndex {
  std::filesystem::path root;
  std::vector<ImageRecord> records;  // sorted by id
  std::set<std::string> no_lane_categories;
};

namespace detail {

// List entries may be CULane-style image paths ("/driver_x/frame.jpg"); the
// id is the path with the leading slash and image extension stripped.
inline std::string normalize_list_entry(std::string_view raw) {
  while (!raw.empty() && (raw.back() == '\r' || raw.back() == ' ' || raw.back() == '\t'))
    raw.remove_suffix(1);
  while (!raw.empty() && (raw.front() == ' ' || raw.front() == '\t')) raw.remove_prefix(1);
  if (!raw.empty() && raw.front() == '/') raw.remove_prefix(1);
  for (std::string_view ext : {".jpg", ".png", ".jpeg"})
    if (raw.size() > ext.size() && raw.substr(raw.size() - ext.size()) == ext)
      return std::string(raw.substr(0, raw.size() - ext.size()));
  return std::string(raw);
}

inline std::vector<std::string> read_id_list(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  std::vector<std::string> ids;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    const std::string_view line(text.data() + pos,
                                (eol == std::string::npos ? text.size() : eol) - pos);
    pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
    std::string id = normalize_list_entry(line);
    if (!id.empty()) ids.push_back(std::move(id));
  }
  return ids;
}

}  // namespace detail

/// Builds an index from a dataset root and an image list file. Lane files
/// live at root/<id>.lines.txt and must all exist. Category list files
/// assign ids to named categories; an id's first membership wins. Records
/// come out sorted by id, so repeated scans of an unchanged tree are
/// identical.
inline DatasetIndex scan_dataset(
    const std::filesystem::path& root, const std::filesystem::path& list_file,
    const std::vector<std::pair<std::string, std::filesystem::path>>& category_lists = {},
    std::set<std::string> no_lane_categories = {}) {
  std::map<std::string, std::string> category_of;
  for (const auto& [name, path] : category_lists)
    for (const std::string& id : detail::read_id_list(path)) category_of.emplace(id, name);

  DatasetIndex index;
  index.root = root;
  index.no_lane_categories = std::move(no_lane_categories);
  std::set<std::string> seen;
  for (const std::string& id : detail::read_id_list(list_file)) {
    if (!seen.insert(id).second) throw DatasetError("duplicate image id '" + id + "'");
    ImageRecord rec;
    rec.id = id;
    rec.lane_file = root / (id + ".lines.txt");
    if (!std::filesystem::exists(rec.lane_file))
      throw DatasetError("missing lane file " + rec.lane_file.string());
    if (const auto it = category_of.find(id); it != category_of.end()) rec.category = it->second;
    index.records.push_back(std::move(rec));
  }
  std::sort(index.records.begin(), index.records.end(),
            [](const ImageRecord& a, const ImageRecord& b) { return a.id < b.id; });
  return index;
}

/// Joins a prediction index against a ground-truth index into per-image
/// evaluation records. The two indexes must cover exactly the same image
/// ids; categories come from the ground-truth side. Lines skipped by the
/// lane parser are accumulated into *skipped_lines when given.
inline std::vector<ImageEval> load_image_evals(const DatasetIndex& pred_index,
                                               const DatasetIndex& gt_index,
                                               int* skipped_lines = nullptr) {
  if (pred_index.records.size() != gt_index.records.size())
    throw DatasetError("prediction and ground-truth indexes cover different image sets");
  std::vector<ImageEval> images;
  images.reserve(gt_index.records.size());
  for (std::size_t i = 0; i < gt_index.records.size(); ++i) {
    const ImageRecord& gt_rec = gt_index.records[i];
    const ImageRecord& pred_rec = pred_index.records[i];
    if (gt_rec.id != pred_rec.id)
      throw DatasetError("image '" + gt_rec.id + "' present on only one side");
    ImageEval img;
    img.id = gt_rec.id;
    img.category = gt_rec.category;
    LaneFile gt = parse_lane_file(read_text_file(gt_rec.lane_file));
    LaneFile pred = parse_lane_file(read_text_file(pred_rec.lane_file));
    if (skipped_lines) *skipped_lines += gt.skipped_lines + pred.skipped_lines;
    img.gts = std::move(gt.lanes);
    img.preds = std::move(pred.lanes);
    images.push_back(std::move(img));
  }
  return images;
}

}  // namespace lanekit
