#include "fidget/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace fidget {

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) fail(ErrorCode::Internal, "double formatting failed");
  return std::string(buf, ptr);
}

namespace {

double parse_double(std::string_view s, const std::string& context) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    fail(ErrorCode::Parse,
         context + ": \"" + std::string(s) + "\" is not a number");
  }
  return v;
}

long parse_long(std::string_view s, const std::string& context) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    fail(ErrorCode::Parse,
         context + ": \"" + std::string(s) + "\" is not an integer");
  }
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

void check_plain_field(const std::string& value, const char* what) {
  if (value.find_first_of(",\n\r\"") != std::string::npos) {
    fail(ErrorCode::InvalidArgument,
         std::string(what) + " \"" + value + "\" contains CSV delimiters");
  }
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace

PoseSequence load_keypoints(const std::string& path,
                            std::shared_ptr<const SkeletonTopology> topology,
                            const std::map<std::string, std::string>& remap) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open keypoint file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, "keypoint file " + path + ": " + e.what());
  }

  std::string subject;
  double fps = 30.0;
  std::vector<std::string> file_joints;
  try {
    subject = j.at("subject").get<std::string>();
    fps = j.at("fps").get<double>();
    file_joints = j.at("joints").get<std::vector<std::string>>();
    if (!j.at("frames").is_array()) {
      fail(ErrorCode::Schema, "\"frames\" must be an array");
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Schema, "keypoint file " + path + ": " + e.what());
  }

  // Map every file joint onto the topology, through the remap table first.
  const int J = topology->joint_count();
  std::vector<int> file_to_topo(file_joints.size(), -1);
  std::vector<bool> covered(J, false);
  for (std::size_t i = 0; i < file_joints.size(); ++i) {
    std::string name = file_joints[i];
    if (auto it = remap.find(name); it != remap.end()) name = it->second;
    const int idx = topology->joint_index(name);
    if (idx < 0) {
      fail(ErrorCode::JointMismatch,
           "joint \"" + file_joints[i] + "\" in " + path +
               " does not map onto the topology");
    }
    if (covered[idx]) {
      fail(ErrorCode::JointMismatch,
           "joint \"" + topology->joints[idx] + "\" appears twice in " + path);
    }
    covered[idx] = true;
    file_to_topo[i] = idx;
  }
  for (int idx = 0; idx < J; ++idx) {
    if (!covered[idx]) {
      fail(ErrorCode::JointMismatch,
           "topology joint \"" + topology->joints[idx] + "\" is missing from " +
               path);
    }
  }

  PoseSequence seq;
  seq.subject_id = subject;
  seq.fps = fps;
  seq.topology = std::move(topology);
  const auto& frames = j.at("frames");
  seq.frames.reserve(frames.size());
  int t = 0;
  for (const auto& frame : frames) {
    if (!frame.is_array() || static_cast<int>(frame.size()) != J) {
      fail(ErrorCode::Schema,
           "frame " + std::to_string(t) + " has " +
               std::to_string(frame.is_array() ? frame.size() : 0) +
               " points, expected " + std::to_string(J));
    }
    std::vector<Vec2> points(J);
    for (std::size_t i = 0; i < frame.size(); ++i) {
      const auto& pt = frame[i];
      if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() ||
          !pt[1].is_number()) {
        fail(ErrorCode::Schema, "frame " + std::to_string(t) + ", joint \"" +
                                    file_joints[i] + "\" is not an [x, y] pair");
      }
      points[file_to_topo[i]] = {pt[0].get<double>(), pt[1].get<double>()};
    }
    seq.frames.push_back(std::move(points));
    ++t;
  }
  seq.validate();
  return seq;
}

void save_keypoints(const PoseSequence& seq, const std::string& path) {
  seq.validate();
  nlohmann::json j;
  j["subject"] = seq.subject_id;
  j["fps"] = seq.fps;
  j["joints"] = seq.topology->joints;
  auto frames = nlohmann::json::array();
  for (const auto& frame : seq.frames) {
    auto points = nlohmann::json::array();
    for (const auto& p : frame) points.push_back({p.x, p.y});
    frames.push_back(std::move(points));
  }
  j["frames"] = std::move(frames);
  write_text_file(path, j.dump() + "\n");
}

std::vector<VideoAnnotation> load_annotations(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty() || lines[0] != "subject_id,label") {
    fail(ErrorCode::Schema,
         "annotation file " + path + " must start with subject_id,label");
  }
  std::vector<VideoAnnotation> out;
  std::map<std::string, bool> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_csv_line(lines[i]);
    if (fields.size() != 2) {
      fail(ErrorCode::Schema, path + ": line " + std::to_string(i + 1) +
                                  " does not have 2 fields");
    }
    if (!seen.emplace(fields[0], true).second) {
      fail(ErrorCode::Schema,
           path + ": subject " + fields[0] + " is annotated twice");
    }
    out.push_back({fields[0], parse_label(fields[1])});
  }
  return out;
}

void save_annotations(const std::vector<VideoAnnotation>& annotations,
                      const std::string& path) {
  std::ostringstream out;
  out << "subject_id,label\n";
  for (const auto& a : annotations) {
    check_plain_field(a.subject_id, "subject_id");
    out << a.subject_id << ',' << label_name(a.label) << '\n';
  }
  write_text_file(path, out.str());
}

namespace {

std::string features_file_name(BodyPart part) {
  return std::string("features_") + part_column(part) + ".csv";
}

}  // namespace

void save_features_dir(const std::vector<FusedFeature>& features,
                       const std::string& dir) {
  for (BodyPart part : kAllParts) {
    std::ostringstream out;
    std::size_t dim = 0;
    for (const auto& f : features) {
      if (f.part == part) {
        dim = f.vector.size();
        break;
      }
    }
    out << "subject_id,part,segment_index,label";
    for (std::size_t i = 0; i < dim; ++i) out << ",v" << i;
    out << '\n';
    for (const auto& f : features) {
      if (f.part != part) continue;
      if (f.vector.size() != dim) {
        fail(ErrorCode::DimensionMismatch,
             std::string(part_name(part)) +
                 " features have inconsistent dimensions");
      }
      check_plain_field(f.subject_id, "subject_id");
      out << f.subject_id << ',' << part_name(part) << ',' << f.segment_index
          << ',' << label_name(f.label);
      for (double v : f.vector) out << ',' << format_double(v);
      out << '\n';
    }
    write_text_file((fs::path(dir) / features_file_name(part)).string(),
                    out.str());
  }
}

std::vector<FusedFeature> load_features_dir(const std::string& dir) {
  std::vector<FusedFeature> features;
  for (BodyPart part : kAllParts) {
    const std::string path = (fs::path(dir) / features_file_name(part)).string();
    if (!fs::exists(path)) {
      fail(ErrorCode::Io, "missing feature file " + path);
    }
    const auto lines = read_lines(path);
    if (lines.empty() || lines[0].rfind("subject_id,part,segment_index,label",
                                        0) != 0) {
      fail(ErrorCode::Schema, path + " has an unexpected header");
    }
    const std::size_t dim = split_csv_line(lines[0]).size() - 4;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto fields = split_csv_line(lines[i]);
      if (fields.size() != dim + 4) {
        fail(ErrorCode::Schema, path + ": line " + std::to_string(i + 1) +
                                    " has " + std::to_string(fields.size()) +
                                    " fields, expected " +
                                    std::to_string(dim + 4));
      }
      FusedFeature f;
      f.subject_id = fields[0];
      f.part = parse_part(fields[1]);
      if (f.part != part) {
        fail(ErrorCode::Schema,
             path + ": line " + std::to_string(i + 1) + " belongs to " +
                 fields[1]);
      }
      f.segment_index = static_cast<int>(
          parse_long(fields[2], path + " segment_index"));
      f.label = parse_label(fields[3]);
      f.vector.reserve(dim);
      for (std::size_t k = 0; k < dim; ++k) {
        f.vector.push_back(parse_double(fields[4 + k], path));
      }
      features.push_back(std::move(f));
    }
  }
  if (features.empty()) {
    fail(ErrorCode::EmptyDataset, "no features found in " + dir);
  }
  return features;
}

void save_segment_predictions(const std::vector<SegmentPrediction>& preds,
                              const std::string& path) {
  std::ostringstream out;
  out << "subject_id,part,segment_index,predicted,votes_fm_minus\n";
  for (const auto& p : preds) {
    check_plain_field(p.subject_id, "subject_id");
    out << p.subject_id << ',' << part_name(p.part) << ',' << p.segment_index
        << ',' << label_name(p.predicted) << ','
        << format_double(p.votes_fm_minus) << '\n';
  }
  write_text_file(path, out.str());
}

std::vector<SegmentPrediction> load_segment_predictions(
    const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty() ||
      lines[0] != "subject_id,part,segment_index,predicted,votes_fm_minus") {
    fail(ErrorCode::Schema, path + " has an unexpected header");
  }
  std::vector<SegmentPrediction> preds;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_csv_line(lines[i]);
    if (fields.size() != 5) {
      fail(ErrorCode::Schema, path + ": line " + std::to_string(i + 1) +
                                  " does not have 5 fields");
    }
    SegmentPrediction p;
    p.subject_id = fields[0];
    p.part = parse_part(fields[1]);
    p.segment_index =
        static_cast<int>(parse_long(fields[2], path + " segment_index"));
    p.predicted = parse_label(fields[3]);
    p.votes_fm_minus = parse_double(fields[4], path + " votes_fm_minus");
    preds.push_back(std::move(p));
  }
  return preds;
}

void save_score_vectors(const std::vector<ScoreVector>& vectors,
                        const std::string& path) {
  std::ostringstream out;
  out << "subject_id";
  for (BodyPart part : kAllParts) out << ',' << part_column(part);
  out << ",label\n";
  for (const auto& v : vectors) {
    check_plain_field(v.subject_id, "subject_id");
    out << v.subject_id;
    for (double s : v.scores) out << ',' << format_double(s);
    out << ',' << label_name(v.label) << '\n';
  }
  write_text_file(path, out.str());
}

void save_verdicts(const std::vector<Verdict>& verdicts,
                   const std::string& path) {
  std::ostringstream out;
  out << "subject_id,verdict,vote_fraction\n";
  for (const auto& v : verdicts) {
    check_plain_field(v.subject_id, "subject_id");
    out << v.subject_id << ',' << verdict_name(v.label) << ','
        << format_double(v.vote_fraction) << '\n';
  }
  write_text_file(path, out.str());
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot write " + path);
  out << content;
  if (!out) fail(ErrorCode::Io, "write failed for " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace fidget
