// Copyright 2026 The trajforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "trajforge/io.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "trajforge/errors.hpp"

namespace trajforge {

using nlohmann::json;
namespace fs = std::filesystem;

std::string format_double(double v) {
  if (!std::isfinite(v)) throw InputError("cannot serialize non-finite value");
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

// ---- JsonWriter ----

void JsonWriter::separate() {
  if (after_key_) {
    after_key_ = false;
    return;
  }
  if (!first_.empty()) {
    if (!first_.back()) out_ += ',';
    first_.back() = false;
  }
}

JsonWriter& JsonWriter::begin_object() {
  separate();
  out_ += '{';
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += '}';
  first_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  separate();
  out_ += '[';
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += ']';
  first_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::key(std::string_view k) {
  value(k);
  out_ += ':';
  after_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  separate();
  out_ += format_double(v);
  return *this;
}

JsonWriter& JsonWriter::value(std::int64_t v) {
  separate();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(std::uint64_t v) {
  separate();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  separate();
  out_ += v ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::value(std::string_view v) {
  separate();
  out_ += json(std::string(v)).dump();
  return *this;
}

JsonWriter& JsonWriter::point(const Point2& p) {
  begin_array();
  value(p[0]);
  value(p[1]);
  return end_array();
}

// ---- files ----

void write_file_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw Error("write failed: " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- JSON field access ----

namespace {

struct Ctx {
  const std::string& file;
  std::size_t line;

  [[noreturn]] void fail(const std::string& field, const std::string& detail) const {
    throw ParseError(file, line, field, detail);
  }

  const json& member(const json& obj, const std::string& prefix, const char* key) const {
    const std::string field = prefix.empty() ? key : prefix + "." + key;
    if (!obj.is_object()) fail(prefix.empty() ? "<root>" : prefix, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(field, "missing");
    return *it;
  }

  double num(const json& obj, const std::string& prefix, const char* key) const {
    const json& v = member(obj, prefix, key);
    if (!v.is_number()) fail(prefix.empty() ? key : prefix + "." + key, "expected a number");
    return v.get<double>();
  }

  std::int64_t integer(const json& obj, const std::string& prefix, const char* key) const {
    const json& v = member(obj, prefix, key);
    if (!v.is_number_integer()) fail(prefix.empty() ? key : prefix + "." + key, "expected an integer");
    return v.get<std::int64_t>();
  }

  std::uint64_t unsigned_integer(const json& obj, const std::string& prefix, const char* key) const {
    const json& v = member(obj, prefix, key);
    if (!v.is_number_unsigned()) {
      fail(prefix.empty() ? key : prefix + "." + key, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::string str(const json& obj, const std::string& prefix, const char* key) const {
    const json& v = member(obj, prefix, key);
    if (!v.is_string()) fail(prefix.empty() ? key : prefix + "." + key, "expected a string");
    return v.get<std::string>();
  }

  const json& array(const json& obj, const std::string& prefix, const char* key) const {
    const json& v = member(obj, prefix, key);
    if (!v.is_array()) fail(prefix.empty() ? key : prefix + "." + key, "expected an array");
    return v;
  }

  Point2 point(const json& v, const std::string& field) const {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      fail(field, "expected [x, y]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
  }

  ObjectClass cls(const json& obj, const std::string& prefix) const {
    const std::string name = str(obj, prefix, "class");
    try {
      return class_from_name(name);
    } catch (const InputError& e) {
      fail(prefix.empty() ? "class" : prefix + ".class", e.what());
    }
  }

  Provenance provenance(const json& obj) const {
    const std::string text = str(obj, "", "provenance");
    try {
      return Provenance::parse(text);
    } catch (const Error& e) {
      fail("provenance", e.what());
    }
  }
};

std::string indexed(const char* name, std::size_t i) {
  return std::string(name) + "[" + std::to_string(i) + "]";
}

// Calls fn(ctx, object) for every nonempty line.
template <typename Fn>
void for_each_line(std::string_view text, const std::string& file, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(file, line_no, "<json>", e.what());
    }
    const Ctx ctx{file, line_no};
    if (!obj.is_object()) ctx.fail("<root>", "expected an object");
    fn(ctx, obj);
  }
}

void write_box_fields(JsonWriter& w, double cx, double cy, double cz, double l, double wd, double h,
                      double yaw) {
  w.key("cx").value(cx).key("cy").value(cy).key("cz").value(cz);
  w.key("l").value(l).key("w").value(wd).key("h").value(h).key("yaw").value(yaw);
}

}  // namespace

// ---- detections ----

std::string detections_to_jsonl(const std::vector<DetectionFrame>& frames) {
  std::string out;
  for (const auto& f : frames) {
    JsonWriter w;
    w.begin_object().key("scene_id").value(f.scene_id).key("t").value(f.t).key("boxes").begin_array();
    for (const auto& b : f.boxes) {
      w.begin_object();
      write_box_fields(w, b.cx, b.cy, b.cz, b.length, b.width, b.height, b.yaw);
      w.key("score").value(b.score).key("class").value(class_name(b.class_id));
      w.end_object();
    }
    w.end_array().end_object();
    out += w.str();
    out += '\n';
  }
  return out;
}

std::vector<DetectionFrame> parse_detections(std::string_view text, const std::string& file) {
  std::vector<DetectionFrame> frames;
  for_each_line(text, file, [&](const Ctx& c, const json& obj) {
    DetectionFrame f;
    f.scene_id = c.str(obj, "", "scene_id");
    f.t = c.num(obj, "", "t");
    const json& boxes = c.array(obj, "", "boxes");
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      const std::string p = indexed("boxes", i);
      const json& jb = boxes[i];
      Box3D b;
      b.cx = c.num(jb, p, "cx");
      b.cy = c.num(jb, p, "cy");
      b.cz = c.num(jb, p, "cz");
      b.length = c.num(jb, p, "l");
      b.width = c.num(jb, p, "w");
      b.height = c.num(jb, p, "h");
      b.yaw = c.num(jb, p, "yaw");
      b.score = c.num(jb, p, "score");
      b.class_id = c.cls(jb, p);
      b.t = f.t;
      f.boxes.push_back(b);
    }
    frames.push_back(std::move(f));
  });
  return frames;
}

// ---- trajectories ----

std::string trajectories_to_jsonl(const std::vector<Trajectory>& trajs) {
  std::string out;
  for (const auto& tr : trajs) {
    JsonWriter w;
    w.begin_object()
        .key("scene_id")
        .value(tr.scene_id)
        .key("track_id")
        .value(tr.track_id)
        .key("class")
        .value(class_name(tr.class_id))
        .key("provenance")
        .value(tr.provenance.to_string())
        .key("states")
        .begin_array();
    for (const auto& s : tr.states) {
      w.begin_object().key("t").value(s.t);
      write_box_fields(w, s.cx, s.cy, s.cz, s.length, s.width, s.height, s.yaw);
      if (s.score) w.key("score").value(*s.score);
      w.end_object();
    }
    w.end_array().end_object();
    out += w.str();
    out += '\n';
  }
  return out;
}

std::vector<Trajectory> parse_trajectories(std::string_view text, const std::string& file) {
  std::vector<Trajectory> trajs;
  for_each_line(text, file, [&](const Ctx& c, const json& obj) {
    Trajectory tr;
    tr.scene_id = c.str(obj, "", "scene_id");
    tr.track_id = c.integer(obj, "", "track_id");
    tr.class_id = c.cls(obj, "");
    tr.provenance = c.provenance(obj);
    const json& states = c.array(obj, "", "states");
    for (std::size_t i = 0; i < states.size(); ++i) {
      const std::string p = indexed("states", i);
      const json& js = states[i];
      TrajState s;
      s.t = c.num(js, p, "t");
      s.cx = c.num(js, p, "cx");
      s.cy = c.num(js, p, "cy");
      s.cz = c.num(js, p, "cz");
      s.length = c.num(js, p, "l");
      s.width = c.num(js, p, "w");
      s.height = c.num(js, p, "h");
      s.yaw = c.num(js, p, "yaw");
      if (js.contains("score")) s.score = c.num(js, p, "score");
      tr.states.push_back(s);
    }
    trajs.push_back(std::move(tr));
  });
  return trajs;
}

// ---- samples ----

std::string samples_to_jsonl(const SampleSet& set) {
  std::string out;
  for (const auto& s : set.samples) {
    JsonWriter w;
    w.begin_object()
        .key("sample_id")
        .value(s.sample_id)
        .key("scene_id")
        .value(s.scene_id)
        .key("track_id")
        .value(s.track_id)
        .key("anchor_t")
        .value(s.anchor_t)
        .key("past")
        .begin_array();
    for (const auto& p : s.past) w.point(p);
    w.end_array().key("future").begin_array();
    for (const auto& p : s.future) w.point(p);
    w.end_array();
    w.key("origin").point(s.to_world.origin);
    w.key("heading").value(s.to_world.heading);
    w.key("provenance").value(s.provenance.to_string());
    if (s.score != 1.0) w.key("score").value(s.score);
    w.end_object();
    out += w.str();
    out += '\n';
  }
  return out;
}

SampleSet parse_samples(std::string_view text, const std::string& file) {
  SampleSet set;
  bool first = true;
  for_each_line(text, file, [&](const Ctx& c, const json& obj) {
    ForecastSample s;
    s.sample_id = c.unsigned_integer(obj, "", "sample_id");
    s.scene_id = c.str(obj, "", "scene_id");
    s.track_id = c.integer(obj, "", "track_id");
    s.anchor_t = c.num(obj, "", "anchor_t");
    const json& past = c.array(obj, "", "past");
    for (std::size_t i = 0; i < past.size(); ++i) s.past.push_back(c.point(past[i], indexed("past", i)));
    const json& future = c.array(obj, "", "future");
    for (std::size_t i = 0; i < future.size(); ++i) {
      s.future.push_back(c.point(future[i], indexed("future", i)));
    }
    s.to_world.origin = c.point(c.member(obj, "", "origin"), "origin");
    s.to_world.heading = c.num(obj, "", "heading");
    s.provenance = c.provenance(obj);
    if (obj.contains("score")) s.score = c.num(obj, "", "score");
    if (s.past.empty()) c.fail("past", "empty history");
    const int l = static_cast<int>(s.past.size()) - 1;
    const int m = static_cast<int>(s.future.size());
    if (first) {
      set.past_len = l;
      set.future_len = m;
      first = false;
    } else if (l != set.past_len) {
      c.fail("past", "length " + std::to_string(s.past.size()) + " differs from earlier samples");
    } else if (m != set.future_len) {
      c.fail("future", "length " + std::to_string(m) + " differs from earlier samples");
    }
    set.samples.push_back(std::move(s));
  });
  return set;
}

void write_detections(const fs::path& path, const std::vector<DetectionFrame>& frames) {
  write_file_atomic(path, detections_to_jsonl(frames));
}
std::vector<DetectionFrame> read_detections(const fs::path& path) {
  return parse_detections(read_file(path), path.string());
}
void write_trajectories(const fs::path& path, const std::vector<Trajectory>& trajs) {
  write_file_atomic(path, trajectories_to_jsonl(trajs));
}
std::vector<Trajectory> read_trajectories(const fs::path& path) {
  return parse_trajectories(read_file(path), path.string());
}
void write_samples(const fs::path& path, const SampleSet& set) {
  write_file_atomic(path, samples_to_jsonl(set));
}
SampleSet read_samples(const fs::path& path) { return parse_samples(read_file(path), path.string()); }

// ---- checkpoint ----

namespace {

constexpr std::string_view kMagic = "TFGCKPT1";

void put_u32_le(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xFF);
}

void put_f64_le(std::string& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out += static_cast<char>((bits >> (8 * i)) & 0xFF);
}

std::uint64_t get_le(std::string_view bytes, std::size_t pos, int n) {
  std::uint64_t v = 0;
  for (int i = 0; i < n; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[pos + i])) << (8 * i);
  }
  return v;
}

}  // namespace

bool operator==(const Checkpoint& a, const Checkpoint& b) {
  if (!(a.params.shape == b.params.shape) || a.params.anchors != b.params.anchors ||
      a.seed != b.seed || a.provenance != b.provenance ||
      a.params.theta.size() != b.params.theta.size()) {
    return false;
  }
  // Bitwise, so -0.0 and 0.0 differ as they would on disk.
  return std::memcmp(a.params.theta.data(), b.params.theta.data(),
                     sizeof(double) * static_cast<std::size_t>(a.params.theta.size())) == 0;
}

std::string encode_checkpoint(const Checkpoint& ckpt) {
  const ForecasterParams& p = ckpt.params;
  p.validate();
  JsonWriter w;
  w.begin_object()
      .key("H")
      .value(p.shape.hidden)
      .key("K")
      .value(p.shape.modes)
      .key("L")
      .value(p.shape.past_len)
      .key("M")
      .value(p.shape.future_len)
      .key("anchors")
      .begin_array();
  for (const auto& a : p.anchors) w.point(a);
  w.end_array().key("seed").value(ckpt.seed).key("provenance").value(ckpt.provenance).end_object();
  const std::string& header = w.str();

  std::string out(kMagic);
  put_u32_le(out, static_cast<std::uint32_t>(header.size()));
  out += header;
  out.reserve(out.size() + 8 * static_cast<std::size_t>(p.theta.size()));
  for (Eigen::Index i = 0; i < p.theta.size(); ++i) put_f64_le(out, p.theta[i]);
  return out;
}

Checkpoint decode_checkpoint(std::string_view bytes, const std::string& file) {
  if (bytes.size() < kMagic.size() + 4 || bytes.substr(0, kMagic.size()) != kMagic) {
    throw ParseError(file, 1, "magic", "not a trajforge checkpoint");
  }
  const auto header_len = static_cast<std::size_t>(get_le(bytes, kMagic.size(), 4));
  const std::size_t header_start = kMagic.size() + 4;
  if (bytes.size() < header_start + header_len) {
    throw ParseError(file, 1, "header", "truncated header");
  }
  json header;
  try {
    header = json::parse(bytes.substr(header_start, header_len));
  } catch (const json::parse_error& e) {
    throw ParseError(file, 1, "header", e.what());
  }
  const Ctx c{file, 1};
  Checkpoint ckpt;
  ForecasterShape& shape = ckpt.params.shape;
  shape.hidden = static_cast<int>(c.integer(header, "header", "H"));
  shape.modes = static_cast<int>(c.integer(header, "header", "K"));
  shape.past_len = static_cast<int>(c.integer(header, "header", "L"));
  shape.future_len = static_cast<int>(c.integer(header, "header", "M"));
  if (shape.hidden < 1 || shape.modes < 1 || shape.past_len < 1 || shape.future_len < 1) {
    c.fail("header", "H, K, L and M must be positive");
  }
  const json& anchors = c.array(header, "header", "anchors");
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    ckpt.params.anchors.push_back(c.point(anchors[i], "header." + indexed("anchors", i)));
  }
  ckpt.seed = c.unsigned_integer(header, "header", "seed");
  ckpt.provenance = c.str(header, "header", "provenance");

  const std::size_t n = shape.param_count();
  const std::size_t data_start = header_start + header_len;
  if (bytes.size() - data_start != 8 * n) {
    throw ParseError(file, 1, "parameters",
                     "expected " + std::to_string(n) + " values, found " +
                         std::to_string((bytes.size() - data_start) / 8) + " (" +
                         std::to_string(bytes.size() - data_start) + " bytes)");
  }
  ckpt.params.theta.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    ckpt.params.theta[static_cast<Eigen::Index>(i)] =
        std::bit_cast<double>(get_le(bytes, data_start + 8 * i, 8));
  }
  try {
    ckpt.params.validate();
  } catch (const InputError& e) {
    throw ParseError(file, 1, "parameters", e.what());
  }
  return ckpt;
}

void write_checkpoint(const fs::path& path, const Checkpoint& ckpt) {
  write_file_atomic(path, encode_checkpoint(ckpt));
}

Checkpoint read_checkpoint(const fs::path& path) {
  return decode_checkpoint(read_file(path), path.string());
}

// ---- CSV ----

std::string to_csv(const CsvTable& table) {
  auto field = [](const std::string& f) {
    if (f.find_first_of(",\"\n\r") == std::string::npos) return f;
    std::string q = "\"";
    for (char ch : f) {
      if (ch == '"') q += '"';
      q += ch;
    }
    return q + "\"";
  };
  auto row = [&](const std::vector<std::string>& r) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) line += ',';
      line += field(r[i]);
    }
    return line + "\n";
  };
  std::string out = row(table.header);
  for (const auto& r : table.rows) out += row(r);
  return out;
}

CsvTable parse_csv(std::string_view text, const std::string& file) {
  CsvTable table;
  std::vector<std::string> row;
  std::string cur;
  bool quoted = false;
  bool any = false;
  std::size_t line = 1;
  std::size_t row_line = 1;
  auto finish_row = [&] {
    row.push_back(std::move(cur));
    cur.clear();
    if (table.header.empty()) {
      table.header = std::move(row);
    } else {
      if (row.size() != table.header.size()) {
        throw ParseError(file, row_line, "row",
                         "expected " + std::to_string(table.header.size()) + " fields, found " +
                             std::to_string(row.size()));
      }
      table.rows.push_back(std::move(row));
    }
    row.clear();
    any = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line;
        cur += ch;
      }
      continue;
    }
    if (!any) row_line = line;
    if (ch == '"') {
      quoted = true;
      any = true;
    } else if (ch == ',') {
      row.push_back(std::move(cur));
      cur.clear();
      any = true;
    } else if (ch == '\n') {
      ++line;
      if (any || !cur.empty()) finish_row();
    } else if (ch != '\r') {
      cur += ch;
      any = true;
    }
  }
  if (quoted) throw ParseError(file, line, "row", "unterminated quoted field");
  if (any || !cur.empty()) finish_row();
  return table;
}

CsvTable history_table(const TrainRun& run) {
  CsvTable t;
  t.header = {"epoch", "split", "loss", "minADE", "minFDE", "brier_fde", "miss_rate", "effective_lr"};
  for (const auto& rec : run.history) {
    const std::string epoch = std::to_string(rec.epoch);
    const std::string lr = format_double(rec.effective_lr);
    t.rows.push_back({epoch, "train", format_double(rec.train_loss), format_double(rec.train_min_ade),
                      "", "", "", lr});
    if (rec.has_val) {
      t.rows.push_back({epoch, "val", format_double(rec.val_loss), format_double(rec.val.min_ade),
                        format_double(rec.val.min_fde), format_double(rec.val.brier_fde),
                        format_double(rec.val.miss_rate), lr});
    }
  }
  return t;
}

// ---- reports ----

namespace {

void write_metrics(JsonWriter& w, const MetricsReport& r) {
  w.begin_object()
      .key("n_samples")
      .value(r.n_samples)
      .key("min_ade")
      .value(r.min_ade)
      .key("min_fde")
      .value(r.min_fde)
      .key("brier_fde")
      .value(r.brier_fde)
      .key("miss_rate")
      .value(r.miss_rate)
      .end_object();
}

MetricsReport read_metrics(const Ctx& c, const json& obj, const std::string& prefix) {
  MetricsReport r;
  r.n_samples = c.unsigned_integer(obj, prefix, "n_samples");
  r.min_ade = c.num(obj, prefix, "min_ade");
  r.min_fde = c.num(obj, prefix, "min_fde");
  r.brier_fde = c.num(obj, prefix, "brier_fde");
  r.miss_rate = c.num(obj, prefix, "miss_rate");
  return r;
}

json parse_document(std::string_view text, const std::string& file) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(file, 1, "<json>", e.what());
  }
}

}  // namespace

std::string to_json(const MetricsReport& r) {
  JsonWriter w;
  write_metrics(w, r);
  return w.str() + "\n";
}

std::string to_json(const QualityReport& r) {
  JsonWriter w;
  w.begin_object().key("metrics");
  write_metrics(w, r.metrics);
  w.key("n_gt_windows")
      .value(r.n_gt_windows)
      .key("n_pseudo_windows")
      .value(r.n_pseudo_windows)
      .key("n_matched")
      .value(r.n_matched)
      .key("match_rate")
      .value(r.match_rate)
      .key("empty")
      .value(r.empty)
      .end_object();
  return w.str() + "\n";
}

std::string to_json(const E2EReport& r) {
  JsonWriter w;
  w.begin_object()
      .key("map_f")
      .value(r.map_f)
      .key("n_true_positives")
      .value(r.n_true_positives)
      .key("n_false_predictions")
      .value(r.n_false_predictions)
      .key("n_missed_gt")
      .value(r.n_missed_gt)
      .key("matched_min_ade")
      .value(r.matched_min_ade)
      .key("matched_min_fde")
      .value(r.matched_min_fde)
      .end_object();
  return w.str() + "\n";
}

MetricsReport parse_metrics_report(std::string_view text, const std::string& file) {
  return read_metrics(Ctx{file, 1}, parse_document(text, file), "");
}

QualityReport parse_quality_report(std::string_view text, const std::string& file) {
  const json obj = parse_document(text, file);
  const Ctx c{file, 1};
  QualityReport r;
  r.metrics = read_metrics(c, c.member(obj, "", "metrics"), "metrics");
  r.n_gt_windows = c.unsigned_integer(obj, "", "n_gt_windows");
  r.n_pseudo_windows = c.unsigned_integer(obj, "", "n_pseudo_windows");
  r.n_matched = c.unsigned_integer(obj, "", "n_matched");
  r.match_rate = c.num(obj, "", "match_rate");
  const json& empty = c.member(obj, "", "empty");
  if (!empty.is_boolean()) c.fail("empty", "expected a boolean");
  r.empty = empty.get<bool>();
  return r;
}

E2EReport parse_e2e_report(std::string_view text, const std::string& file) {
  const json obj = parse_document(text, file);
  const Ctx c{file, 1};
  E2EReport r;
  r.map_f = c.num(obj, "", "map_f");
  r.n_true_positives = c.unsigned_integer(obj, "", "n_true_positives");
  r.n_false_predictions = c.unsigned_integer(obj, "", "n_false_predictions");
  r.n_missed_gt = c.unsigned_integer(obj, "", "n_missed_gt");
  r.matched_min_ade = c.num(obj, "", "matched_min_ade");
  r.matched_min_fde = c.num(obj, "", "matched_min_fde");
  return r;
}

// ---- digests and manifest ----

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md;
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xF];
  }
  return out;
}

std::string file_sha256(const fs::path& path) { return sha256_hex(read_file(path)); }

std::string to_json(const RunManifest& m) {
  JsonWriter w;
  auto files = [&](const std::vector<std::pair<std::string, std::string>>& fs) {
    w.begin_array();
    for (const auto& [path, digest] : fs) {
      w.begin_object().key("path").value(path).key("sha256").value(digest).end_object();
    }
    w.end_array();
  };
  w.begin_object()
      .key("config_hash")
      .value(m.config_hash)
      .key("tool_version")
      .value(m.tool_version)
      .key("stages")
      .begin_array();
  for (const auto& s : m.stages) {
    w.begin_object().key("name").value(s.name).key("inputs");
    files(s.inputs);
    w.key("outputs");
    files(s.outputs);
    w.key("wall_seconds").value(s.wall_seconds).end_object();
  }
  w.end_array().end_object();
  return w.str() + "\n";
}

RunManifest parse_manifest(std::string_view text, const std::string& file) {
  const json obj = parse_document(text, file);
  const Ctx c{file, 1};
  RunManifest m;
  m.config_hash = c.str(obj, "", "config_hash");
  m.tool_version = c.str(obj, "", "tool_version");
  const json& stages = c.array(obj, "", "stages");
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const std::string p = indexed("stages", i);
    StageRecord s;
    s.name = c.str(stages[i], p, "name");
    for (const char* which : {"inputs", "outputs"}) {
      const json& arr = c.array(stages[i], p, which);
      auto& dst = std::string_view(which) == "inputs" ? s.inputs : s.outputs;
      for (std::size_t j = 0; j < arr.size(); ++j) {
        const std::string fp = p + "." + indexed(which, j);
        dst.emplace_back(c.str(arr[j], fp, "path"), c.str(arr[j], fp, "sha256"));
      }
    }
    s.wall_seconds = c.num(stages[i], p, "wall_seconds");
    m.stages.push_back(std::move(s));
  }
  return m;
}

void update_manifest(const fs::path& path, const std::string& config_hash, const StageRecord& stage) {
  RunManifest m;
  if (fs::exists(path)) m = parse_manifest(read_file(path), path.string());
  m.config_hash = config_hash;
  m.tool_version = kToolVersion;
  auto same = [&](const StageRecord& s) {
    if (s.name != stage.name) return false;
    if (s.outputs.empty() || stage.outputs.empty()) return s.outputs.empty() && stage.outputs.empty();
    return s.outputs.front().first == stage.outputs.front().first;
  };
  bool replaced = false;
  for (auto& s : m.stages) {
    if (same(s)) {
      s = stage;
      replaced = true;
      break;
    }
  }
  if (!replaced) m.stages.push_back(stage);
  write_file_atomic(path, to_json(m));
}

}  // namespace trajforge
