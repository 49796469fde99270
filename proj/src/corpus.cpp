#include "sccnn/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "sccnn/errors.hpp"

namespace sccnn {

namespace {

const std::vector<std::string> kTwoNames = {"negative", "positive"};
const std::vector<std::string> kThreeNames = {"negative", "neutral", "positive"};
const std::vector<std::string> kFiveNames = {"-2", "-1", "0", "1", "2"};

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r\n\v\f");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r\n\v\f");
  return s.substr(b, e - b + 1);
}

// Rejects malformed multi-byte sequences and overlong encodings.
bool valid_utf8(std::string_view s) {
  size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    int extra;
    unsigned cp_min;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp_min = 0x80;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp_min = 0x800;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp_min = 0x10000;
    } else {
      return false;
    }
    if (i + extra >= s.size()) return false;
    unsigned cp = c & (0x3F >> extra);
    for (int j = 1; j <= extra; ++j) {
      unsigned char cc = static_cast<unsigned char>(s[i + j]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (cp < cp_min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += extra + 1;
  }
  return true;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  size_t start = 0;
  while (true) {
    size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cols.push_back(line.substr(start));
      break;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return cols;
}

}  // namespace

int Scale::num_classes() const {
  switch (kind) {
    case ScaleKind::Two: return 2;
    case ScaleKind::Three: return 3;
    case ScaleKind::Five: return 5;
  }
  return 0;
}

const std::vector<std::string>& Scale::class_names() const {
  switch (kind) {
    case ScaleKind::Two: return kTwoNames;
    case ScaleKind::Five: return kFiveNames;
    case ScaleKind::Three: break;
  }
  return kThreeNames;
}

const std::string& Scale::label_name(int index) const {
  const auto& names = class_names();
  if (index < 0 || index >= static_cast<int>(names.size()))
    throw DataError("class index " + std::to_string(index) + " out of range");
  return names[index];
}

int Scale::class_int(int index) const {
  if (index < 0 || index >= num_classes())
    throw DataError("class index " + std::to_string(index) + " out of range");
  return kind == ScaleKind::Five ? index - 2 : index;
}

std::optional<int> Scale::parse_label(std::string_view token) const {
  if (kind == ScaleKind::Five) {
    std::string t(trim(token));
    for (int i = 0; i < 5; ++i)
      if (t == kFiveNames[i]) return i;
    // "+1" and "+2" are accepted alongside the canonical unsigned forms.
    if (t == "+1") return 3;
    if (t == "+2") return 4;
    return std::nullopt;
  }
  std::string t = lower_ascii(trim(token));
  const auto& names = class_names();
  for (int i = 0; i < static_cast<int>(names.size()); ++i)
    if (t == names[i]) return i;
  return std::nullopt;
}

Scale Scale::from_class_count(int c) {
  switch (c) {
    case 2: return Scale{ScaleKind::Two};
    case 3: return Scale{ScaleKind::Three};
    case 5: return Scale{ScaleKind::Five};
  }
  throw DataError("scale must have 2, 3, or 5 classes, got " + std::to_string(c));
}

bool operator==(const Scale& a, const Scale& b) { return a.kind == b.kind; }

Dataset parse_dataset(std::istream& in, const Scale& scale, bool has_topic,
                      std::string name) {
  Dataset d;
  d.name = std::move(name);
  d.scale = scale;
  std::unordered_set<std::string> seen_ids;
  const size_t want_cols = has_topic ? 4 : 3;

  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (line[0] == '#') continue;
    auto fail = [&](const std::string& msg) {
      throw DataError(d.name + ":" + std::to_string(line_no) + ": " + msg);
    };
    if (!valid_utf8(line)) fail("invalid UTF-8");

    auto cols = split_tabs(line);
    if (cols.size() != want_cols)
      fail("expected " + std::to_string(want_cols) + " tab-separated columns, got " +
           std::to_string(cols.size()));

    Tweet t;
    t.id = std::string(trim(cols[0]));
    if (t.id.empty()) fail("empty id");
    size_t col = 1;
    if (has_topic) {
      t.topic = std::string(trim(cols[col++]));
      if (t.topic->empty()) fail("empty topic");
    }
    std::string_view label_tok = trim(cols[col++]);
    if (label_tok != "?") {
      auto label = scale.parse_label(label_tok);
      if (!label) fail("unknown label token '" + std::string(label_tok) + "'");
      t.label = *label;
    }
    t.text = std::string(cols[col]);
    if (trim(t.text).empty()) fail("empty text");
    if (!seen_ids.insert(t.id).second) fail("duplicate id '" + t.id + "'");
    d.tweets.push_back(std::move(t));
  }
  return d;
}

Dataset parse_dataset_file(const std::string& path, const Scale& scale,
                           bool has_topic) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset file: " + path);
  return parse_dataset(in, scale, has_topic, path);
}

void serialize_dataset(const Dataset& d, std::ostream& out, bool has_topic) {
  for (const Tweet& t : d.tweets) {
    out << t.id << '\t';
    if (has_topic) {
      if (!t.topic) throw DataError("tweet '" + t.id + "' has no topic");
      out << *t.topic << '\t';
    }
    out << (t.label ? d.scale.label_name(*t.label) : std::string("?")) << '\t'
        << t.text << '\n';
  }
}

Dataset merge(const Dataset& a, const Dataset& b) {
  if (!(a.scale == b.scale))
    throw DataError("cannot merge datasets with different scales ('" + a.name +
                    "' vs '" + b.name + "')");
  Dataset out;
  out.name = a.name + "+" + b.name;
  out.scale = a.scale;
  out.tweets.reserve(a.tweets.size() + b.tweets.size());

  std::unordered_set<std::string> a_ids;
  for (const Tweet& t : a.tweets) a_ids.insert(t.id);
  bool collision = false;
  for (const Tweet& t : b.tweets)
    if (a_ids.count(t.id)) {
      collision = true;
      break;
    }

  std::unordered_set<std::string> seen;
  auto append = [&](const Dataset& src) {
    for (const Tweet& t : src.tweets) {
      Tweet copy = t;
      if (collision) copy.id = src.name + ":" + t.id;
      if (!seen.insert(copy.id).second)
        throw DataError("id collision after namespacing: '" + copy.id + "'");
      out.tweets.push_back(std::move(copy));
    }
  };
  append(a);
  append(b);
  return out;
}

std::vector<long> label_counts(const Dataset& d) {
  std::vector<long> counts(d.scale.num_classes(), 0);
  for (const Tweet& t : d.tweets) {
    if (!t.label) throw DataError("unlabeled tweet '" + t.id + "' in " + d.name);
    ++counts[*t.label];
  }
  return counts;
}

}  // namespace sccnn
