#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sccnn {

enum class ScaleKind { Two, Three, Five };

// Ordered sentiment scale. Class indices run in ascending sentiment order:
//   Two:   negative, positive
//   Three: negative, neutral, positive
//   Five:  -2, -1, 0, 1, 2
struct Scale {
  ScaleKind kind = ScaleKind::Three;

  int num_classes() const;
  const std::vector<std::string>& class_names() const;
  const std::string& label_name(int index) const;

  // Integer coding used by ordinal error metrics (Five maps to -2..2,
  // Two/Three map to their indices).
  int class_int(int index) const;

  // Accepts the scale's label lexicon: words case-insensitively for Two and
  // Three, integer strings -2..2 for Five. Returns the class index.
  std::optional<int> parse_label(std::string_view token) const;

  static Scale from_class_count(int c);
};

bool operator==(const Scale& a, const Scale& b);

struct Tweet {
  std::string id;
  std::optional<std::string> topic;
  std::optional<int> label;  // class index into the dataset's Scale
  std::string text;
};

struct Dataset {
  std::string name;
  Scale scale;
  std::vector<Tweet> tweets;
};

// Parses the dataset TSV format: `id<TAB>label<TAB>text`, or with a topic
// column `id<TAB>topic<TAB>label<TAB>text`. Lines starting with '#' are
// comments, blank lines are skipped, and a label of "?" marks an unlabeled
// tweet (prediction-only input). Throws DataError with a line number on
// malformed rows, unknown labels, duplicate ids, and invalid UTF-8.
Dataset parse_dataset(std::istream& in, const Scale& scale, bool has_topic,
                      std::string name);
Dataset parse_dataset_file(const std::string& path, const Scale& scale,
                           bool has_topic);

// Inverse of parse_dataset for the same column layout. Unlabeled tweets are
// written with a "?" label.
void serialize_dataset(const Dataset& d, std::ostream& out, bool has_topic);

// Concatenates two datasets of the same scale. Ids are kept untouched when
// the id sets are disjoint; otherwise every id is namespaced as
// "<dataset name>:<id>". A collision that survives namespacing is an error.
Dataset merge(const Dataset& a, const Dataset& b);

// Per-class label counts in scale order. Throws if any tweet is unlabeled.
std::vector<long> label_counts(const Dataset& d);

}  // namespace sccnn
