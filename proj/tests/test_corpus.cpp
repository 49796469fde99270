#include <doctest.h>

#include <random>
#include <sstream>

#include "sccnn/corpus.hpp"
#include "sccnn/errors.hpp"

using namespace sccnn;

namespace {

Dataset parse_str(const std::string& text, const Scale& scale, bool has_topic,
                  const std::string& name = "test") {
  std::istringstream in(text);
  return parse_dataset(in, scale, has_topic, name);
}

}  // namespace

TEST_CASE("parse_dataset maps labels to class indices") {
  Dataset d = parse_str("17\tpositive\tgood day\n", Scale{ScaleKind::Three}, false);
  REQUIRE(d.tweets.size() == 1);
  CHECK(d.tweets[0].id == "17");
  CHECK(d.tweets[0].label == 2);
  CHECK(d.tweets[0].text == "good day");
  CHECK(!d.tweets[0].topic.has_value());
}

TEST_CASE("parse_dataset reads topic columns and the five-point scale") {
  Dataset d = parse_str("9\t@acme\t-2\tawful\n", Scale{ScaleKind::Five}, true);
  REQUIRE(d.tweets.size() == 1);
  CHECK(d.tweets[0].topic == "@acme");
  CHECK(d.tweets[0].label == 0);
}

TEST_CASE("parse_dataset rejects wrong column counts") {
  CHECK_THROWS_AS(parse_str("3\tgreat\n", Scale{ScaleKind::Three}, false), DataError);
  CHECK_THROWS_WITH_AS(parse_str("3\tgreat\n", Scale{ScaleKind::Three}, false),
                       doctest::Contains("columns"), DataError);
}

TEST_CASE("parse_dataset names the unknown label token") {
  CHECK_THROWS_WITH_AS(
      parse_str("1\tmeh\ttext\n", Scale{ScaleKind::Three}, false),
      doctest::Contains("'meh'"), DataError);
}

TEST_CASE("parse_dataset rejects duplicate ids") {
  CHECK_THROWS_WITH_AS(
      parse_str("1\tpositive\ta\n1\tnegative\tb\n", Scale{ScaleKind::Three}, false),
      doctest::Contains("duplicate id"), DataError);
}

TEST_CASE("parse_dataset skips comments and blank lines") {
  Dataset d = parse_str("# header\n\n1\tpositive\ta\n   \n2\tnegative\tb\n",
                        Scale{ScaleKind::Three}, false);
  CHECK(d.tweets.size() == 2);
}

TEST_CASE("parse_dataset accepts '?' as the unlabeled marker") {
  Dataset d = parse_str("1\t?\tno label here\n", Scale{ScaleKind::Three}, false);
  REQUIRE(d.tweets.size() == 1);
  CHECK(!d.tweets[0].label.has_value());
}

TEST_CASE("parse_dataset label lexicon is case-insensitive for word scales") {
  Dataset d = parse_str("1\tPositive\ta\n2\tNEUTRAL\tb\n", Scale{ScaleKind::Three},
                        false);
  CHECK(d.tweets[0].label == 2);
  CHECK(d.tweets[1].label == 1);
}

TEST_CASE("parse_dataset rejects empty text and invalid UTF-8") {
  CHECK_THROWS_AS(parse_str("1\tpositive\t   \n", Scale{ScaleKind::Three}, false),
                  DataError);
  CHECK_THROWS_WITH_AS(
      parse_str("1\tpositive\tbad \xC3 byte\n", Scale{ScaleKind::Three}, false),
      doctest::Contains("UTF-8"), DataError);
}

TEST_CASE("merge concatenates in order") {
  Dataset a = parse_str("1\tpositive\ta\n2\tnegative\tb\n3\tneutral\tc\n",
                        Scale{ScaleKind::Three}, false, "A");
  Dataset b = parse_str("4\tpositive\td\n5\tnegative\te\n",
                        Scale{ScaleKind::Three}, false, "B");
  Dataset m = merge(a, b);
  REQUIRE(m.tweets.size() == 5);
  CHECK(m.tweets[0].id == "1");
  CHECK(m.tweets[3].id == "4");
}

TEST_CASE("merge rejects scale mismatches") {
  Dataset a = parse_str("1\tpositive\ta\n", Scale{ScaleKind::Three}, false);
  Dataset b = parse_str("1\t2\tb\n", Scale{ScaleKind::Five}, false);
  CHECK_THROWS_AS(merge(a, b), DataError);
}

TEST_CASE("merge with an empty dataset keeps tweets unchanged") {
  Dataset a = parse_str("1\tpositive\ta\n2\tnegative\tb\n",
                        Scale{ScaleKind::Three}, false, "A");
  Dataset empty;
  empty.name = "E";
  empty.scale = a.scale;
  Dataset m = merge(a, empty);
  REQUIRE(m.tweets.size() == 2);
  CHECK(m.tweets[0].id == "1");
  CHECK(m.tweets[1].id == "2");
}

TEST_CASE("merge namespaces colliding ids by dataset name") {
  Dataset a = parse_str("1\tpositive\ta\n", Scale{ScaleKind::Three}, false, "A");
  Dataset b = parse_str("1\tnegative\tb\n", Scale{ScaleKind::Three}, false, "B");
  Dataset m = merge(a, b);
  REQUIRE(m.tweets.size() == 2);
  CHECK(m.tweets[0].id == "A:1");
  CHECK(m.tweets[1].id == "B:1");

  Dataset b2 = parse_str("1\tnegative\tb\n", Scale{ScaleKind::Three}, false, "A");
  CHECK_THROWS_WITH_AS(merge(a, b2), doctest::Contains("collision"), DataError);
}

TEST_CASE("label_counts counts per class in scale order") {
  Dataset d = parse_str("1\tpositive\ta\n2\tpositive\tb\n3\tnegative\tc\n",
                        Scale{ScaleKind::Three}, false);
  CHECK(label_counts(d) == std::vector<long>{1, 0, 2});

  Dataset empty;
  empty.scale = Scale{ScaleKind::Three};
  CHECK(label_counts(empty) == std::vector<long>{0, 0, 0});
}

TEST_CASE("label_counts rejects unlabeled tweets") {
  Dataset d = parse_str("1\t?\ta\n", Scale{ScaleKind::Three}, false);
  CHECK_THROWS_AS(label_counts(d), DataError);
}

TEST_CASE("parse -> serialize -> parse round-trips") {
  std::mt19937 rng(7);
  for (int has_topic = 0; has_topic < 2; ++has_topic) {
    for (ScaleKind kind : {ScaleKind::Two, ScaleKind::Three, ScaleKind::Five}) {
      Scale scale{kind};
      Dataset d;
      d.name = "rt";
      d.scale = scale;
      std::uniform_int_distribution<int> label(-1, scale.num_classes() - 1);
      for (int i = 0; i < 40; ++i) {
        Tweet t;
        t.id = "id" + std::to_string(i);
        if (has_topic) t.topic = "topic" + std::to_string(i % 3);
        int l = label(rng);
        if (l >= 0) t.label = l;
        t.text = "some text #" + std::to_string(rng() % 100) + " :)";
        d.tweets.push_back(t);
      }
      std::ostringstream out;
      serialize_dataset(d, out, has_topic);
      Dataset back = parse_str(out.str(), scale, has_topic, "rt");
      REQUIRE(back.tweets.size() == d.tweets.size());
      for (size_t i = 0; i < d.tweets.size(); ++i) {
        CHECK(back.tweets[i].id == d.tweets[i].id);
        CHECK(back.tweets[i].topic == d.tweets[i].topic);
        CHECK(back.tweets[i].label == d.tweets[i].label);
        CHECK(back.tweets[i].text == d.tweets[i].text);
      }
    }
  }
}

TEST_CASE("merge size and label_counts sum properties") {
  std::mt19937 rng(11);
  Scale scale{ScaleKind::Five};
  auto random_dataset = [&](const std::string& name, int count) {
    Dataset d;
    d.name = name;
    d.scale = scale;
    std::uniform_int_distribution<int> label(0, 4);
    for (int i = 0; i < count; ++i)
      d.tweets.push_back(Tweet{name + std::to_string(i), std::nullopt, label(rng),
                               "text"});
    return d;
  };
  for (int trial = 0; trial < 20; ++trial) {
    Dataset a = random_dataset("a", static_cast<int>(rng() % 30));
    Dataset b = random_dataset("b", static_cast<int>(rng() % 30));
    Dataset m = merge(a, b);
    CHECK(m.tweets.size() == a.tweets.size() + b.tweets.size());
    auto counts = label_counts(m);
    long sum = 0;
    for (long c : counts) sum += c;
    CHECK(sum == static_cast<long>(m.tweets.size()));
  }
}
