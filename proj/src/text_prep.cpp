#include "sccnn/text_prep.hpp"

#include <cctype>
#include <functional>
#include <regex>

namespace sccnn {

namespace {

using Replacer = std::function<std::string(const std::smatch&)>;

std::string replace_all(const std::string& input, const std::regex& re,
                        const Replacer& fn) {
  std::string out;
  out.reserve(input.size());
  auto begin = std::sregex_iterator(input.begin(), input.end(), re);
  auto end = std::sregex_iterator();
  size_t last = 0;
  for (auto it = begin; it != end; ++it) {
    const std::smatch& m = *it;
    out.append(input, last, m.position(0) - last);
    out += fn(m);
    last = m.position(0) + m.length(0);
  }
  out.append(input, last, input.size() - last);
  return out;
}

std::string tag_replacer(const std::string& input, const std::regex& re,
                         const char* tag) {
  return replace_all(input, re, [tag](const std::smatch&) {
    return std::string(" ") + tag + " ";
  });
}

std::string lower_ascii(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool is_upper_body(const std::string& body) {
  bool has_upper = false;
  for (unsigned char c : body) {
    if (std::islower(c)) return false;
    if (std::isupper(c)) has_upper = true;
  }
  return has_upper;
}

// Eyes [8:=;], optional nose ['`-], then the mouth class.
const std::regex kUrl(R"(https?://\S+|www\.(\w+\.)+\S*)");
const std::regex kUser(R"(@\w+)");
const std::regex kSmile(R"([8:=;]['`\-]?[)dD\]]+)");
const std::regex kLolface(R"([8:=;]['`\-]?[pP]+)");
const std::regex kSadface(R"([8:=;]['`\-]?[(\[]+)");
const std::regex kNeutralface(R"([8:=;]['`\-]?[/|l*]+)");
const std::regex kHeart(R"(<3)");
const std::regex kNumber(R"([-+]?[.\d]*\d+[:,.\d]*)");
const std::regex kHashtag(R"(#\S+)");
const std::regex kRepeat(R"([!?.]{2,})");
const std::regex kElong(R"((\S*?)(\w)\2{2,}\b)");
const std::regex kAllcaps(R"([A-Z]{2,})");

}  // namespace

std::string normalize(std::string_view raw) {
  std::string s(raw);

  s = tag_replacer(s, kUrl, "<url>");
  s = tag_replacer(s, kUser, "<user>");
  s = tag_replacer(s, kSmile, "<smile>");
  s = tag_replacer(s, kLolface, "<lolface>");
  s = tag_replacer(s, kSadface, "<sadface>");
  s = tag_replacer(s, kNeutralface, "<neutralface>");
  s = tag_replacer(s, kHeart, "<heart>");
  s = tag_replacer(s, kNumber, "<number>");

  // "#tag" -> "<hashtag> tag"; an all-caps body is lowercased here and marked
  // so the later all-caps rule cannot tag it twice.
  s = replace_all(s, kHashtag, [](const std::smatch& m) {
    std::string body = m.str(0).substr(1);
    if (is_upper_body(body)) return " <hashtag> " + lower_ascii(body) + " <allcaps> ";
    return " <hashtag> " + body + " ";
  });

  // "!!!" -> "! <repeat>"; mixed runs keep their final mark.
  s = replace_all(s, kRepeat, [](const std::smatch& m) {
    return std::string(" ") + m.str(0).back() + " <repeat> ";
  });

  // Word-final letter repeated three or more times is trimmed to one.
  s = replace_all(s, kElong, [](const std::smatch& m) {
    return m.str(1) + m.str(2) + " <elong> ";
  });

  s = replace_all(s, kAllcaps, [](const std::smatch& m) {
    return lower_ascii(m.str(0)) + " <allcaps> ";
  });

  s = lower_ascii(std::move(s));

  // Collapse whitespace runs and trim.
  std::string out;
  out.reserve(s.size());
  bool in_space = true;  // swallows leading whitespace
  for (unsigned char c : s) {
    if (std::isspace(c)) {
      in_space = true;
      continue;
    }
    if (in_space && !out.empty()) out += ' ';
    in_space = false;
    out += static_cast<char>(c);
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view normalized) {
  std::vector<std::string> tokens;
  size_t i = 0;
  while (i < normalized.size()) {
    while (i < normalized.size() &&
           std::isspace(static_cast<unsigned char>(normalized[i])))
      ++i;
    size_t start = i;
    while (i < normalized.size() &&
           !std::isspace(static_cast<unsigned char>(normalized[i])))
      ++i;
    if (i > start) tokens.emplace_back(normalized.substr(start, i - start));
  }
  return tokens;
}

}  // namespace sccnn
