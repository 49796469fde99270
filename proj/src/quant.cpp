#include "sccnn/quant.hpp"

#include <algorithm>
#include <sstream>

#include "sccnn/errors.hpp"

namespace sccnn {

std::vector<TopicGroup> group_by_topic(const Dataset& d) {
  std::vector<TopicGroup> groups;
  std::map<std::string, size_t> position;
  for (const Tweet& t : d.tweets) {
    if (!t.topic)
      throw DataError("tweet '" + t.id + "' has no topic; quantification needs "
                      "topic-bearing data");
    auto [it, inserted] = position.emplace(*t.topic, groups.size());
    if (inserted) groups.push_back(TopicGroup{*t.topic, {}});
    groups[it->second].tweets.push_back(t);
  }
  return groups;
}

std::map<std::string, SentimentDistribution> classify_and_count(
    const std::vector<TopicGroup>& groups, const Scale& scale,
    const TweetClassifier& classify) {
  std::map<std::string, SentimentDistribution> out;
  for (const TopicGroup& group : groups) {
    if (group.tweets.empty())
      throw DataError("empty topic group '" + group.topic + "'");
    std::vector<double> counts(scale.num_classes(), 0.0);
    for (const Tweet& t : group.tweets) {
      int c = classify(t);
      if (c < 0 || c >= scale.num_classes())
        throw DataError("classifier returned class " + std::to_string(c) +
                        " out of range");
      counts[c] += 1.0;
    }
    for (double& x : counts) x /= static_cast<double>(group.tweets.size());
    out.emplace(group.topic, make_distribution(scale, std::move(counts)));
  }
  return out;
}

SentimentDistribution gold_distribution(const TopicGroup& group, const Scale& scale) {
  if (group.tweets.empty())
    throw DataError("empty topic group '" + group.topic + "'");
  std::vector<double> counts(scale.num_classes(), 0.0);
  for (const Tweet& t : group.tweets) {
    if (!t.label)
      throw DataError("unlabeled tweet '" + t.id + "' in topic '" + group.topic + "'");
    counts[*t.label] += 1.0;
  }
  for (double& x : counts) x /= static_cast<double>(group.tweets.size());
  return make_distribution(scale, std::move(counts));
}

const char* quant_metric_name(QuantMetric m) {
  switch (m) {
    case QuantMetric::Kld: return "KLD";
    case QuantMetric::Ae: return "AE";
    case QuantMetric::Rae: return "RAE";
    case QuantMetric::Emd: return "EMD";
  }
  return "?";
}

double evaluate_quant(const std::map<std::string, SentimentDistribution>& gold,
                      const std::map<std::string, SentimentDistribution>& pred,
                      QuantMetric metric,
                      const std::map<std::string, long long>& test_sizes) {
  std::vector<std::string> only_gold, only_pred;
  for (const auto& [topic, _] : gold)
    if (!pred.count(topic)) only_gold.push_back(topic);
  for (const auto& [topic, _] : pred)
    if (!gold.count(topic)) only_pred.push_back(topic);
  if (!only_gold.empty() || !only_pred.empty()) {
    std::ostringstream msg;
    msg << "topic sets differ;";
    if (!only_gold.empty()) {
      msg << " missing from predictions:";
      for (const auto& t : only_gold) msg << " '" << t << "'";
    }
    if (!only_pred.empty()) {
      msg << " missing from gold:";
      for (const auto& t : only_pred) msg << " '" << t << "'";
    }
    throw DataError(msg.str());
  }
  if (gold.empty()) throw DataError("evaluate_quant: no topics");

  double sum = 0;
  for (const auto& [topic, gold_dist] : gold) {
    const SentimentDistribution& pred_dist = pred.at(topic);
    long long n = 0;
    if (metric == QuantMetric::Kld || metric == QuantMetric::Rae) {
      auto it = test_sizes.find(topic);
      if (it == test_sizes.end())
        throw DataError("no test size for topic '" + topic + "'");
      n = it->second;
    }
    switch (metric) {
      case QuantMetric::Kld: sum += kld(gold_dist, pred_dist, n); break;
      case QuantMetric::Ae: sum += abs_errors(gold_dist, pred_dist, 1).ae; break;
      case QuantMetric::Rae: sum += abs_errors(gold_dist, pred_dist, n).rae; break;
      case QuantMetric::Emd: sum += emd(gold_dist, pred_dist); break;
    }
  }
  return sum / static_cast<double>(gold.size());
}

}  // namespace sccnn
