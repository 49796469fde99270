#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sccnn/corpus.hpp"
#include "sccnn/metrics.hpp"

namespace sccnn {

struct TopicGroup {
  std::string topic;
  std::vector<Tweet> tweets;  // non-empty, all carrying this topic
};

// Groups a dataset by topic in first-appearance order. Every tweet must
// carry a topic.
std::vector<TopicGroup> group_by_topic(const Dataset& d);

using TweetClassifier = std::function<int(const Tweet&)>;

// Classify-and-count: per topic, p(c) is the fraction of tweets classified
// as c.
std::map<std::string, SentimentDistribution> classify_and_count(
    const std::vector<TopicGroup>& groups, const Scale& scale,
    const TweetClassifier& classify);

// Empirical gold-label distribution of one topic group.
SentimentDistribution gold_distribution(const TopicGroup& group, const Scale& scale);

enum class QuantMetric { Kld, Ae, Rae, Emd };
const char* quant_metric_name(QuantMetric m);

// Uniform mean of the per-topic metric. test_sizes supplies the smoothing N
// per topic (its tweet count) for KLD and RAE. The gold and predicted topic
// sets must be identical.
double evaluate_quant(const std::map<std::string, SentimentDistribution>& gold,
                      const std::map<std::string, SentimentDistribution>& pred,
                      QuantMetric metric,
                      const std::map<std::string, long long>& test_sizes);

}  // namespace sccnn
