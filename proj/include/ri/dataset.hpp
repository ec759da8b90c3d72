#pragma once

#include "ri/common.hpp"

#include <string>
#include <vector>

namespace ri {

/// Label value for tweets whose class is unknown (prediction inputs).
inline constexpr int kUnlabeled = 0;

/**
 * One tweet: an ordered bag of word-embedding vectors plus a binary label.
 * `words` is n_i x k; rows are words. With bias augmentation the last
 * column is identically 1.
 */
struct Tweet {
    std::string id;
    int label = kUnlabeled;  // +1, -1, or kUnlabeled
    Mat words;

    Eigen::Index n_words() const { return words.rows(); }
};

struct Dataset {
    std::vector<Tweet> tweets;
    Eigen::Index dim = 0;  // k, shared by every word vector
    bool bias = false;     // true when a constant-1 coordinate was appended

    Eigen::Index size() const { return static_cast<Eigen::Index>(tweets.size()); }
    Eigen::Index count_label(int label) const;
    std::vector<int> labels() const;
    Eigen::Index max_words() const;
};

struct PlantedSpec {
    Eigen::Index m = 200;
    Eigen::Index n_min = 6;
    Eigen::Index n_max = 14;
    Eigen::Index k = 16;
    double positive_ratio = 0.3;
    double signal_words_fraction = 0.7;
    Vec signal_direction;  // unit k-vector; empty selects default_signal_direction(k)
    double noise_scale = 0.12;
    std::uint64_t seed = 1;
};

struct PlantedData {
    Dataset data;
    // Parallel to tweets/words: true where the word carries the planted signal.
    std::vector<std::vector<bool>> signal_flags;
};

struct UndersampleResult {
    Dataset data;
    // Set when the positive ratio already met the target and nothing changed.
    bool already_at_target = false;
};

/// The normalized all-ones direction used when PlantedSpec leaves it empty.
Vec default_signal_direction(Eigen::Index k);

/**
 * Reads a newline-delimited dataset (one JSON record per line with fields
 * id, label, words). Records carrying "_config" are provenance metadata and
 * are skipped. 0/1 labels are remapped to -1/+1; null or missing labels mean
 * unlabeled. With `normalize` every word vector is scaled to unit l2 norm
 * (zero vectors kept as-is); with `bias` a constant-1 coordinate is then
 * appended to every word.
 */
Dataset load_dataset(const std::string& path, bool bias = true, bool normalize = false);

/// Writes records as load_dataset expects; `config_header` (may be empty)
/// is embedded as a leading "_config" record.
void save_dataset(const Dataset& d, const std::string& path,
                  const std::string& config_header = "");

/// Keeps all positives, subsamples negatives without replacement until the
/// positive ratio reaches `target_positive_ratio` (exact when an integer
/// count achieves it). Deterministic given seed.
UndersampleResult undersample(const Dataset& d, double target_positive_ratio,
                              std::uint64_t seed);

/// Synthetic ragged dataset with planted signal words in positive tweets.
PlantedData generate_planted(const PlantedSpec& spec);

/// x_i^T u_i: the weighted sum of tweet i's word vectors.
Vec aggregate(const Tweet& t, const Vec& u);

void save_flags(const PlantedData& pd, const std::string& path,
                const std::string& config_header = "");
std::vector<std::vector<bool>> load_flags(const std::string& path);

}  // namespace ri
