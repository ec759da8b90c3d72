#include "ri/dataset.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

namespace ri {

using nlohmann::json;

Eigen::Index Dataset::count_label(int label) const {
    return static_cast<Eigen::Index>(
        std::count_if(tweets.begin(), tweets.end(),
                      [&](const Tweet& t) { return t.label == label; }));
}

std::vector<int> Dataset::labels() const {
    std::vector<int> y;
    y.reserve(tweets.size());
    for (const auto& t : tweets) y.push_back(t.label);
    return y;
}

Eigen::Index Dataset::max_words() const {
    Eigen::Index n = 0;
    for (const auto& t : tweets) n = std::max(n, t.n_words());
    return n;
}

Vec default_signal_direction(Eigen::Index k) {
    return Vec::Constant(k, 1.0 / std::sqrt(static_cast<double>(k)));
}

namespace {

int parse_label(const json& rec, const std::string& path, std::size_t line_no) {
    if (!rec.contains("label") || rec["label"].is_null()) return kUnlabeled;
    if (!rec["label"].is_number_integer()) {
        throw io_error(path + ":" + std::to_string(line_no) + ": label must be an integer, null, or absent");
    }
    const long long v = rec["label"].get<long long>();
    if (v == 1) return +1;
    if (v == -1 || v == 0) return -1;  // 0/1 files use the 0-means-negative convention
    throw io_error(path + ":" + std::to_string(line_no) + ": label outside {+1, -1, unlabeled}: " + std::to_string(v));
}

}  // namespace

Dataset load_dataset(const std::string& path, bool bias, bool normalize) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open dataset file: " + path);

    Dataset d;
    d.bias = bias;
    Eigen::Index k = -1;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::parse_error& e) {
            throw io_error(path + ":" + std::to_string(line_no) + ": malformed record: " + e.what());
        }
        if (rec.contains("_config")) continue;

        Tweet t;
        if (!rec.contains("id") || !rec["id"].is_string()) {
            throw io_error(path + ":" + std::to_string(line_no) + ": missing string field 'id'");
        }
        t.id = rec["id"].get<std::string>();
        if (!seen_ids.insert(t.id).second) {
            throw io_error(path + ":" + std::to_string(line_no) + ": duplicate tweet id '" + t.id + "'");
        }
        t.label = parse_label(rec, path, line_no);

        if (!rec.contains("words") || !rec["words"].is_array() || rec["words"].empty()) {
            throw io_error(path + ":" + std::to_string(line_no) + ": empty tweet (words must be a nonempty list)");
        }
        const auto& words = rec["words"];
        const Eigen::Index n = static_cast<Eigen::Index>(words.size());
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto& w = words[static_cast<std::size_t>(j)];
            if (!w.is_array()) {
                throw io_error(path + ":" + std::to_string(line_no) + ": word " + std::to_string(j) + " is not a list");
            }
            const Eigen::Index wk = static_cast<Eigen::Index>(w.size());
            if (k < 0) k = wk;
            if (wk != k) {
                throw io_error(path + ":" + std::to_string(line_no) + ": inconsistent dimension (word " +
                               std::to_string(j) + " has " + std::to_string(wk) + " entries, expected " +
                               std::to_string(k) + ")");
            }
            if (j == 0) t.words.resize(n, bias ? k + 1 : k);
            for (Eigen::Index f = 0; f < k; ++f) {
                const double v = w[static_cast<std::size_t>(f)].get<double>();
                if (!std::isfinite(v)) {
                    throw io_error(path + ":" + std::to_string(line_no) + ": non-finite value in word " +
                                   std::to_string(j));
                }
                t.words(j, f) = v;
            }
        }
        if (normalize) {
            for (Eigen::Index j = 0; j < n; ++j) {
                const double norm = t.words.row(j).head(k).norm();
                if (norm > 0.0) t.words.row(j).head(k) /= norm;
            }
        }
        if (bias) t.words.col(k).setOnes();
        d.tweets.push_back(std::move(t));
    }
    if (d.tweets.empty()) throw io_error(path + ": dataset has no records");
    d.dim = bias ? k + 1 : k;
    return d;
}

void save_dataset(const Dataset& d, const std::string& path, const std::string& config_header) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write dataset file: " + path);
    if (!config_header.empty()) {
        json meta;
        meta["_config"] = config_header;
        out << meta.dump() << "\n";
    }
    for (const auto& t : d.tweets) {
        json rec;
        rec["id"] = t.id;
        if (t.label == kUnlabeled) {
            rec["label"] = nullptr;
        } else {
            rec["label"] = t.label;
        }
        json words = json::array();
        for (Eigen::Index j = 0; j < t.n_words(); ++j) {
            json w = json::array();
            for (Eigen::Index f = 0; f < t.words.cols(); ++f) w.push_back(t.words(j, f));
            words.push_back(std::move(w));
        }
        rec["words"] = std::move(words);
        out << rec.dump() << "\n";
    }
}

UndersampleResult undersample(const Dataset& d, double target_positive_ratio, std::uint64_t seed) {
    if (!(target_positive_ratio > 0.0 && target_positive_ratio <= 1.0)) {
        throw io_error("target positive ratio must lie in (0, 1]");
    }
    std::vector<std::size_t> negatives;
    std::size_t positives = 0;
    for (std::size_t i = 0; i < d.tweets.size(); ++i) {
        if (d.tweets[i].label == +1) ++positives;
        else if (d.tweets[i].label == -1) negatives.push_back(i);
    }
    if (positives == 0 || negatives.empty()) {
        throw io_error("undersample needs at least one positive and one negative tweet");
    }

    // Largest negative count that keeps the ratio at or above target.
    const auto allowed = static_cast<std::size_t>(
        std::floor(static_cast<double>(positives) * (1.0 - target_positive_ratio) / target_positive_ratio));

    UndersampleResult res;
    if (negatives.size() <= allowed) {
        res.data = d;
        res.already_at_target = true;
        return res;
    }

    // Fisher-Yates prefix selection, then restore original order.
    Rng rng(seed);
    for (std::size_t i = 0; i < allowed; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.next_below(negatives.size() - i));
        std::swap(negatives[i], negatives[j]);
    }
    std::vector<bool> keep_negative(d.tweets.size(), false);
    for (std::size_t i = 0; i < allowed; ++i) keep_negative[negatives[i]] = true;

    res.data.dim = d.dim;
    res.data.bias = d.bias;
    for (std::size_t i = 0; i < d.tweets.size(); ++i) {
        if (d.tweets[i].label == +1 || keep_negative[i]) res.data.tweets.push_back(d.tweets[i]);
    }
    return res;
}

PlantedData generate_planted(const PlantedSpec& spec) {
    if (spec.m < 1 || spec.k < 1 || spec.n_min < 1 || spec.n_max < spec.n_min) {
        throw io_error("invalid planted spec dimensions");
    }
    if (!(spec.positive_ratio > 0.0 && spec.positive_ratio < 1.0)) {
        throw io_error("positive_ratio must lie in (0, 1)");
    }
    if (!(spec.signal_words_fraction > 0.0 && spec.signal_words_fraction <= 1.0)) {
        throw io_error("signal_words_fraction must lie in (0, 1]");
    }
    Vec dir = spec.signal_direction.size() == 0 ? default_signal_direction(spec.k) : spec.signal_direction;
    if (dir.size() != spec.k) throw io_error("signal_direction has wrong dimension");
    if (std::abs(dir.norm() - 1.0) > 1e-8) throw io_error("signal_direction must be a unit vector");

    Rng rng(spec.seed);
    Rng label_rng = rng.split(1);
    Rng shape_rng = rng.split(2);
    Rng noise_rng = rng.split(3);

    // Exactly round(positive_ratio * m) positives, at shuffled positions.
    const auto m = static_cast<std::size_t>(spec.m);
    const auto n_pos = static_cast<std::size_t>(std::llround(spec.positive_ratio * static_cast<double>(spec.m)));
    std::vector<int> labels(m, -1);
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(label_rng.next_below(m - i));
        std::swap(order[i], order[j]);
    }
    for (std::size_t i = 0; i < n_pos && i < m; ++i) labels[order[i]] = +1;

    PlantedData pd;
    pd.data.dim = spec.k;
    pd.data.bias = false;

    int width = 1;
    for (Eigen::Index v = spec.m; v >= 10; v /= 10) ++width;

    for (std::size_t i = 0; i < m; ++i) {
        Tweet t;
        std::string num = std::to_string(i);
        t.id = "t" + std::string(static_cast<std::size_t>(width) - std::min(num.size(), static_cast<std::size_t>(width)), '0') + num;
        t.label = labels[i];
        const auto n_i = static_cast<Eigen::Index>(
            spec.n_min + static_cast<Eigen::Index>(shape_rng.next_below(static_cast<std::uint64_t>(spec.n_max - spec.n_min + 1))));
        t.words.resize(n_i, spec.k);

        std::vector<bool> flags(static_cast<std::size_t>(n_i), false);
        if (t.label == +1) {
            const auto n_sig = static_cast<std::size_t>(
                std::ceil(spec.signal_words_fraction * static_cast<double>(n_i)));
            std::vector<std::size_t> pos(static_cast<std::size_t>(n_i));
            for (std::size_t j = 0; j < pos.size(); ++j) pos[j] = j;
            for (std::size_t j = 0; j + 1 < pos.size(); ++j) {
                const std::size_t l = j + static_cast<std::size_t>(shape_rng.next_below(pos.size() - j));
                std::swap(pos[j], pos[l]);
            }
            for (std::size_t j = 0; j < n_sig && j < pos.size(); ++j) flags[pos[j]] = true;
        }
        for (Eigen::Index j = 0; j < n_i; ++j) {
            for (Eigen::Index f = 0; f < spec.k; ++f) {
                t.words(j, f) = spec.noise_scale * noise_rng.next_gaussian();
            }
            if (flags[static_cast<std::size_t>(j)]) t.words.row(j) += dir.transpose();
        }
        pd.data.tweets.push_back(std::move(t));
        pd.signal_flags.push_back(std::move(flags));
    }
    return pd;
}

Vec aggregate(const Tweet& t, const Vec& u) {
    if (u.size() != t.n_words()) {
        throw io_error("aggregate: weight length " + std::to_string(u.size()) + " does not match word count " +
                       std::to_string(t.n_words()) + " for tweet '" + t.id + "'");
    }
    return t.words.transpose() * u;
}

void save_flags(const PlantedData& pd, const std::string& path, const std::string& config_header) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write flags file: " + path);
    if (!config_header.empty()) {
        json meta;
        meta["_config"] = config_header;
        out << meta.dump() << "\n";
    }
    for (std::size_t i = 0; i < pd.signal_flags.size(); ++i) {
        json rec;
        rec["id"] = pd.data.tweets[i].id;
        json flags = json::array();
        for (bool b : pd.signal_flags[i]) flags.push_back(b ? 1 : 0);
        rec["flags"] = std::move(flags);
        out << rec.dump() << "\n";
    }
}

std::vector<std::vector<bool>> load_flags(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open flags file: " + path);
    std::vector<std::vector<bool>> all;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::parse_error& e) {
            throw io_error(path + ":" + std::to_string(line_no) + ": malformed record: " + e.what());
        }
        if (rec.contains("_config")) continue;
        std::vector<bool> flags;
        for (const auto& v : rec.at("flags")) flags.push_back(v.get<int>() != 0);
        all.push_back(std::move(flags));
    }
    return all;
}

}  // namespace ri
