#include "learn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/rng.hpp"

namespace proxsim::learn {

SplitResult grouped_split(std::span<const int32_t> groups, std::span<const int8_t> labels,
                          double test_fraction, uint64_t seed) {
    require(groups.size() == labels.size(), ErrorKind::Invalid, "grouped_split: length mismatch");
    require(test_fraction > 0.0 && test_fraction < 1.0, ErrorKind::Invalid,
            "grouped_split: test_fraction must be in (0, 1)");

    // Scenario -> label, then per-class scenario lists in ascending id order.
    std::map<int32_t, int8_t> group_label;
    for (size_t i = 0; i < groups.size(); ++i) group_label.emplace(groups[i], labels[i]);
    std::map<int8_t, std::vector<int32_t>> by_class;
    for (const auto& [g, l] : group_label) by_class[l].push_back(g);

    std::vector<int32_t> test_groups;
    Rng rng(derive_seed(seed, 0x5eed5p17, 0));
    for (auto& [label, ids] : by_class) {
        require(ids.size() >= 2, ErrorKind::Invalid,
                "grouped_split: class " + std::to_string(label) + " has fewer than 2 scenarios");
        // Fisher-Yates, own RNG transform for cross-platform determinism.
        for (size_t i = ids.size() - 1; i > 0; --i) {
            const size_t j = static_cast<size_t>(rng.u01() * static_cast<double>(i + 1));
            std::swap(ids[i], ids[std::min(j, i)]);
        }
        size_t n_test = static_cast<size_t>(
            std::llround(test_fraction * static_cast<double>(ids.size())));
        n_test = std::clamp<size_t>(n_test, 1, ids.size() - 1);
        test_groups.insert(test_groups.end(), ids.begin(), ids.begin() + static_cast<long>(n_test));
    }
    std::sort(test_groups.begin(), test_groups.end());

    SplitResult out;
    for (size_t i = 0; i < groups.size(); ++i) {
        const bool in_test =
            std::binary_search(test_groups.begin(), test_groups.end(), groups[i]);
        (in_test ? out.test_idx : out.train_idx).push_back(i);
    }
    out.n_test_groups = test_groups.size();
    out.n_train_groups = group_label.size() - test_groups.size();
    return out;
}

std::vector<RocPoint> roc_points(std::span<const uint8_t> is_positive,
                                 std::span<const float> scores) {
    require(is_positive.size() == scores.size(), ErrorKind::Invalid, "roc: length mismatch");
    const size_t n = scores.size();
    int64_t p = 0;
    for (uint8_t b : is_positive) p += b;
    const int64_t neg = static_cast<int64_t>(n) - p;

    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return scores[a] > scores[b]; });

    std::vector<RocPoint> pts;
    pts.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
    int64_t tp = 0, fp = 0;
    size_t i = 0;
    while (i < n) {
        const float s = scores[order[i]];
        while (i < n && scores[order[i]] == s) {
            if (is_positive[order[i]]) ++tp; else ++fp;
            ++i;
        }
        pts.push_back({static_cast<double>(s),
                       neg > 0 ? static_cast<double>(fp) / static_cast<double>(neg) : 0.0,
                       p > 0 ? static_cast<double>(tp) / static_cast<double>(p) : 0.0});
    }
    return pts;
}

double auroc_from_points(const std::vector<RocPoint>& pts) {
    double area = 0.0;
    for (size_t i = 1; i < pts.size(); ++i)
        area += (pts[i].fpr - pts[i - 1].fpr) * (pts[i].tpr + pts[i - 1].tpr) * 0.5;
    return area;
}

MetricsReport evaluate(std::span<const int8_t> y_true, std::span<const float> probas,
                       const std::vector<std::string>& class_names,
                       std::span<const int32_t> groups) {
    const size_t k = class_names.size();
    const size_t n = y_true.size();
    require(k >= 1, ErrorKind::Invalid, "evaluate: empty class list");
    require(probas.size() == n * k, ErrorKind::Invalid,
            "evaluate: probas size does not match labels x classes");
    require(groups.empty() || groups.size() == n, ErrorKind::Invalid,
            "evaluate: groups length mismatch");

    MetricsReport r;
    r.confusion.assign(k, std::vector<int64_t>(k, 0));
    std::vector<int8_t> y_pred(n);
    for (size_t i = 0; i < n; ++i) {
        size_t best = 0;
        for (size_t c = 1; c < k; ++c)
            if (probas[i * k + c] > probas[i * k + best]) best = c;
        y_pred[i] = static_cast<int8_t>(best);
        require(y_true[i] >= 0 && static_cast<size_t>(y_true[i]) < k, ErrorKind::Invalid,
                "evaluate: label out of range");
        r.confusion[static_cast<size_t>(y_true[i])][best]++;
    }

    int64_t correct = 0;
    for (size_t c = 0; c < k; ++c) correct += r.confusion[c][c];
    r.accuracy = static_cast<double>(correct) / static_cast<double>(n);

    double f1_sum = 0.0, auroc_sum = 0.0;
    std::vector<uint8_t> pos(n);
    std::vector<float> scores(n);
    for (size_t c = 0; c < k; ++c) {
        ClassMetrics cm;
        cm.name = class_names[c];
        int64_t tp = r.confusion[c][c], fn = 0, fp = 0;
        for (size_t o = 0; o < k; ++o) {
            if (o == c) continue;
            fn += r.confusion[c][o];
            fp += r.confusion[o][c];
        }
        cm.support = tp + fn;
        if (tp + fp > 0) cm.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        else cm.degenerate = true;
        if (tp + fn > 0) cm.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
        else cm.degenerate = true;
        if (cm.precision + cm.recall > 0.0)
            cm.f1 = 2.0 * cm.precision * cm.recall / (cm.precision + cm.recall);
        else cm.degenerate = true;

        for (size_t i = 0; i < n; ++i) {
            pos[i] = y_true[i] == static_cast<int8_t>(c) ? 1 : 0;
            scores[i] = probas[i * k + c];
        }
        cm.roc = roc_points(pos, scores);
        cm.auroc = cm.support > 0 && cm.support < static_cast<int64_t>(n)
                       ? auroc_from_points(cm.roc)
                       : 0.5;
        f1_sum += cm.f1;
        auroc_sum += cm.auroc;
        r.per_class.push_back(std::move(cm));
    }
    r.macro_f1 = f1_sum / static_cast<double>(k);
    r.macro_auroc = auroc_sum / static_cast<double>(k);

    if (!groups.empty()) {
        // Majority vote per scenario; ties toward the lowest class index.
        std::map<int32_t, std::pair<int8_t, std::vector<int64_t>>> votes;
        for (size_t i = 0; i < n; ++i) {
            auto& entry = votes[groups[i]];
            entry.first = y_true[i];
            entry.second.resize(k, 0);
            entry.second[static_cast<size_t>(y_pred[i])]++;
        }
        std::vector<std::vector<int64_t>> conf(k, std::vector<int64_t>(k, 0));
        for (const auto& [g, entry] : votes) {
            size_t best = 0;
            for (size_t c = 1; c < k; ++c)
                if (entry.second[c] > entry.second[best]) best = c;
            conf[static_cast<size_t>(entry.first)][best]++;
        }
        int64_t sc_correct = 0, sc_total = 0;
        double sc_f1 = 0.0;
        for (size_t c = 0; c < k; ++c) {
            int64_t tp = conf[c][c], fn = 0, fp = 0;
            for (size_t o = 0; o < k; ++o) {
                if (o == c) continue;
                fn += conf[c][o];
                fp += conf[o][c];
            }
            sc_correct += tp;
            for (int64_t v : conf[c]) sc_total += v;
            const double prec = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
            const double rec = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
            sc_f1 += prec + rec > 0.0 ? 2.0 * prec * rec / (prec + rec) : 0.0;
        }
        r.scenario_accuracy = sc_total > 0 ? static_cast<double>(sc_correct) / static_cast<double>(sc_total) : 0.0;
        r.scenario_macro_f1 = sc_f1 / static_cast<double>(k);
    }
    return r;
}

nlohmann::json report_to_json(const MetricsReport& r) {
    nlohmann::json j;
    j["accuracy"] = r.accuracy;
    j["macro_f1"] = r.macro_f1;
    j["macro_auroc"] = r.macro_auroc;
    j["confusion"] = r.confusion;
    nlohmann::json per;
    for (const ClassMetrics& c : r.per_class) {
        per[c.name] = {{"precision", c.precision}, {"recall", c.recall},   {"f1", c.f1},
                       {"auroc", c.auroc},         {"support", c.support}, {"degenerate", c.degenerate}};
    }
    j["per_class"] = per;
    j["scenario_level"] = {{"accuracy", r.scenario_accuracy}, {"macro_f1", r.scenario_macro_f1}};
    return j;
}

void write_confusion_csv(const MetricsReport& r, const std::string& path) {
    CsvWriter w(path);
    w.field("true\\pred");
    for (const ClassMetrics& c : r.per_class) w.field(c.name);
    w.end_row();
    for (size_t i = 0; i < r.confusion.size(); ++i) {
        w.field(r.per_class[i].name);
        for (int64_t v : r.confusion[i]) w.field(static_cast<long long>(v));
        w.end_row();
    }
    w.flush();
}

void write_roc_csv(const MetricsReport& r, const std::string& path) {
    CsvWriter w(path);
    w.field("class");
    w.field("threshold");
    w.field("fpr");
    w.field("tpr");
    w.end_row();
    for (const ClassMetrics& c : r.per_class) {
        for (const RocPoint& p : c.roc) {
            w.field(c.name);
            w.field(p.threshold);
            w.field(p.fpr);
            w.field(p.tpr);
            w.end_row();
        }
    }
    w.flush();
}

}  // namespace proxsim::learn
