#include "asbench/splits.hpp"
#include "asbench/random.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <nlohmann/json.hpp>
#include <set>

namespace asbench {

std::string protocol_name(Protocol p)
{
    switch (p) {
    case Protocol::Instance:
        return "instance";
    case Protocol::Random:
        return "random";
    case Protocol::ProblemCombination:
        return "problem_combination";
    case Protocol::Problem:
        return "problem";
    }
    throw InvariantError("unknown protocol");
}

Protocol protocol_from_name(const std::string& name)
{
    for (Protocol p : all_protocols()) {
        if (protocol_name(p) == name) {
            return p;
        }
    }
    throw UsageError("unknown split protocol '" + name + "'");
}

std::vector<Protocol> all_protocols()
{
    return {Protocol::Instance, Protocol::Random, Protocol::ProblemCombination, Protocol::Problem};
}

namespace {

std::string label(const char* fmt, int a, int b = 0)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), fmt, a, b);
    return buf;
}

// Manifest entries are sorted by id, so filtering keeps both lists sorted.
template <typename TestPred, typename TrainPred>
Fold partition(const SuiteManifest& m, std::string name, TestPred in_test, TrainPred in_train)
{
    Fold f;
    f.label = std::move(name);
    for (const auto& e : m.entries) {
        if (in_test(e)) {
            f.test.push_back(e.id);
        } else if (in_train(e)) {
            f.train.push_back(e.id);
        }
    }
    return f;
}

SplitPlan base_plan(const SuiteManifest& m, Protocol p, std::uint64_t seed)
{
    SplitPlan plan;
    plan.protocol = p;
    plan.seed = seed;
    plan.manifest_hash = m.config_hash;
    return plan;
}

}  // namespace

SplitPlan instance_split(const SuiteManifest& manifest)
{
    SplitPlan plan = base_plan(manifest, Protocol::Instance, 0);
    std::set<int> instances;
    for (const auto& e : manifest.entries) {
        instances.insert(e.instance);
    }
    for (int inst : instances) {
        plan.folds.push_back(partition(
            manifest, label("i%d", inst), [&](const ManifestEntry& e) { return e.instance == inst; },
            [](const ManifestEntry&) { return true; }));
    }
    return plan;
}

SplitPlan random_split(const SuiteManifest& manifest, int k, std::uint64_t seed)
{
    if (k < 2) {
        throw UsageError("random split needs k >= 2");
    }
    const std::size_t n = manifest.size();
    if (n < static_cast<std::size_t>(k)) {
        throw UsageError("random split needs at least k problems");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(seed, "random-split", manifest.config_hash));
    rng.shuffle(order);
    std::vector<int> fold_of(n);
    const std::size_t base = n / static_cast<std::size_t>(k);
    const std::size_t extra = n % static_cast<std::size_t>(k);
    std::size_t at = 0;
    for (int f = 0; f < k; ++f) {
        const std::size_t size = base + (static_cast<std::size_t>(f) < extra ? 1 : 0);
        for (std::size_t i = 0; i < size; ++i) {
            fold_of[order[at++]] = f;
        }
    }
    SplitPlan plan = base_plan(manifest, Protocol::Random, seed);
    for (int f = 0; f < k; ++f) {
        Fold fold;
        fold.label = label("r%d", f);
        for (std::size_t i = 0; i < n; ++i) {
            (fold_of[i] == f ? fold.test : fold.train).push_back(manifest.entries[i].id);
        }
        plan.folds.push_back(std::move(fold));
    }
    return plan;
}

SplitPlan problem_combination_split(const SuiteManifest& manifest)
{
    SplitPlan plan = base_plan(manifest, Protocol::ProblemCombination, 0);
    for (int c : manifest.config.classes) {
        auto uses = [c](const ManifestEntry& e) { return e.class_i == c || e.class_j == c; };
        plan.folds.push_back(
            partition(manifest, label("c%02d", c), uses, [&](const ManifestEntry& e) { return !uses(e); }));
    }
    return plan;
}

std::vector<ClassPair> all_class_pairs(const std::vector<int>& classes)
{
    std::vector<int> sorted = classes;
    std::sort(sorted.begin(), sorted.end());
    std::vector<ClassPair> out;
    for (std::size_t a = 0; a < sorted.size(); ++a) {
        for (std::size_t b = a + 1; b < sorted.size(); ++b) {
            out.push_back({sorted[a], sorted[b]});
        }
    }
    return out;
}

std::vector<ClassPair> disjoint_class_pairs(const std::vector<int>& classes, std::uint64_t seed)
{
    std::vector<int> order = classes;
    std::sort(order.begin(), order.end());
    Rng rng(derive_seed(seed, "class-pairs"));
    rng.shuffle(order);
    std::vector<ClassPair> out;
    for (std::size_t k = 0; k + 1 < order.size(); k += 2) {
        out.push_back({std::min(order[k], order[k + 1]), std::max(order[k], order[k + 1])});
    }
    std::sort(out.begin(), out.end());
    return out;
}

SplitPlan problem_split(const SuiteManifest& manifest, const std::vector<ClassPair>& pairs, std::uint64_t seed)
{
    SplitPlan plan = base_plan(manifest, Protocol::Problem, seed);
    for (auto [a, b] : pairs) {
        if (a == b) {
            throw UsageError("problem split pair needs two distinct classes");
        }
        auto touches = [a, b](int c) { return c == a || c == b; };
        plan.folds.push_back(partition(
            manifest, label("p%02d-%02d", std::min(a, b), std::max(a, b)),
            [&](const ManifestEntry& e) { return touches(e.class_i) && touches(e.class_j); },
            [&](const ManifestEntry& e) { return !touches(e.class_i) && !touches(e.class_j); }));
    }
    return plan;
}

SplitPlan problem_split(const SuiteManifest& manifest, bool all_pairs, std::uint64_t seed)
{
    const auto pairs = all_pairs ? all_class_pairs(manifest.config.classes)
                                 : disjoint_class_pairs(manifest.config.classes, seed);
    return problem_split(manifest, pairs, seed);
}

SplitPlan make_split(const SuiteManifest& manifest, Protocol protocol, std::uint64_t seed, int random_folds,
                     bool all_pairs)
{
    switch (protocol) {
    case Protocol::Instance:
        return instance_split(manifest);
    case Protocol::Random:
        return random_split(manifest, random_folds, seed);
    case Protocol::ProblemCombination:
        return problem_combination_split(manifest);
    case Protocol::Problem:
        return problem_split(manifest, all_pairs, seed);
    }
    throw InvariantError("unknown protocol");
}

void check_plan(const SplitPlan& plan, const SuiteManifest& manifest)
{
    std::map<std::string, const ManifestEntry*> by_id;
    for (const auto& e : manifest.entries) {
        by_id.emplace(e.id, &e);
    }
    auto entry = [&](const std::string& id) {
        const auto it = by_id.find(id);
        if (it == by_id.end()) {
            throw InvariantError("split references unknown problem '" + id + "'");
        }
        return it->second;
    };
    for (const auto& f : plan.folds) {
        if (f.test.empty()) {
            throw InvariantError("fold " + f.label + " has an empty test set");
        }
        std::set<std::string> test(f.test.begin(), f.test.end());
        std::set<int> test_instances;
        std::set<int> test_classes;
        for (const auto& id : f.test) {
            const auto* e = entry(id);
            test_instances.insert(e->instance);
            test_classes.insert(e->class_i);
            test_classes.insert(e->class_j);
        }
        for (const auto& id : f.train) {
            if (test.count(id)) {
                throw InvariantError("fold " + f.label + ": '" + id + "' is in both train and test");
            }
            const auto* e = entry(id);
            if (plan.protocol == Protocol::Instance && test_instances.count(e->instance)) {
                throw InvariantError("fold " + f.label + ": instance id leaks into training");
            }
        }
        if (plan.protocol == Protocol::Problem || plan.protocol == Protocol::ProblemCombination) {
            // Held-out classes: the pair itself, or for problem combinations the
            // class shared by every test problem.
            std::set<int> held;
            for (int c : test_classes) {
                bool everywhere = true;
                for (const auto& id : f.test) {
                    const auto* e = entry(id);
                    everywhere = everywhere && (e->class_i == c || e->class_j == c);
                }
                if (everywhere || plan.protocol == Protocol::Problem) {
                    held.insert(c);
                }
            }
            for (const auto& id : f.train) {
                const auto* e = entry(id);
                if (held.count(e->class_i) || held.count(e->class_j)) {
                    throw InvariantError("fold " + f.label + ": held-out class leaks into training");
                }
            }
        }
    }
}

nlohmann::json to_json(const SplitPlan& plan)
{
    nlohmann::json j;
    j["protocol"] = protocol_name(plan.protocol);
    j["seed"] = plan.seed;
    j["manifest_hash"] = plan.manifest_hash;
    j["folds"] = nlohmann::json::array();
    for (const auto& f : plan.folds) {
        j["folds"].push_back({{"label", f.label}, {"train", f.train}, {"test", f.test}});
    }
    return j;
}

SplitPlan plan_from_json(const nlohmann::json& j)
{
    try {
        SplitPlan plan;
        plan.protocol = protocol_from_name(j.at("protocol").get<std::string>());
        plan.seed = j.at("seed").get<std::uint64_t>();
        plan.manifest_hash = j.at("manifest_hash").get<std::string>();
        for (const auto& f : j.at("folds")) {
            plan.folds.push_back({f.at("label").get<std::string>(), f.at("train").get<std::vector<std::string>>(),
                                  f.at("test").get<std::vector<std::string>>()});
        }
        return plan;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed split plan: ") + e.what());
    }
}

}  // namespace asbench
