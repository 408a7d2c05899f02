#include "asbench/config.hpp"
#include "asbench/csv.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

namespace asbench {

namespace {

namespace pt = boost::property_tree;

const std::set<std::string> kComputed{"ela", "ela_scaled", "tinytla"};

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) {
        return {};
    }
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

std::string where(const std::string& section, const std::string& key)
{
    return "[" + section + "] " + key;
}

long long to_int(const std::string& v, const std::string& at)
{
    long long out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) {
        throw UsageError(at + ": expected an integer, got '" + v + "'");
    }
    return out;
}

std::uint64_t to_seed(const std::string& v, const std::string& at)
{
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) {
        throw UsageError(at + ": expected a non-negative integer, got '" + v + "'");
    }
    return out;
}

double to_real(const std::string& v, const std::string& at)
{
    double out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) {
        throw UsageError(at + ": expected a number, got '" + v + "'");
    }
    return out;
}

bool to_bool(const std::string& v, const std::string& at)
{
    if (v == "true" || v == "yes" || v == "on" || v == "1") {
        return true;
    }
    if (v == "false" || v == "no" || v == "off" || v == "0") {
        return false;
    }
    throw UsageError(at + ": expected true or false, got '" + v + "'");
}

std::string join(const std::vector<std::string>& items)
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        out += (i ? "," : "") + items[i];
    }
    return out;
}

std::string int_list(const std::vector<int>& v)
{
    std::vector<std::string> s;
    for (int x : v) {
        s.push_back(std::to_string(x));
    }
    return join(s);
}

const char* yes(bool b)
{
    return b ? "true" : "false";
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text)
{
    std::vector<int> out;
    for (const auto& item : split_list(text)) {
        const auto dash = item.find('-', 1);
        if (dash == std::string::npos) {
            out.push_back(static_cast<int>(to_int(item, "list item")));
            continue;
        }
        const auto a = static_cast<int>(to_int(trim(item.substr(0, dash)), "range start"));
        const auto b = static_cast<int>(to_int(trim(item.substr(dash + 1)), "range end"));
        if (b < a) {
            throw UsageError("empty range '" + item + "'");
        }
        for (int k = a; k <= b; ++k) {
            out.push_back(k);
        }
    }
    return out;
}

std::vector<std::string> group_parts(const std::string& group)
{
    std::vector<std::string> out;
    std::stringstream ss(group);
    std::string item;
    while (std::getline(ss, item, '+')) {
        if (item.empty()) {
            throw UsageError("malformed feature group '" + group + "'");
        }
        out.push_back(item);
    }
    return out;
}

std::vector<std::string> computed_groups(const ExperimentConfig& cfg)
{
    std::set<std::string> wanted;
    for (const auto& g : cfg.feature_groups) {
        for (const auto& part : group_parts(g)) {
            if (kComputed.count(part)) {
                wanted.insert(part);
            }
        }
    }
    return {wanted.begin(), wanted.end()};
}

std::string ExperimentConfig::canonical(const std::string& section) const
{
    std::ostringstream o;
    o << "[" << section << "]\n";
    if (section == "suite") {
        std::vector<std::string> alphas;
        for (double a : suite.alphas) {
            alphas.push_back(format_double(a));
        }
        o << "classes = " << int_list(suite.classes) << "\n"
          << "instances = " << int_list(suite.instances) << "\n"
          << "alphas = " << join(alphas) << "\n"
          << "dim = " << suite.dim << "\n"
          << "sample_seed = " << sample_seed << "\n"
          << "sample_factor = " << sample_factor << "\n";
    } else if (section == "portfolio") {
        o << "names = " << join(portfolios) << "\n"
          << "runs = " << portfolio.runs << "\n"
          << "budget = " << portfolio.budget << "\n"
          << "pop_size = " << portfolio.pop_size << "\n"
          << "seed = " << portfolio.master_seed << "\n";
    } else if (section == "features") {
        o << "groups = " << join(feature_groups) << "\n"
          << "tla_max_dim = " << tla_max_dim << "\n";
        for (const auto& [g, p] : imports) {
            o << "import." << g << " = " << p.generic_string() << "\n";
        }
    } else if (section == "splits") {
        std::vector<std::string> names;
        for (auto p : protocols) {
            names.push_back(protocol_name(p));
        }
        o << "protocols = " << join(names) << "\n"
          << "seed = " << split_seed << "\n"
          << "random_folds = " << random_folds << "\n"
          << "pairs = " << (all_pairs ? "all" : "disjoint") << "\n";
    } else if (section == "selector") {
        o << "trees = " << forest.n_trees << "\n"
          << "bootstrap = " << yes(forest.bootstrap) << "\n"
          << "max_features = " << forest.max_features << "\n"
          << "min_samples_split = " << forest.min_samples_split << "\n"
          << "min_samples_leaf = " << forest.min_samples_leaf << "\n"
          << "min_impurity_decrease = " << format_double(forest.min_impurity_decrease) << "\n"
          << "max_depth = " << forest.max_depth << "\n"
          << "seed = " << forest.seed << "\n";
    } else if (section == "analysis") {
        o << "correlation = " << yes(analysis.correlation) << "\n"
          << "consistency = " << yes(analysis.consistency) << "\n"
          << "alignment = " << yes(analysis.alignment) << "\n"
          << "distributions = " << yes(analysis.distributions) << "\n"
          << "pairs = " << analysis.consistency_pairs << "\n"
          << "problems = " << analysis.alignment_problems << "\n"
          << "pca_dims = " << analysis.pca_dims << "\n"
          << "seed = " << analysis.seed << "\n";
    } else if (section == "output") {
        o << "dir = " << output.generic_string() << "\n"
          << "workers = " << workers << "\n";
    } else {
        throw InvariantError("no config section '" + section + "'");
    }
    return o.str();
}

std::string ExperimentConfig::to_ini() const
{
    std::string out;
    for (const char* s : {"suite", "portfolio", "features", "splits", "selector", "analysis", "output"}) {
        out += canonical(s) + "\n";
    }
    return out;
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir)
{
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw UsageError("config: " + std::string(e.what()));
    }
    auto resolve = [&](const std::string& p) {
        const std::filesystem::path path(p);
        return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
    };

    ExperimentConfig cfg;
    for (const auto& [section, body] : tree) {
        if (!body.data().empty()) {
            throw UsageError("config: key '" + section + "' outside any section");
        }
        for (const auto& [key, node] : body) {
            const std::string v = trim(node.data());
            const std::string at = where(section, key);
            if (section == "suite") {
                if (key == "classes") {
                    cfg.suite.classes = parse_int_list(v);
                } else if (key == "instances") {
                    cfg.suite.instances = parse_int_list(v);
                } else if (key == "alphas") {
                    cfg.suite.alphas.clear();
                    for (const auto& a : split_list(v)) {
                        cfg.suite.alphas.push_back(to_real(a, at));
                    }
                } else if (key == "dim") {
                    cfg.suite.dim = static_cast<int>(to_int(v, at));
                } else if (key == "sample_seed") {
                    cfg.sample_seed = to_seed(v, at);
                } else if (key == "sample_factor") {
                    cfg.sample_factor = static_cast<int>(to_int(v, at));
                } else {
                    throw UsageError("config: unknown key " + at);
                }
            } else if (section == "portfolio") {
                if (key == "names" || key == "name") {
                    cfg.portfolios = split_list(v);
                } else if (key == "runs") {
                    cfg.portfolio.runs = static_cast<int>(to_int(v, at));
                } else if (key == "budget") {
                    cfg.portfolio.budget = static_cast<int>(to_int(v, at));
                } else if (key == "pop_size") {
                    cfg.portfolio.pop_size = static_cast<int>(to_int(v, at));
                } else if (key == "seed") {
                    cfg.portfolio.master_seed = to_seed(v, at);
                } else {
                    throw UsageError("config: unknown key " + at);
                }
            } else if (section == "features") {
                if (key == "groups") {
                    cfg.feature_groups = split_list(v);
                } else if (key == "tla_max_dim") {
                    cfg.tla_max_dim = static_cast<int>(to_int(v, at));
                } else if (key.rfind("import.", 0) == 0 && key.size() > 7) {
                    cfg.imports[key.substr(7)] = resolve(v);
                } else {
                    throw UsageError("config: unknown key " + at);
                }
            } else if (section == "splits") {
                if (key == "protocols") {
                    cfg.protocols.clear();
                    for (const auto& p : split_list(v)) {
                        cfg.protocols.push_back(protocol_from_name(p));
                    }
                } else if (key == "seed") {
                    cfg.split_seed = to_seed(v, at);
                } else if (key == "random_folds") {
                    cfg.random_folds = static_cast<int>(to_int(v, at));
                } else if (key == "pairs") {
                    if (v != "all" && v != "disjoint") {
                        throw UsageError(at + ": expected 'all' or 'disjoint'");
                    }
                    cfg.all_pairs = v == "all";
                } else {
                    throw UsageError("config: unknown key " + at);
                }
            } else if (section == "selector") {
                auto& f = cfg.forest;
                if (key == "trees") {
                    f.n_trees = static_cast<int>(to_int(v, at));
                } else if (key == "bootstrap") {
                    f.bootstrap = to_bool(v, at);
                } else if (key == "max_features") {
                    f.max_features = static_cast<int>(to_int(v, at));
                } else if (key == "min_samples_split") {
                    f.min_samples_split = static_cast<int>(to_int(v, at));
                } else if (key == "min_samples_leaf") {
                    f.min_samples_leaf = static_cast<int>(to_int(v, at));
                } else if (key == "min_impurity_decrease") {
                    f.min_impurity_decrease = to_real(v, at);
                } else if (key == "max_depth") {
                    f.max_depth = static_cast<int>(to_int(v, at));
                } else if (key == "seed") {
                    f.seed = to_seed(v, at);
                } else {
                    throw UsageError("config: unknown key " + at);
                }
            } else if (section == "analysis") {
                auto& a = cfg.analysis;
                if (key == "correlation") {
                    a.correlation = to_bool(v, at);
                } else if (key == "consistency") {
                    a.consistency = to_bool(v, at);
                } else if (key == "alignment") {
                    a.alignment = to_bool(v, at);
                } else if (key == "distributions") {
                    a.distributions = to_bool(v, at);
                } else if (key == "pairs") {
                    a.consistency_pairs = static_cast<std::size_t>(to_seed(v, at));
                } else if (key == "problems") {
                    a.alignment_problems = static_cast<std::size_t>(to_seed(v, at));
                } else if (key == "pca_dims") {
                    a.pca_dims = static_cast<int>(to_int(v, at));
                } else if (key == "seed") {
                    a.seed = to_seed(v, at);
                } else {
                    throw UsageError("config: unknown key " + at);
                }
            } else if (section == "output") {
                if (key == "dir") {
                    cfg.output = resolve(v);
                } else if (key == "workers") {
                    cfg.workers = static_cast<std::size_t>(to_seed(v, at));
                } else {
                    throw UsageError("config: unknown key " + at);
                }
            } else {
                throw UsageError("config: unknown section [" + section + "]");
            }
        }
    }
    validate(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    if (!std::filesystem::exists(path)) {
        throw UsageError("config file not found: " + path.string());
    }
    std::string text;
    try {
        text = csv::read_text(path);
    } catch (const DataError& e) {
        throw UsageError(e.what());
    }
    return parse_config(text, path.parent_path());
}

void validate(const ExperimentConfig& cfg)
{
    if (cfg.suite.classes.empty() || cfg.suite.instances.empty() || cfg.suite.alphas.empty()) {
        throw UsageError("config: suite needs classes, instances and alphas");
    }
    if (cfg.suite.dim < 1 || cfg.sample_factor < 1) {
        throw UsageError("config: dim and sample_factor must be positive");
    }
    if (cfg.portfolios.empty()) {
        throw UsageError("config: no portfolio named");
    }
    for (const auto& p : cfg.portfolios) {
        make_portfolio(p);
    }
    if (cfg.portfolio.runs < 1 || cfg.portfolio.budget < 1 || cfg.portfolio.pop_size < kMinPopulation) {
        throw UsageError("config: runs and budget must be positive and pop_size at least " +
                         std::to_string(kMinPopulation));
    }
    if (cfg.feature_groups.empty()) {
        throw UsageError("config: no feature group named");
    }
    for (const auto& g : cfg.feature_groups) {
        for (const auto& part : group_parts(g)) {
            if (!kComputed.count(part) && !cfg.imports.count(part)) {
                throw UsageError("config: feature group '" + part + "' is neither computed nor imported");
            }
        }
    }
    for (const auto& [g, path] : cfg.imports) {
        if (kComputed.count(g)) {
            throw UsageError("config: imported group '" + g + "' shadows a computed group");
        }
        if (!std::filesystem::exists(path)) {
            throw UsageError("config: import file for '" + g + "' not found: " + path.string());
        }
    }
    const auto groups = computed_groups(cfg);
    const bool ela = std::count(groups.begin(), groups.end(), "ela") + std::count(groups.begin(), groups.end(), "ela_scaled");
    if (ela && cfg.sample_size() < 100) {
        throw UsageError("config: ELA features need a sample of at least 100 points (sample_factor * dim)");
    }
    if (cfg.tla_max_dim < 0 || cfg.tla_max_dim > 1) {
        throw UsageError("config: tla_max_dim must be 0 or 1");
    }
    if (cfg.protocols.empty()) {
        throw UsageError("config: no split protocol named");
    }
    if (cfg.random_folds < 2) {
        throw UsageError("config: random_folds must be at least 2");
    }
    if (cfg.forest.n_trees < 1) {
        throw UsageError("config: trees must be positive");
    }
    if (cfg.analysis.pca_dims < 1) {
        throw UsageError("config: pca_dims must be positive");
    }
}

}  // namespace asbench
