/*
 * Copyright 2026 The specmc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "specmc/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "specmc/error.hpp"

namespace specmc
{

using nlohmann::json;

const char* to_string(ExperimentKind kind) noexcept
{
    switch (kind)
    {
    case ExperimentKind::lln:
        return "lln";
    case ExperimentKind::tail:
        return "tail";
    case ExperimentKind::counterexample:
        return "counterexample";
    case ExperimentKind::spectrum:
        return "spectrum";
    case ExperimentKind::ustat:
        return "ustat";
    case ExperimentKind::tau:
        return "tau";
    }
    return "unknown";
}

ExperimentKind parse_experiment(std::string_view name)
{
    for (auto kind : {ExperimentKind::lln, ExperimentKind::tail, ExperimentKind::counterexample,
                      ExperimentKind::spectrum, ExperimentKind::ustat, ExperimentKind::tau})
        if (name == to_string(kind))
            return kind;
    throw ConfigError("experiment", "unknown experiment '" + std::string(name) + "'");
}

namespace
{
std::string join(const std::string& path, const std::string& key)
{
    return path.empty() ? key : path + "." + key;
}

// Reads keys from one JSON object and rejects the ones nobody asked for.
class ObjectReader
{
public:
    ObjectReader(json object, std::string path) : object_(std::move(object)), path_(std::move(path))
    {
        if (!object_.is_object())
            throw ConfigError(path_, "must be an object");
    }

    const std::string& path() const { return path_; }
    std::string key_path(const std::string& key) const { return join(path_, key); }

    const json* find(const std::string& key)
    {
        seen_.insert(key);
        const auto it = object_.find(key);
        return it == object_.end() ? nullptr : &*it;
    }

    double number(const std::string& key, double fallback, const std::function<bool(double)>& ok,
                  const std::string& range)
    {
        const json* value = find(key);
        if (!value)
            return check(key, fallback, ok, range);
        if (!value->is_number())
            throw ConfigError(key_path(key), "must be a number");
        return check(key, value->get<double>(), ok, range);
    }

    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback, std::uint64_t lo,
                                   std::uint64_t hi)
    {
        const json* value = find(key);
        if (!value)
            return fallback;
        const std::uint64_t v = as_unsigned(*value, key_path(key));
        if (v < lo || v > hi)
            throw ConfigError(key_path(key), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        return v;
    }

    std::string string(const std::string& key, const std::string& fallback)
    {
        const json* value = find(key);
        if (!value)
            return fallback;
        if (!value->is_string())
            throw ConfigError(key_path(key), "must be a string");
        return value->get<std::string>();
    }

    bool boolean(const std::string& key, bool fallback)
    {
        const json* value = find(key);
        if (!value)
            return fallback;
        if (!value->is_boolean())
            throw ConfigError(key_path(key), "must be true or false");
        return value->get<bool>();
    }

    void finish() const
    {
        for (const auto& item : object_.items())
            if (!seen_.count(item.key()))
                throw ConfigError(key_path(item.key()), "unknown key");
    }

    static std::uint64_t as_unsigned(const json& value, const std::string& path)
    {
        if (value.is_number_unsigned())
            return value.get<std::uint64_t>();
        if (value.is_number_integer() && value.get<std::int64_t>() >= 0)
            return static_cast<std::uint64_t>(value.get<std::int64_t>());
        throw ConfigError(path, "must be a nonnegative integer");
    }

private:
    double check(const std::string& key, double v, const std::function<bool(double)>& ok,
                 const std::string& range) const
    {
        if (!std::isfinite(v) || !ok(v))
            throw ConfigError(key_path(key), "must be " + range);
        return v;
    }

    json object_;
    std::string path_;
    std::set<std::string> seen_;
};

const json kEmptyObject = json::object();

bool positive(double v) { return v > 0.0; }
bool nonnegative(double v) { return v >= 0.0; }
bool any(double) { return true; }
bool unit_open(double v) { return v > 0.0 && v < 1.0; }

json normalize_law(const json* source, const std::string& path)
{
    ObjectReader r(source ? *source : json{{"family", "uniform"}}, path);
    const std::string family = r.string("family", "uniform");
    json out{{"family", family}};
    if (family == "beta")
    {
        out["a"] = r.number("a", 2.0, positive, "positive");
        out["b"] = r.number("b", 2.0, positive, "positive");
    }
    else if (family != "uniform")
        throw ConfigError(r.key_path("family"), "unknown law '" + family + "' (uniform, beta)");
    r.finish();
    return out;
}

StationaryLaw make_law(const json& law)
{
    if (law.at("family") == "beta")
        return beta_law(law.at("a").get<double>(), law.at("b").get<double>());
    return uniform_law();
}

json normalize_interval(ObjectReader& r, const std::string& key, double lo, double hi)
{
    const json* value = r.find(key);
    if (value)
    {
        if (!value->is_array() || value->size() != 2 || !(*value)[0].is_number() || !(*value)[1].is_number())
            throw ConfigError(r.key_path(key), "must be a pair [lo, hi]");
        lo = (*value)[0].get<double>();
        hi = (*value)[1].get<double>();
    }
    if (!(0.0 <= lo && lo < hi && hi <= 1.0))
        throw ConfigError(r.key_path(key), "must satisfy 0 <= lo < hi <= 1");
    return json::array({lo, hi});
}

json normalize_kernel(const json* source, const json& fallback, const std::string& path)
{
    ObjectReader r(source ? *source : fallback, path);
    const std::string family = r.string("family", "cosine");
    json out{{"family", family}};
    if (family == "zero" || family == "diagonal")
    {
    }
    else if (family == "constant")
        out["c"] = r.number("c", 1.0, any, "finite");
    else if (family == "cosine")
    {
        const json* lambdas = r.find("lambdas");
        const json* csv = r.find("lambdas_csv");
        std::vector<double> values{1.0, 0.5, 0.25};
        if (lambdas && csv)
            throw ConfigError(r.key_path("lambdas_csv"), "conflicts with lambdas");
        if (csv)
        {
            if (!csv->is_string())
                throw ConfigError(r.key_path("lambdas_csv"), "must be a path");
            std::ifstream in(csv->get<std::string>());
            if (!in)
                throw ConfigError(r.key_path("lambdas_csv"), "cannot open '" + csv->get<std::string>() + "'");
            try
            {
                values = read_lambdas_csv(in);
            }
            catch (const Error& e)
            {
                throw ConfigError(r.key_path("lambdas_csv"), e.what());
            }
        }
        if (lambdas)
        {
            if (!lambdas->is_array() || lambdas->empty())
                throw ConfigError(r.key_path("lambdas"), "must be a nonempty array of numbers");
            values.clear();
            for (const auto& v : *lambdas)
            {
                if (!v.is_number() || !std::isfinite(v.get<double>()))
                    throw ConfigError(r.key_path("lambdas"), "must be a nonempty array of numbers");
                values.push_back(v.get<double>());
            }
        }
        out["lambdas"] = values;
    }
    else if (family == "cosine_series")
    {
        out["lambda0"] = r.number("lambda0", 1.0, any, "finite");
        out["ratio"] = r.number("ratio", 0.5, unit_open, "in (0, 1)");
    }
    else if (family == "gaussian")
        out["width"] = r.number("width", 0.1, positive, "positive");
    else if (family == "polynomial")
    {
        out["c"] = r.number("c", 0.0, any, "finite");
        out["degree"] = r.unsigned_integer("degree", 1, 0, 16);
    }
    else
        throw ConfigError(r.key_path("family"), "unknown kernel family '" + family +
                                                    "' (zero, constant, cosine, cosine_series, gaussian, "
                                                    "polynomial, diagonal)");
    r.finish();
    return out;
}

json normalize_chain(const json* source, const std::string& path)
{
    ObjectReader r(source ? *source : json{{"family", "refresh"}}, path);
    const std::string family = r.string("family", "refresh");
    json out{{"family", family}};
    const json* minorization = r.find("minorization");
    ObjectReader m(minorization ? *minorization : kEmptyObject, r.key_path("minorization"));
    json minor = json::object();
    if (family == "iid")
    {
        out["law"] = normalize_law(r.find("law"), r.key_path("law"));
        minor["delta"] = m.number("delta", 0.5, [](double d) { return d > 0.0 && d <= 1.0; }, "in (0, 1]");
    }
    else if (family == "refresh")
    {
        const double stay = r.number("stay_prob", 0.5, [](double p) { return p >= 0.0 && p < 1.0; }, "in [0, 1)");
        out["stay_prob"] = stay;
        minor["delta"] = m.number("delta", 1.0 - stay, [stay](double d) { return d > 0.0 && d <= 1.0 - stay; },
                                  "in (0, 1 - stay_prob]");
    }
    else if (family == "metropolis")
    {
        out["target"] = normalize_law(r.find("target"), r.key_path("target"));
        out["step"] = r.number("step", 0.5, [](double s) { return s > 0.0 && s <= 1.0; }, "in (0, 1]");
        minor["delta"] = m.number("delta", 0.3, [](double d) { return d > 0.0 && d <= 1.0; }, "in (0, 1]");
        minor["small_set"] = normalize_interval(m, "small_set", 0.3, 0.7);
        minor["nu_support"] = normalize_interval(m, "nu_support", 0.3, 0.7);
    }
    else
        throw ConfigError(r.key_path("family"), "unknown chain family '" + family + "' (iid, refresh, metropolis)");
    m.finish();
    out["minorization"] = minor;
    r.finish();
    return out;
}

struct ExperimentDefaults
{
    std::vector<std::size_t> n_grid;
    std::vector<double> t_grid;
    std::size_t replicates;
    std::size_t max_n;
    std::size_t min_n;
    json kernel;
    std::set<std::string> keys;
};

ExperimentDefaults defaults_for(ExperimentKind kind)
{
    const json cosine{{"family", "cosine"}, {"lambdas", {1.0, 0.5, 0.25}}};
    const std::set<std::string> spectral{"kernel", "chain", "start", "n_grid", "replicates", "quadrature_order",
                                         "spectrum_route"};
    switch (kind)
    {
    case ExperimentKind::lln:
        return {{256, 1024, 4096}, {}, 50, kSpectrumMaxN, 1, cosine, spectral};
    case ExperimentKind::tail: {
        auto keys = spectral;
        keys.insert({"t_grid", "permutations"});
        return {{128, 256, 512, 1024}, {0.3}, 2000, kSpectrumMaxN, 1, cosine, keys};
    }
    case ExperimentKind::counterexample:
        return {{1024, 4096, 16384, 65536}, {}, 50, kCounterexampleMaxN, 1, json(), {"start", "n_grid", "replicates"}};
    case ExperimentKind::spectrum:
        return {{512}, {}, 1, kSpectrumMaxN, 1, cosine, spectral};
    case ExperimentKind::ustat:
        return {{1000, 10000, 100000},
                {0.01},
                100,
                std::size_t{1} << 24,
                2,
                json{{"family", "polynomial"}, {"c", 0.0}, {"degree", 1}},
                {"kernel", "chain", "start", "n_grid", "t_grid", "replicates", "quadrature_order", "ustat_route"}};
    case ExperimentKind::tau:
        return {{}, {}, 1, 0, 0, json(), {"drift"}};
    }
    return {};
}

std::vector<std::size_t> read_n_grid(ObjectReader& r, const ExperimentDefaults& d)
{
    const json* value = r.find("n_grid");
    if (!value)
        return d.n_grid;
    const std::string path = r.key_path("n_grid");
    if (!value->is_array() || value->empty())
        throw ConfigError(path, "must be a nonempty array of sizes");
    std::vector<std::size_t> grid;
    for (const auto& v : *value)
    {
        const std::uint64_t n = ObjectReader::as_unsigned(v, path);
        if (n < d.min_n || n > d.max_n)
            throw ConfigError(path, "entries must lie in [" + std::to_string(d.min_n) + ", " + std::to_string(d.max_n) + "]");
        if (!grid.empty() && n <= grid.back())
            throw ConfigError(path, "must be strictly increasing");
        grid.push_back(static_cast<std::size_t>(n));
    }
    return grid;
}

std::vector<double> read_t_grid(ObjectReader& r, const ExperimentDefaults& d)
{
    const json* value = r.find("t_grid");
    if (!value)
        return d.t_grid;
    const std::string path = r.key_path("t_grid");
    if (!value->is_array() || value->empty())
        throw ConfigError(path, "must be a nonempty array of numbers");
    std::vector<double> grid;
    for (const auto& v : *value)
    {
        if (!v.is_number() || !std::isfinite(v.get<double>()) || v.get<double>() < 0.0)
            throw ConfigError(path, "entries must be finite and nonnegative");
        grid.push_back(v.get<double>());
    }
    return grid;
}

DriftParams read_drift(const json* source, const std::string& path)
{
    ObjectReader r(source ? *source : kEmptyObject, path);
    DriftParams d;
    d.lambda = r.number("lambda", d.lambda, unit_open, "in (0, 1)");
    d.b = r.number("b", d.b, nonnegative, "nonnegative");
    d.K = r.number("K", d.K, [](double k) { return k >= 1.0; }, "at least 1");
    d.delta = r.number("delta", d.delta, unit_open, "in (0, 1)");
    d.V_at_start = r.number("V_at_start", d.V_at_start, [](double v) { return v >= 1.0; }, "at least 1");
    d.in_C = r.boolean("in_C", d.in_C);
    r.finish();
    return d;
}
}  // namespace

RunConfig default_config(ExperimentKind kind)
{
    return parse_config(json{{"experiment", to_string(kind)}}.dump());
}

RunConfig parse_config(std::string_view text, std::optional<ExperimentKind> expected)
{
    json root;
    try
    {
        root = json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        throw ConfigError("", std::string("malformed configuration: ") + e.what());
    }
    ObjectReader r(root, "");

    RunConfig config;
    const json* experiment = r.find("experiment");
    if (experiment)
    {
        if (!experiment->is_string())
            throw ConfigError("experiment", "must be a string");
        config.experiment = parse_experiment(experiment->get<std::string>());
        if (expected && *expected != config.experiment)
            throw ConfigError("experiment", std::string("config is for '") + to_string(config.experiment) +
                                                "' but '" + to_string(*expected) + "' was requested");
    }
    else if (expected)
        config.experiment = *expected;
    else
        throw ConfigError("experiment", "missing");

    const ExperimentDefaults d = defaults_for(config.experiment);
    // Reject keys that this experiment does not use before reading anything else.
    static const std::set<std::string> common{"experiment", "master_seed", "output_dir"};
    for (const auto& item : root.items())
        if (!common.count(item.key()) && !d.keys.count(item.key()))
            throw ConfigError(item.key(), std::string("unknown key for experiment '") +
                                              to_string(config.experiment) + "'");

    config.master_seed = r.unsigned_integer("master_seed", 1, 0, std::numeric_limits<std::uint64_t>::max());
    config.output_dir = r.string("output_dir", "runs");
    if (config.output_dir.empty())
        throw ConfigError("output_dir", "must not be empty");

    if (config.experiment == ExperimentKind::tau)
    {
        config.drift = read_drift(r.find("drift"), "drift");
        config.replicates = 1;
        r.finish();
        return config;
    }

    config.n_grid = read_n_grid(r, d);
    config.t_grid = read_t_grid(r, d);
    config.replicates = r.unsigned_integer("replicates", d.replicates, 1, 1000000);
    if (const json* start = r.find("start"))
    {
        if (start->is_string() && start->get<std::string>() == "stationary")
            config.start.reset();
        else if (start->is_number() && unit_open(start->get<double>()))
            config.start = start->get<double>();
        else
            throw ConfigError("start", "must be a point in (0, 1) or \"stationary\"");
    }
    if (d.keys.count("kernel"))
    {
        config.kernel = normalize_kernel(r.find("kernel"), d.kernel, "kernel");
        config.chain = normalize_chain(r.find("chain"), "chain");
        config.quadrature_order = r.unsigned_integer("quadrature_order", 64, 2, 1024);
    }
    if (d.keys.count("spectrum_route"))
    {
        config.spectrum_route = r.string("spectrum_route", "auto");
        try
        {
            parse_spectrum_route(config.spectrum_route);
        }
        catch (const InvalidArgument& e)
        {
            throw ConfigError("spectrum_route", e.what());
        }
    }
    if (d.keys.count("ustat_route"))
    {
        config.ustat_route = r.string("ustat_route", "auto");
        try
        {
            parse_ustat_route(config.ustat_route);
        }
        catch (const InvalidArgument& e)
        {
            throw ConfigError("ustat_route", e.what());
        }
    }
    if (d.keys.count("permutations"))
        config.permutations = r.unsigned_integer("permutations", 999, 0, 1000000);
    r.finish();

    // Cross-field checks that need both objects.
    if (config.experiment == ExperimentKind::tail)
    {
        const KernelSpec kernel = make_kernel(config.kernel);
        if (!kernel.positive || !kernel.bounded_diag)
            throw ConfigError("kernel", "tail experiment needs a bounded positive kernel");
    }
    if (config.spectrum_route == "factored" && d.keys.count("spectrum_route") &&
        !make_kernel(config.kernel).factorization)
        throw ConfigError("spectrum_route", "kernel has no exact factorization");
    if (config.ustat_route == "factored" && d.keys.count("ustat_route") && !make_kernel(config.kernel).factorization)
        throw ConfigError("ustat_route", "kernel has no exact factorization");
    return config;
}

RunConfig load_config(const std::filesystem::path& path, std::optional<ExperimentKind> expected)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read config '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), expected);
}

json to_json(const RunConfig& config)
{
    json out{{"experiment", to_string(config.experiment)},
             {"master_seed", config.master_seed},
             {"output_dir", config.output_dir}};
    const ExperimentDefaults d = defaults_for(config.experiment);
    if (config.experiment == ExperimentKind::tau)
    {
        out["drift"] = json{{"lambda", config.drift.lambda}, {"b", config.drift.b},
                            {"K", config.drift.K},           {"delta", config.drift.delta},
                            {"V_at_start", config.drift.V_at_start}, {"in_C", config.drift.in_C}};
        return out;
    }
    out["n_grid"] = config.n_grid;
    out["replicates"] = config.replicates;
    out["start"] = config.start ? json(*config.start) : json("stationary");
    if (d.keys.count("t_grid"))
        out["t_grid"] = config.t_grid;
    if (d.keys.count("kernel"))
    {
        out["kernel"] = config.kernel;
        out["chain"] = config.chain;
        out["quadrature_order"] = config.quadrature_order;
    }
    if (d.keys.count("spectrum_route"))
        out["spectrum_route"] = config.spectrum_route;
    if (d.keys.count("ustat_route"))
        out["ustat_route"] = config.ustat_route;
    if (d.keys.count("permutations"))
        out["permutations"] = config.permutations;
    return out;
}

std::string snapshot(const RunConfig& config)
{
    return to_json(config).dump(2) + "\n";
}

KernelSpec make_kernel(const json& kernel)
{
    const std::string family = kernel.at("family").get<std::string>();
    if (family == "zero")
        return zero_kernel();
    if (family == "constant")
        return constant_kernel(kernel.at("c").get<double>());
    if (family == "cosine")
        return cosine_kernel(kernel.at("lambdas").get<std::vector<double>>());
    if (family == "cosine_series")
        return cosine_series_kernel(kernel.at("lambda0").get<double>(), kernel.at("ratio").get<double>());
    if (family == "gaussian")
        return gaussian_kernel(kernel.at("width").get<double>());
    if (family == "polynomial")
        return polynomial_kernel(kernel.at("c").get<double>(), kernel.at("degree").get<unsigned>());
    if (family == "diagonal")
        return diagonal_kernel();
    throw ConfigError("kernel.family", "unknown kernel family '" + family + "'");
}

ChainSpec make_chain(const json& chain)
{
    const std::string family = chain.at("family").get<std::string>();
    const json& minor = chain.at("minorization");
    if (family == "iid")
        return iid_chain(make_law(chain.at("law")), minor.at("delta").get<double>());
    if (family == "refresh")
        return refresh_chain(chain.at("stay_prob").get<double>(), minor.at("delta").get<double>());
    if (family == "metropolis")
    {
        MetropolisOptions options;
        options.target = make_law(chain.at("target"));
        options.step = chain.at("step").get<double>();
        options.delta = minor.at("delta").get<double>();
        options.small_set = {minor.at("small_set")[0].get<double>(), minor.at("small_set")[1].get<double>()};
        options.nu_support = {minor.at("nu_support")[0].get<double>(), minor.at("nu_support")[1].get<double>()};
        return metropolis_chain(options);
    }
    throw ConfigError("chain.family", "unknown chain family '" + family + "'");
}

}  // namespace specmc
