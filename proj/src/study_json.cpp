#include "idr/study_json.hpp"

#include <fstream>
#include <sstream>

#include "idr/error.hpp"
#include "json.hpp"

namespace idr {

using json = nlohmann::ordered_json;

namespace {

template <class T>
json opt(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> get_opt(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

stats::Method parse_method(const std::string& s) {
    for (auto m : {stats::Method::Exact, stats::Method::NormalApproximation, stats::Method::Subsampled}) {
        if (s == stats::to_string(m)) return m;
    }
    throw Error(ErrorCode::MalformedRow, "unknown test method '" + s + "'");
}

json to_json(const stats::TestResult& t) {
    return {{"test", t.test_name}, {"statistic", t.statistic}, {"p_value", t.p_value},
            {"method", stats::to_string(t.method)}, {"n1", t.n1}, {"n2", t.n2},
            {"significant", t.significant}, {"warnings", t.warnings}};
}

stats::TestResult test_from_json(const json& j) {
    stats::TestResult t;
    t.test_name = j.at("test").get<std::string>();
    t.statistic = j.at("statistic").get<double>();
    t.p_value = j.at("p_value").get<double>();
    t.method = parse_method(j.at("method").get<std::string>());
    t.n1 = j.at("n1").get<std::size_t>();
    t.n2 = j.at("n2").get<std::size_t>();
    t.significant = j.at("significant").get<bool>();
    t.warnings = j.at("warnings").get<std::vector<std::string>>();
    return t;
}

json to_json(const Normality& n) {
    return {{"result", n.result ? to_json(*n.result) : json(nullptr)}, {"error", n.error}};
}

Normality normality_from_json(const json& j) {
    Normality n;
    if (!j.at("result").is_null()) n.result = test_from_json(j.at("result"));
    n.error = j.at("error").get<std::string>();
    return n;
}

json to_json(const Scope& s) { return {{"first_field", s.first_field}, {"second_field", s.second_field}}; }

Scope scope_from_json(const json& j) {
    return {j.at("first_field").get<std::string>(), j.at("second_field").get<std::string>()};
}

json to_json(const SetCounts& c) {
    return {{"set1", c.set1}, {"set2", c.set2}, {"set3", c.set3}, {"union12", c.union12}, {"total", c.total}};
}

SetCounts counts_from_json(const json& j) {
    return {j.at("set1").get<std::size_t>(), j.at("set2").get<std::size_t>(), j.at("set3").get<std::size_t>(),
            j.at("union12").get<std::size_t>(), j.at("total").get<std::size_t>()};
}

json to_json(const AreaRow& r) {
    json tallies = json::object();
    for (const auto& [ind, t] : r.tallies) {
        tallies[to_string(ind)] = {{"significant", t.significant}, {"positive", t.positive}, {"negative", t.negative}};
    }
    return {{"area_code", r.area_code}, {"area_name", r.area_name}, {"scopes", r.scopes}, {"tallies", tallies}};
}

AreaRow area_row_from_json(const json& j) {
    AreaRow r;
    r.area_code = j.at("area_code").get<std::string>();
    r.area_name = j.at("area_name").get<std::string>();
    r.scopes = j.at("scopes").get<std::size_t>();
    for (const auto& [key, t] : j.at("tallies").items()) {
        r.tallies[parse_indicator(key)] = {t.at("significant").get<std::size_t>(), t.at("positive").get<std::size_t>(),
                                           t.at("negative").get<std::size_t>()};
    }
    return r;
}

}  // namespace

std::string study_to_json(const StudyResult& r) {
    json j;
    j["schema"] = "idr-study/1";

    const auto& c = r.config;
    json indicators = json::array();
    for (auto i : c.indicators) indicators.push_back(to_string(i));
    json config = {{"threshold", c.threshold}, {"min_first_count", c.min_first_count}, {"alpha", c.alpha},
                   {"min_set_size", c.min_set_size}, {"indicators", indicators}, {"seed", c.seed}};
    if (c.pair_override) {
        json pairs = json::array();
        for (const auto& p : *c.pair_override) pairs.push_back({p.first, p.second});
        config["pair_override"] = pairs;
    } else {
        config["pair_override"] = nullptr;
    }
    j["config"] = config;

    json pairs = json::array();
    for (const auto& p : r.pairs) {
        pairs.push_back({{"first_field", p.first_field}, {"second_field", p.second_field}, {"co_count", p.co_count},
                         {"first_count", p.first_count}, {"degree", p.degree}});
    }
    j["pairs"] = pairs;

    auto scope_counts = [](const std::vector<ScopeCounts>& v) {
        json a = json::array();
        for (const auto& sc : v) {
            a.push_back({{"scope", to_json(sc.scope)}, {"counts", to_json(sc.counts)},
                         {"single_author", sc.single_author}});
        }
        return a;
    };
    j["pair_counts"] = scope_counts(r.pair_counts);
    j["field_counts"] = scope_counts(r.field_counts);
    j["totals"] = {{"summed", to_json(r.totals.summed)}, {"distinct", to_json(r.totals.distinct)}};

    json comps = json::array();
    for (const auto& cmp : r.comparisons) {
        comps.push_back({
            {"scope", to_json(cmp.scope)},
            {"contrast", to_string(cmp.contrast)},
            {"indicator", to_string(cmp.indicator)},
            {"status", cmp.status == ComparisonStatus::Tested ? "tested" : "insufficient-data"},
            {"n1", cmp.n1},
            {"n2", cmp.n2},
            {"normality1", to_json(cmp.normality1)},
            {"normality2", to_json(cmp.normality2)},
            {"u", opt(cmp.u)},
            {"p", opt(cmp.p)},
            {"method", cmp.method ? json(stats::to_string(*cmp.method)) : json(nullptr)},
            {"median1", opt(cmp.median1)},
            {"median2", opt(cmp.median2)},
            {"delta_median", opt(cmp.delta_median)},
            {"significant", cmp.significant},
        });
    }
    j["comparisons"] = comps;

    json areas = json::array();
    for (const auto& t : r.areas) {
        json rows = json::array();
        for (const auto& row : t.rows) rows.push_back(to_json(row));
        areas.push_back({{"contrast", to_string(t.contrast)}, {"rows", rows}, {"total", to_json(t.total)}});
    }
    j["areas"] = areas;
    j["field_area"] = r.field_area;
    j["area_names"] = r.area_names;
    j["warnings"] = r.warnings;
    return j.dump(2) + "\n";
}

StudyResult study_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedRow, std::string("study JSON: ") + e.what());
    }
    try {
        if (j.value("schema", "") != "idr-study/1") {
            throw Error(ErrorCode::MalformedRow, "study JSON: unsupported schema");
        }
        StudyResult r;
        const auto& cj = j.at("config");
        r.config.threshold = cj.at("threshold").get<double>();
        r.config.min_first_count = cj.at("min_first_count").get<std::size_t>();
        r.config.alpha = cj.at("alpha").get<double>();
        r.config.min_set_size = cj.at("min_set_size").get<std::size_t>();
        r.config.indicators.clear();
        for (const auto& i : cj.at("indicators")) r.config.indicators.push_back(parse_indicator(i.get<std::string>()));
        r.config.seed = cj.at("seed").get<std::uint64_t>();
        if (!cj.at("pair_override").is_null()) {
            std::vector<FieldPair> pairs;
            for (const auto& p : cj.at("pair_override")) pairs.push_back({p.at(0).get<std::string>(), p.at(1).get<std::string>()});
            r.config.pair_override = std::move(pairs);
        }

        for (const auto& p : j.at("pairs")) {
            r.pairs.push_back({p.at("first_field").get<std::string>(), p.at("second_field").get<std::string>(),
                               p.at("co_count").get<std::size_t>(), p.at("first_count").get<std::size_t>(),
                               p.at("degree").get<double>()});
        }
        auto scope_counts = [](const json& a) {
            std::vector<ScopeCounts> v;
            for (const auto& sc : a) {
                v.push_back({scope_from_json(sc.at("scope")), counts_from_json(sc.at("counts")),
                             sc.at("single_author").get<std::size_t>()});
            }
            return v;
        };
        r.pair_counts = scope_counts(j.at("pair_counts"));
        r.field_counts = scope_counts(j.at("field_counts"));
        r.totals.summed = counts_from_json(j.at("totals").at("summed"));
        r.totals.distinct = counts_from_json(j.at("totals").at("distinct"));

        for (const auto& cj2 : j.at("comparisons")) {
            Comparison c;
            c.scope = scope_from_json(cj2.at("scope"));
            c.contrast = parse_contrast(cj2.at("contrast").get<std::string>());
            c.indicator = parse_indicator(cj2.at("indicator").get<std::string>());
            c.status = cj2.at("status").get<std::string>() == "tested" ? ComparisonStatus::Tested
                                                                       : ComparisonStatus::InsufficientData;
            c.n1 = cj2.at("n1").get<std::size_t>();
            c.n2 = cj2.at("n2").get<std::size_t>();
            c.normality1 = normality_from_json(cj2.at("normality1"));
            c.normality2 = normality_from_json(cj2.at("normality2"));
            c.u = get_opt<double>(cj2, "u");
            c.p = get_opt<double>(cj2, "p");
            if (auto m = get_opt<std::string>(cj2, "method")) c.method = parse_method(*m);
            c.median1 = get_opt<double>(cj2, "median1");
            c.median2 = get_opt<double>(cj2, "median2");
            c.delta_median = get_opt<double>(cj2, "delta_median");
            c.significant = cj2.at("significant").get<bool>();
            r.comparisons.push_back(std::move(c));
        }
        for (const auto& t : j.at("areas")) {
            AreaTable table;
            table.contrast = parse_contrast(t.at("contrast").get<std::string>());
            for (const auto& row : t.at("rows")) table.rows.push_back(area_row_from_json(row));
            table.total = area_row_from_json(t.at("total"));
            r.areas.push_back(std::move(table));
        }
        r.field_area = j.at("field_area").get<std::map<std::string, std::string>>();
        r.area_names = j.at("area_names").get<std::map<std::string, std::string>>();
        r.warnings = j.at("warnings").get<std::vector<std::string>>();
        return r;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedRow, std::string("study JSON: ") + e.what());
    }
}

void write_study_json(const StudyResult& result, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    out << study_to_json(result);
    if (!out) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

StudyResult read_study_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return study_from_json(buf.str());
}

}  // namespace idr
