#include "coincidence/case_model.hpp"

#include "coincidence/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace coincidence {

namespace {

using Json = nlohmann::ordered_json;

std::size_t line_of_offset(std::string_view text, std::size_t offset)
{
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

void reject_unknown_keys(const Json& object, std::initializer_list<std::string_view> allowed,
                         const std::string& ward, const std::string& where)
{
    for (const auto& [key, value] : object.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ValidationError(ward, key, "unknown key '" + key + "' in " + where);
    }
}

const Json& require_key(const Json& object, const std::string& key, const std::string& ward, const std::string& where)
{
    auto it = object.find(key);
    if (it == object.end())
        throw ValidationError(ward, key, "missing key '" + key + "' in " + where);
    return *it;
}

std::int64_t read_count(const Json& value, const std::string& key, const std::string& ward)
{
    if (!value.is_number_integer())
        throw ValidationError(ward, key, key + " must be a decimal integer");
    if (value.is_number_unsigned()) {
        const auto u = value.get<std::uint64_t>();
        if (u > static_cast<std::uint64_t>(INT64_MAX))
            throw ValidationError(ward, key, key + " is too large");
        return static_cast<std::int64_t>(u);
    }
    const auto v = value.get<std::int64_t>();
    if (v < 0)
        throw ValidationError(ward, key, key + " must be non-negative");
    return v;
}

std::string read_text(const Json& value, const std::string& key, const std::string& ward)
{
    if (!value.is_string())
        throw ValidationError(ward, key, key + " must be a string");
    return value.get<std::string>();
}

double read_real(const Json& value, const std::string& key, const std::string& ward)
{
    if (!value.is_number())
        throw ValidationError(ward, key, key + " must be a number");
    return value.get<double>();
}

WardRoster read_ward(const Json& object, std::size_t index)
{
    const std::string where = "wards[" + std::to_string(index) + "]";
    if (!object.is_object())
        throw ValidationError("", "wards", where + " must be an object");
    const std::string name = read_text(require_key(object, "name", "", where), "name", "");
    reject_unknown_keys(object,
                        {"name", "total_shifts", "suspect_shifts", "total_incidents", "suspect_incidents",
                         "nurse_count"},
                        name, where);

    WardRoster ward;
    ward.name = name;
    ward.total_shifts = read_count(require_key(object, "total_shifts", name, where), "total_shifts", name);
    ward.suspect_shifts = read_count(require_key(object, "suspect_shifts", name, where), "suspect_shifts", name);
    ward.total_incidents = read_count(require_key(object, "total_incidents", name, where), "total_incidents", name);
    ward.suspect_incidents =
        read_count(require_key(object, "suspect_incidents", name, where), "suspect_incidents", name);
    if (auto it = object.find("nurse_count"); it != object.end())
        ward.nurse_count = read_count(*it, "nurse_count", name);
    return ward;
}

EvidenceItem read_evidence(const Json& object, std::size_t index)
{
    const std::string where = "evidence[" + std::to_string(index) + "]";
    if (!object.is_object())
        throw ValidationError("", "evidence", where + " must be an object");
    reject_unknown_keys(object, {"label", "lr", "provenance"}, "", where);
    EvidenceItem item;
    item.label = read_text(require_key(object, "label", "", where), "label", "");
    item.lr = read_real(require_key(object, "lr", "", where), "lr", "");
    if (auto it = object.find("provenance"); it != object.end())
        item.provenance = read_text(*it, "provenance", "");
    if (!(item.lr > 0.0))
        throw ValidationError("", "lr", where + ": likelihood ratio must be positive");
    return item;
}

NormalRateData read_normal_rate(const Json& object)
{
    if (!object.is_object())
        throw ValidationError("", "normal_rate", "normal_rate must be an object");
    reject_unknown_keys(object, {"extra_shifts", "extra_incidents", "description"}, "", "normal_rate");
    NormalRateData data;
    data.extra_shifts = read_count(require_key(object, "extra_shifts", "", "normal_rate"), "extra_shifts", "");
    data.extra_incidents =
        read_count(require_key(object, "extra_incidents", "", "normal_rate"), "extra_incidents", "");
    if (auto it = object.find("description"); it != object.end())
        data.description = read_text(*it, "description", "");
    return data;
}

} // namespace

void WardRoster::validate() const
{
    auto fail = [&](const char* field, const std::string& message) { throw ValidationError(name, field, message); };
    if (name.empty())
        fail("name", "ward name must not be empty");
    if (total_shifts <= 0)
        fail("total_shifts", "total_shifts must be positive");
    if (suspect_shifts < 0)
        fail("suspect_shifts", "suspect_shifts must be non-negative");
    if (total_incidents < 0)
        fail("total_incidents", "total_incidents must be non-negative");
    if (suspect_incidents < 0)
        fail("suspect_incidents", "suspect_incidents must be non-negative");
    if (suspect_shifts > total_shifts)
        fail("suspect_shifts", "suspect_shifts exceeds total_shifts");
    if (total_incidents > total_shifts)
        fail("total_incidents", "total_incidents exceeds total_shifts");
    if (suspect_incidents > total_incidents)
        fail("suspect_incidents", "suspect_incidents exceeds total_incidents");
    if (suspect_incidents > suspect_shifts)
        fail("suspect_incidents", "suspect_incidents exceeds suspect_shifts");
    if (other_incidents() > other_shifts())
        fail("total_incidents", "incidents outside the suspect's shifts exceed the other shifts");
    if (nurse_count && *nurse_count <= 0)
        fail("nurse_count", "nurse_count must be positive");
}

std::string_view to_string(DataVariant variant)
{
    return variant == DataVariant::original ? "original" : "corrected";
}

DataVariant variant_from_string(std::string_view text)
{
    if (text == "original")
        return DataVariant::original;
    if (text == "corrected")
        return DataVariant::corrected;
    throw ValidationError("", "variant", "variant must be 'original' or 'corrected', got '" + std::string(text) + "'");
}

void NormalRateData::validate() const
{
    if (extra_shifts < 0 || extra_incidents < 0)
        throw ValidationError("", "normal_rate", "normal-rate counts must be non-negative");
    if (extra_incidents > extra_shifts * 10)
        throw ValidationError("", "extra_incidents", "extra_incidents exceeds ten per extra shift");
}

void CaseFile::validate() const
{
    if (wards.empty())
        throw ValidationError("", "wards", "case file needs at least one ward");
    std::set<std::string> seen;
    for (const auto& w : wards) {
        w.validate();
        if (!seen.insert(w.name).second)
            throw ValidationError(w.name, "name", "duplicate ward name");
    }
    for (const auto& e : evidence) {
        if (!(e.lr > 0.0) || !std::isfinite(e.lr))
            throw ValidationError("", "lr", "evidence '" + e.label + "': likelihood ratio must be positive and finite");
    }
    if (prior_probability && !(*prior_probability > 0.0 && *prior_probability < 1.0))
        throw ValidationError("", "prior_probability", "prior_probability must lie strictly between 0 and 1");
    if (normal_rate)
        normal_rate->validate();
}

const WardRoster& CaseFile::ward(std::string_view name) const
{
    auto it = std::find_if(wards.begin(), wards.end(), [&](const WardRoster& w) { return w.name == name; });
    if (it == wards.end())
        throw ValidationError(std::string(name), "name", "no such ward in case '" + case_name + "'");
    return *it;
}

std::vector<std::string> CaseFile::ward_names() const
{
    std::vector<std::string> names;
    for (const auto& w : wards)
        names.push_back(w.name);
    return names;
}

CaseFile parse_case(std::string_view text)
{
    Json root;
    try {
        root = Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what(), line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1));
    }
    if (!root.is_object())
        throw ParseError("case file must be a JSON object", 1);

    reject_unknown_keys(root,
                        {"case_name", "suspect", "variant", "wards", "evidence", "prior_probability", "normal_rate"},
                        "", "case file");

    CaseFile file;
    file.case_name = read_text(require_key(root, "case_name", "", "case file"), "case_name", "");
    file.suspect = read_text(require_key(root, "suspect", "", "case file"), "suspect", "");
    file.variant = variant_from_string(read_text(require_key(root, "variant", "", "case file"), "variant", ""));

    const Json& wards = require_key(root, "wards", "", "case file");
    if (!wards.is_array())
        throw ValidationError("", "wards", "wards must be an array");
    for (std::size_t i = 0; i < wards.size(); ++i)
        file.wards.push_back(read_ward(wards[i], i));

    if (auto it = root.find("evidence"); it != root.end()) {
        if (!it->is_array())
            throw ValidationError("", "evidence", "evidence must be an array");
        for (std::size_t i = 0; i < it->size(); ++i)
            file.evidence.push_back(read_evidence((*it)[i], i));
    }
    if (auto it = root.find("prior_probability"); it != root.end())
        file.prior_probability = read_real(*it, "prior_probability", "");
    if (auto it = root.find("normal_rate"); it != root.end())
        file.normal_rate = read_normal_rate(*it);

    file.validate();
    return file;
}

std::string serialize_case(const CaseFile& file)
{
    Json root;
    root["case_name"] = file.case_name;
    root["suspect"] = file.suspect;
    root["variant"] = std::string(to_string(file.variant));
    root["wards"] = Json::array();
    for (const auto& w : file.wards) {
        Json ward;
        ward["name"] = w.name;
        ward["total_shifts"] = w.total_shifts;
        ward["suspect_shifts"] = w.suspect_shifts;
        ward["total_incidents"] = w.total_incidents;
        ward["suspect_incidents"] = w.suspect_incidents;
        if (w.nurse_count)
            ward["nurse_count"] = *w.nurse_count;
        root["wards"].push_back(std::move(ward));
    }
    if (!file.evidence.empty()) {
        root["evidence"] = Json::array();
        for (const auto& e : file.evidence)
            root["evidence"].push_back(Json{{"label", e.label}, {"lr", e.lr}, {"provenance", e.provenance}});
    }
    if (file.prior_probability)
        root["prior_probability"] = *file.prior_probability;
    if (file.normal_rate) {
        root["normal_rate"] = Json{{"extra_shifts", file.normal_rate->extra_shifts},
                                   {"extra_incidents", file.normal_rate->extra_incidents},
                                   {"description", file.normal_rate->description}};
    }
    return root.dump(2) + "\n";
}

CaseFile load_case(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open case file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_case(buffer.str());
}

CaseFile builtin_paper_case(DataVariant variant)
{
    CaseFile file;
    file.case_name = "Dutch nurse case, JKZ and RKZ wards";
    file.suspect = "Lucia de B.";
    file.variant = variant;
    file.wards = {
        {"JKZ", 1029, 142, 8, 8, 27},
        {"RKZ-41", 336, variant == DataVariant::original ? 1 : 3, 5, 1, std::nullopt},
        {"RKZ-42", 339, 58, 14, 5, std::nullopt},
    };
    file.evidence = published_case_evidence();
    file.prior_probability = kPublishedPriorProbability;
    return file;
}

WardRoster pool_wards(const CaseFile& file, const std::vector<std::string>& names)
{
    if (names.empty())
        throw ValidationError("", "wards", "pooling needs at least one ward name");
    std::set<std::string> seen;
    WardRoster pooled;
    for (const auto& name : names) {
        if (!seen.insert(name).second)
            throw ValidationError(name, "name", "ward listed twice in pool");
        const WardRoster& w = file.ward(name);
        pooled.name += (pooled.name.empty() ? "" : "+") + w.name;
        pooled.total_shifts += w.total_shifts;
        pooled.suspect_shifts += w.suspect_shifts;
        pooled.total_incidents += w.total_incidents;
        pooled.suspect_incidents += w.suspect_incidents;
    }
    if (names.size() == 1)
        pooled.nurse_count = file.ward(names.front()).nurse_count;
    return pooled;
}

} // namespace coincidence
