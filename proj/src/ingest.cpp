#include "guppy/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

#include "json.hpp"

namespace guppy {

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char ch : text) {
        if (ch == '\n') {
            if (!cur.empty() && cur.back() == '\r') cur.pop_back();
            lines.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty() && cur.back() == '\r') cur.pop_back();
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

std::vector<std::string> split_fields(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Accepts both decimal marks: "0,118" reads as 0.118.
double parse_number(const std::string& raw, const std::string& context) {
    std::string s = trim(raw);
    std::replace(s.begin(), s.end(), ',', '.');
    if (s.empty())
        throw Error(errc::parse_error, "empty numeric field in " + context);
    const char* begin = s.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + s.size())
        throw Error(errc::parse_error, "bad numeric field \"" + raw + "\" in " + context);
    return v;
}

char detect_separator(const std::string& header) {
    return header.find(';') != std::string::npos ? ';' : ',';
}

void check_entry_range(const std::string& name, const char* column, double v) {
    if (!(v >= 0.0 && v <= 1.0))
        throw Error(errc::validation_error,
                    "exemplar \"" + name + "\": " + column + " = " + std::to_string(v) +
                        " outside [0, 1]");
}

ProbabilityTable parse_table_csv(const std::string& text) {
    std::vector<std::string> lines = split_lines(text);
    if (lines.empty()) throw Error(errc::parse_error, "empty csv input");
    char sep = detect_separator(lines[0]);
    std::vector<std::string> header = split_fields(lines[0], sep);
    if (header.size() != 4 || lower(trim(header[0])) != "exemplar" ||
        lower(trim(header[1])) != "mu_a" || lower(trim(header[2])) != "mu_b" ||
        lower(trim(header[3])) != "mu_ab")
        throw Error(errc::parse_error, "expected header exemplar,mu_a,mu_b,mu_ab");

    ProbabilityTable table;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        std::vector<std::string> fields = split_fields(lines[i], sep);
        if (fields.size() != 4)
            throw Error(errc::parse_error,
                        "row " + std::to_string(i + 1) + ": expected 4 fields, got " +
                            std::to_string(fields.size()));
        std::string context = "row " + std::to_string(i + 1);
        table.exemplar_names.push_back(trim(fields[0]));
        table.mu_a.push_back(parse_number(fields[1], context));
        table.mu_b.push_back(parse_number(fields[2], context));
        table.mu_ab.push_back(parse_number(fields[3], context));
    }
    return table;
}

double json_number(const nlohmann::json& v, const std::string& context) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return parse_number(v.get<std::string>(), context);
    throw Error(errc::parse_error, "non-numeric value in " + context);
}

ProbabilityTable parse_table_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw Error(errc::parse_error, "malformed json");
    if (!doc.is_array()) throw Error(errc::parse_error, "expected a json array of rows");
    ProbabilityTable table;
    std::size_t row = 0;
    for (const auto& item : doc) {
        ++row;
        std::string context = "row " + std::to_string(row);
        if (!item.is_object() || !item.contains("exemplar") || !item.contains("mu_a") ||
            !item.contains("mu_b") || !item.contains("mu_ab"))
            throw Error(errc::parse_error,
                        context + ": expected keys exemplar, mu_a, mu_b, mu_ab");
        table.exemplar_names.push_back(item["exemplar"].get<std::string>());
        table.mu_a.push_back(json_number(item["mu_a"], context + " mu_a"));
        table.mu_b.push_back(json_number(item["mu_b"], context + " mu_b"));
        table.mu_ab.push_back(json_number(item["mu_ab"], context + " mu_ab"));
    }
    return table;
}

std::string format_shortest(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace

void validate_table(const ProbabilityTable& table, double column_tol) {
    std::size_t n = table.size();
    if (table.mu_a.size() != n || table.mu_b.size() != n || table.mu_ab.size() != n)
        throw Error(errc::validation_error, "column lengths disagree");
    if (n < 2) throw Error(errc::validation_error, "need at least 2 exemplars");
    double sum_a = 0, sum_b = 0, sum_ab = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const std::string& name = table.exemplar_names[k];
        check_entry_range(name, "mu_a", table.mu_a[k]);
        check_entry_range(name, "mu_b", table.mu_b[k]);
        check_entry_range(name, "mu_ab", table.mu_ab[k]);
        sum_a += table.mu_a[k];
        sum_b += table.mu_b[k];
        sum_ab += table.mu_ab[k];
    }
    auto check_sum = [column_tol](const char* column, double sum) {
        if (std::abs(sum - 1.0) > column_tol + 1e-9)
            throw Error(errc::validation_error,
                        std::string(column) + " column sums to " + std::to_string(sum) +
                            ", expected 1 within " + std::to_string(column_tol));
    };
    check_sum("mu_a", sum_a);
    check_sum("mu_b", sum_b);
    check_sum("mu_ab", sum_ab);
}

ProbabilityTable parse_table(const std::string& text, TableFormat format, double column_tol) {
    ProbabilityTable table =
        format == TableFormat::csv ? parse_table_csv(text) : parse_table_json(text);
    validate_table(table, column_tol);
    return table;
}

RawTypicalityTable parse_raw_typicality_csv(const std::string& text) {
    std::vector<std::string> lines = split_lines(text);
    if (lines.empty()) throw Error(errc::parse_error, "empty csv input");
    char sep = detect_separator(lines[0]);
    std::vector<std::string> header = split_fields(lines[0], sep);
    if (header.size() != 4 || lower(trim(header[0])) != "participant" ||
        lower(trim(header[1])) != "concept" || lower(trim(header[2])) != "exemplar" ||
        lower(trim(header[3])) != "rating")
        throw Error(errc::parse_error, "expected header participant,concept,exemplar,rating");

    RawTypicalityTable raw;
    std::map<std::string, std::size_t> participant_index;
    std::map<std::string, std::size_t> exemplar_index;
    // seen[p][c][k] guards against duplicate and missing combinations
    std::vector<std::array<std::vector<bool>, 3>> seen;

    auto concept_index = [](const std::string& c) -> std::size_t {
        if (c == "A") return 0;
        if (c == "B") return 1;
        if (c == "AB") return 2;
        throw Error(errc::parse_error, "concept \"" + c + "\" not in {A, B, AB}");
    };

    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        std::vector<std::string> fields = split_fields(lines[i], sep);
        if (fields.size() != 4)
            throw Error(errc::parse_error,
                        "row " + std::to_string(i + 1) + ": expected 4 fields, got " +
                            std::to_string(fields.size()));
        std::string participant = trim(fields[0]);
        std::size_t c = concept_index(trim(fields[1]));
        std::string exemplar = trim(fields[2]);
        double rating = parse_number(fields[3], "row " + std::to_string(i + 1));
        if (rating < -3.0 || rating > 3.0)
            throw Error(errc::validation_error,
                        "participant \"" + participant + "\", exemplar \"" + exemplar +
                            "\": rating " + std::to_string(rating) + " outside [-3, +3]");

        auto [eit, enew] = exemplar_index.try_emplace(exemplar, raw.exemplar_names.size());
        if (enew) {
            raw.exemplar_names.push_back(exemplar);
            for (auto& blocks : seen)
                for (auto& block : blocks) block.push_back(false);
            for (auto& blocks : raw.ratings)
                for (auto& block : blocks) block.push_back(0.0);
        }
        auto [pit, pnew] = participant_index.try_emplace(participant, raw.participant_ids.size());
        if (pnew) {
            raw.participant_ids.push_back(participant);
            std::size_t ecount = raw.exemplar_names.size();
            raw.ratings.push_back({std::vector<double>(ecount, 0.0),
                                   std::vector<double>(ecount, 0.0),
                                   std::vector<double>(ecount, 0.0)});
            seen.push_back({std::vector<bool>(ecount, false), std::vector<bool>(ecount, false),
                            std::vector<bool>(ecount, false)});
        }
        std::size_t p = pit->second;
        std::size_t k = eit->second;
        if (seen[p][c][k])
            throw Error(errc::parse_error, "duplicate rating: participant \"" + participant +
                                               "\", concept " + trim(fields[1]) +
                                               ", exemplar \"" + exemplar + "\"");
        seen[p][c][k] = true;
        raw.ratings[p][c][k] = rating;
    }

    if (raw.exemplar_names.empty())
        throw Error(errc::parse_error, "no data rows");
    for (std::size_t p = 0; p < raw.participant_count(); ++p)
        for (std::size_t c = 0; c < 3; ++c)
            for (std::size_t k = 0; k < raw.exemplar_count(); ++k)
                if (!seen[p][c][k])
                    throw Error(errc::validation_error,
                                "participant \"" + raw.participant_ids[p] +
                                    "\" is missing concept " +
                                    (c == 0 ? "A" : c == 1 ? "B" : "AB") +
                                    " for exemplar \"" + raw.exemplar_names[k] + "\"");
    return raw;
}

RawTypicalityTable rescale_typicality(const RawTypicalityTable& raw) {
    RawTypicalityTable out = raw;
    for (auto& participant : out.ratings)
        for (auto& block : participant)
            for (double& r : block) r += 3.0;
    return out;
}

ProbabilityTable normalize_and_aggregate(const RawTypicalityTable& raw) {
    std::size_t n = raw.exemplar_count();
    std::size_t participants = raw.participant_count();
    if (n == 0 || participants == 0)
        throw Error(errc::validation_error, "empty typicality table");

    ProbabilityTable table;
    table.exemplar_names = raw.exemplar_names;
    std::array<std::vector<double>*, 3> columns = {&table.mu_a, &table.mu_b, &table.mu_ab};
    for (auto* col : columns) col->assign(n, 0.0);

    static const char* concept_names[3] = {"A", "B", "AB"};
    for (std::size_t p = 0; p < participants; ++p) {
        for (std::size_t c = 0; c < 3; ++c) {
            const std::vector<double>& block = raw.ratings[p][c];
            double sum = 0;
            for (double r : block) {
                if (r < 0)
                    throw Error(errc::validation_error,
                                "participant \"" + raw.participant_ids[p] +
                                    "\" has a negative rating; rescale first");
                sum += r;
            }
            if (sum == 0)
                throw Error(errc::degenerate_participant,
                            "participant \"" + raw.participant_ids[p] +
                                "\" rated every exemplar 0 for concept " + concept_names[c]);
            for (std::size_t k = 0; k < n; ++k)
                (*columns[c])[k] += block[k] / sum / static_cast<double>(participants);
        }
    }
    return table;
}

std::string table_to_csv(const ProbabilityTable& table, bool decimal_comma) {
    char sep = decimal_comma ? ';' : ',';
    std::ostringstream out;
    out << "exemplar" << sep << "mu_a" << sep << "mu_b" << sep << "mu_ab" << "\n";
    for (std::size_t k = 0; k < table.size(); ++k) {
        std::array<std::string, 3> nums = {format_shortest(table.mu_a[k]),
                                           format_shortest(table.mu_b[k]),
                                           format_shortest(table.mu_ab[k])};
        if (decimal_comma)
            for (auto& s : nums) std::replace(s.begin(), s.end(), '.', ',');
        out << table.exemplar_names[k] << sep << nums[0] << sep << nums[1] << sep << nums[2]
            << "\n";
    }
    return out.str();
}

std::string table_to_json(const ProbabilityTable& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t k = 0; k < table.size(); ++k)
        rows.push_back({{"exemplar", table.exemplar_names[k]},
                        {"mu_a", table.mu_a[k]},
                        {"mu_b", table.mu_b[k]},
                        {"mu_ab", table.mu_ab[k]}});
    return rows.dump(2) + "\n";
}

} // namespace guppy
