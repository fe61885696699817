#include "auditkit/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "auditkit/error.hpp"
#include "auditkit/rng.hpp"

namespace auditkit {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(const std::string& s) {
    const std::string t = trim(s);
    if (t.empty()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace

double median(std::vector<double> values) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

Dataset load_csv(const std::string& path, const FeatureSchema& schema) {
    std::ifstream in(path);
    if (!in) fail("DataError", "cannot open dataset file: " + path);

    std::string header_line;
    if (!std::getline(in, header_line)) fail("EmptyDataset", "file has no header row: " + path);
    const std::vector<std::string> header = split_line(header_line);

    auto column_of = [&](const std::string& name) -> std::size_t {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (trim(header[i]) == name) return i;
        }
        fail("MissingColumn", "column '" + name + "' not found in " + path);
    };

    std::vector<std::size_t> feature_cols;
    feature_cols.reserve(schema.feature_names.size());
    for (const auto& name : schema.feature_names) feature_cols.push_back(column_of(name));
    const std::size_t target_col = column_of(schema.target_column);
    std::optional<std::size_t> group_col;
    if (schema.group_column) group_col = column_of(*schema.group_column);
    std::optional<std::size_t> sensitive_col;
    if (schema.sensitive_column) sensitive_col = column_of(*schema.sensitive_column);

    struct RawRow {
        std::vector<std::string> feature_cells;
        double target = 0.0;
        std::string group;
        std::string sensitive;
    };
    std::vector<RawRow> raw;
    std::size_t dropped = 0;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_line(line);
        if (cells.size() != header.size()) {
            fail("ParseError", "row " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                                   " fields, expected " + std::to_string(header.size()));
        }
        RawRow row;
        bool usable = true;
        const auto target_value = parse_number(cells[target_col]);
        if (!target_value) usable = false;
        for (std::size_t f = 0; f < feature_cols.size() && usable; ++f) {
            const std::string cell = trim(cells[feature_cols[f]]);
            if (cell.empty()) usable = false;
            if (schema.kind_of(f) == FeatureKind::continuous && !parse_number(cell)) usable = false;
        }
        if (group_col && trim(cells[*group_col]).empty()) usable = false;
        if (sensitive_col && trim(cells[*sensitive_col]).empty()) usable = false;
        if (!usable) {
            ++dropped;
            continue;
        }
        row.target = *target_value;
        for (const std::size_t c : feature_cols) row.feature_cells.push_back(trim(cells[c]));
        if (group_col) row.group = trim(cells[*group_col]);
        if (sensitive_col) row.sensitive = trim(cells[*sensitive_col]);
        raw.push_back(std::move(row));
    }
    if (raw.empty()) fail("EmptyDataset", "no usable rows in " + path);

    Dataset d;
    d.schema = schema;
    d.dropped_rows = dropped;
    d.X = Matrix(raw.size(), schema.feature_names.size());
    d.y.resize(raw.size());

    // Label encodings are sorted lexicographically so reloading is stable.
    for (std::size_t f = 0; f < schema.feature_names.size(); ++f) {
        if (schema.kind_of(f) != FeatureKind::categorical) continue;
        std::set<std::string> values;
        for (const auto& row : raw) values.insert(row.feature_cells[f]);
        std::map<std::string, int> mapping;
        int code = 0;
        for (const auto& v : values) mapping[v] = code++;
        d.category_maps[schema.feature_names[f]] = std::move(mapping);
    }

    for (std::size_t i = 0; i < raw.size(); ++i) {
        for (std::size_t f = 0; f < schema.feature_names.size(); ++f) {
            const std::string& cell = raw[i].feature_cells[f];
            if (schema.kind_of(f) == FeatureKind::categorical) {
                d.X(i, f) = d.category_maps[schema.feature_names[f]].at(cell);
            } else {
                d.X(i, f) = *parse_number(cell);
            }
        }
        const bool positive = schema.target_rule.direction == TargetRule::Direction::greater
                                  ? raw[i].target > schema.target_rule.threshold
                                  : raw[i].target < schema.target_rule.threshold;
        d.y[i] = positive ? 1 : 0;
    }

    if (group_col) {
        std::set<std::string> names;
        for (const auto& row : raw) names.insert(row.group);
        d.group_names.assign(names.begin(), names.end());
        std::map<std::string, int> encode;
        for (std::size_t g = 0; g < d.group_names.size(); ++g) encode[d.group_names[g]] = static_cast<int>(g);
        std::vector<int> labels(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) labels[i] = encode[raw[i].group];
        d.groups = std::move(labels);
    }
    if (sensitive_col) {
        std::vector<int> s(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) {
            s[i] = raw[i].sensitive == schema.sensitive_privileged_value ? 1 : 0;
        }
        d.sensitive = std::move(s);
    }
    return d;
}

Dataset take_rows(const Dataset& d, const std::vector<std::size_t>& rows) {
    Dataset out;
    out.schema = d.schema;
    out.group_names = d.group_names;
    out.category_maps = d.category_maps;
    out.X = Matrix(rows.size(), d.X.cols);
    out.y.resize(rows.size());
    if (d.groups) out.groups = std::vector<int>(rows.size());
    if (d.sensitive) out.sensitive = std::vector<int>(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t r = rows[i];
        for (std::size_t c = 0; c < d.X.cols; ++c) out.X(i, c) = d.X(r, c);
        out.y[i] = d.y[r];
        if (d.groups) (*out.groups)[i] = (*d.groups)[r];
        if (d.sensitive) (*out.sensitive)[i] = (*d.sensitive)[r];
    }
    return out;
}

TrainTestSplit split(const Dataset& d, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        fail("ConfigError", "test_fraction must be in (0,1)");
    }
    if (d.n() == 0) fail("EmptyDataset", "cannot split an empty dataset");

    const std::size_t n = d.n();
    const auto total_test = static_cast<std::size_t>(
        std::llround(test_fraction * static_cast<double>(n)));

    // Bucket rows by group (single bucket when no groups).
    std::vector<std::vector<std::size_t>> buckets;
    if (d.groups) {
        buckets.resize(d.group_names.size());
        for (std::size_t i = 0; i < n; ++i) buckets[static_cast<std::size_t>((*d.groups)[i])].push_back(i);
        for (std::size_t g = 0; g < buckets.size(); ++g) {
            if (buckets[g].size() < 2) {
                fail("GroupTooSmall", "group '" + d.group_names[g] + "' has fewer than 2 rows");
            }
        }
    } else {
        buckets.emplace_back(n);
        std::iota(buckets[0].begin(), buckets[0].end(), std::size_t{0});
    }

    // Largest-remainder apportionment of the test budget across buckets, with
    // every group keeping at least one training row.
    std::vector<std::size_t> quota(buckets.size(), 0);
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t g = 0; g < buckets.size(); ++g) {
        const double exact = test_fraction * static_cast<double>(buckets[g].size());
        quota[g] = static_cast<std::size_t>(std::floor(exact));
        quota[g] = std::min(quota[g], buckets[g].size() - 1);
        assigned += quota[g];
        remainders.emplace_back(exact - std::floor(exact), g);
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::size_t idx = 0;
    while (assigned < total_test && idx < remainders.size()) {
        const std::size_t g = remainders[idx++].second;
        if (quota[g] + 1 <= buckets[g].size() - 1) {
            ++quota[g];
            ++assigned;
        }
    }

    Rng rng(derive_seed(seed, "train_test_split"));
    std::vector<std::size_t> test_idx, train_idx;
    for (std::size_t g = 0; g < buckets.size(); ++g) {
        auto& rows = buckets[g];
        rng.shuffle(rows);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            (i < quota[g] ? test_idx : train_idx).push_back(rows[i]);
        }
    }
    std::sort(test_idx.begin(), test_idx.end());
    std::sort(train_idx.begin(), train_idx.end());

    TrainTestSplit s;
    s.seed = seed;
    s.test_fraction = test_fraction;
    s.train = take_rows(d, train_idx);
    s.test = take_rows(d, test_idx);
    s.train_indices = std::move(train_idx);
    s.test_indices = std::move(test_idx);
    return s;
}

std::vector<FeatureStats> feature_stats(const Dataset& d) {
    if (d.n() == 0) fail("EmptyDataset", "feature_stats of an empty dataset");
    std::vector<FeatureStats> out(d.n_features());
    for (std::size_t f = 0; f < d.n_features(); ++f) {
        std::vector<double> col(d.n());
        for (std::size_t i = 0; i < d.n(); ++i) col[i] = d.X(i, f);
        FeatureStats st;
        st.mean = mean(col);
        st.std_dev = std::sqrt(population_variance(col));
        st.min = *std::min_element(col.begin(), col.end());
        st.max = *std::max_element(col.begin(), col.end());
        const double med = median(col);
        double acc = 0.0;
        for (const double v : col) acc += std::abs(v - med);
        st.mad = acc / static_cast<double>(col.size());
        out[f] = st;
    }
    return out;
}

}  // namespace auditkit
