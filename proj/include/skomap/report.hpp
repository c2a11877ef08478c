#pragma once

// JSON and long-format CSV output for reports and experiments. Non-finite
// numbers become the strings "inf" / "-inf" and NaN becomes null.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "skomap/cusp.hpp"
#include "skomap/suites.hpp"
#include "skomap/variation.hpp"

namespace skomap {

nlohmann::ordered_json json_number(double v);
nlohmann::ordered_json to_json(const ConditionReport& r);
nlohmann::ordered_json to_json(const SuiteResult& r);
nlohmann::ordered_json to_json(const VariationSeries& s, const std::string& parameter_name);
nlohmann::ordered_json to_json(const VariationReport& r, const std::string& parameter_name);
nlohmann::ordered_json to_json(const CombSequence& seq);

// {"<parameter>": "<verdict>", ...} keyed by the shortest decimal form.
nlohmann::ordered_json verdict_map(const VariationReport& r);
std::string parameter_key(double v);

// Header `<tag_name>,<parameter_name>,seed,resolution,variation[,start,end,height]`;
// the tag column is omitted when tag_name is empty, excursion columns when
// with_excursion is false. Values use 17 significant digits.
void write_rows_header(std::ostream& out, const std::string& tag_name, const std::string& parameter_name,
                       bool with_excursion);
void write_rows(std::ostream& out, const VariationReport& r, const std::string& tag, bool with_excursion);

// Writes text, creating parent directories. UsageError on failure.
void write_text_file(const std::string& filename, const std::string& text);

}  // namespace skomap
