#pragma once

/**
 * @file io.hpp
 * @brief JSON encodings of every library value.
 *
 * Rationals are written as [numerator, denominator] in lowest terms; a bare
 * integer is accepted on input. Objects use sorted keys, so emitting a parsed
 * value reproduces the canonical text.
 */

#include "coarsefield/block.hpp"
#include "coarsefield/field.hpp"
#include "coarsefield/grid.hpp"
#include "coarsefield/metric.hpp"
#include "coarsefield/poset.hpp"
#include "coarsefield/roe.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

namespace coarsefield::io {

using nlohmann::json;

json read_json_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it into place.
void write_json_atomic(const std::filesystem::path& path, const json& value);
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

json to_json(const Rational& q);
Rational rational_from_json(const json& j);
json to_json(const ComplexRational& z);  ///< rational when real, else {"re","im"}
ComplexRational complex_from_json(const json& j);

json to_json(const ExactMatrix& m);
ExactMatrix exact_matrix_from_json(const json& j);
json to_json(const ComplexMatrix& m);  ///< entries as numbers or [re, im]
ComplexMatrix complex_matrix_from_json(const json& j);

json to_json(const FiniteMetricSpace& s);
FiniteMetricSpace space_from_json(const json& j);
/// A file path (relative to base) or an inline object.
FiniteMetricSpace space_ref_from_json(const json& j, const std::filesystem::path& base);

json to_json(const ValidationReport& r);

json to_json(const GluedMetric& d);
GluedMetric glue_from_json(const json& j, const std::filesystem::path& base = {});
/// Midpoints are written as ids of the middle space.
json to_json(const Composition& c, const FiniteMetricSpace& middle);

json to_json(const ControlFunction& f);
ControlFunction control_from_json(const json& j);
json to_json(const CoarseComparison& c);

json to_json(const FinitePoset& p);
FinitePoset poset_from_json(const json& j);
json to_json(const FinitePoset& p, const ClopenSet& s);
/// Element ids to a bit vector.
Bits members_from_json(const FinitePoset& p, const json& j);
json to_json(const Spectrum& s);

json to_json(const ExactOperator& op);
ExactOperator operator_from_json(const json& j, const std::filesystem::path& base = {});
json to_json(const PartialTranslation& t, const FiniteMetricSpace& domain,
             const FiniteMetricSpace& codomain);
PartialTranslation translation_from_json(const json& j, const FiniteMetricSpace& domain,
                                         const FiniteMetricSpace& codomain);
json to_json(const Decomposition<ComplexRational>& d, const FiniteMetricSpace& domain,
             const FiniteMetricSpace& codomain);
json to_json(const Factorization& f, const FiniteMetricSpace& middle);

json to_json(const TroFamily& f);
TroFamily family_from_json(const json& j);
json to_json(const PosetFieldElement& m, const FinitePoset& p);
PosetFieldElement field_element_from_json(const json& j, const TroFamily& family);
json to_json(const AxiomReport& r);

json to_json(const GridField& f);
GridField grid_field_from_json(const json& j);
json to_json(const GridInterval& i);

json to_json(const BlockClassMatrix& m);
BlockClassMatrix block_from_json(const json& j);
json to_json(const OrderProbe& p);
json to_json(const CoronaEvaluation& e);

}  // namespace coarsefield::io
