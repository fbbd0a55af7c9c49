#ifndef CEC_CLI_DOCUMENT_HPP
#define CEC_CLI_DOCUMENT_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "cec/cli/ellipses.hpp"
#include "cec/engine.hpp"
#include "cec/oracle.hpp"

namespace cec::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// What was asked for, echoed into the output document.
struct RunSpec {
    std::optional<std::string> input;
    std::optional<std::string> generate;
    std::size_t points = 0;
    std::size_t centers = 0;
    std::vector<std::string> types;
    std::vector<std::vector<double>> params;  ///< per type, empty for parameterless families
    std::size_t nstart = 1;
    std::size_t iter_max = 100;
    std::string card_min = "5%";
    std::string init = "kmeans++";
    std::string method = "hartigan";
    std::uint64_t seed = 0;
};

/**
 * Builds a family from its name and flat parameter list: fixedr takes one
 * value, eigenvalues N values, covariance N*N row-major values, the others none.
 */
FamilySpec make_family(std::string_view type, std::span<const double> params);

struct DocumentExtras {
    std::optional<std::vector<Ellipse>> ellipses;
    std::optional<OracleResult> oracle;
    std::optional<double> elapsed_seconds;
};

/**
 * Output document (schema 1). Keys appear in a fixed order:
 * schema, run, result{cluster, probabilities, centers, covariances,
 * covariances_model, types, params, cost_function, nclusters,
 * final_cost_function, final_nclusters, iterations, card_min, best_start},
 * then the optional ellipses, oracle and time sections.
 */
Json make_document(const RunSpec& spec, const CecResult& result, const DocumentExtras& extras = {});

/**
 * Canonical text form: two-space indented objects, arrays on one line,
 * floating-point numbers with 17 significant digits. Serialising a parsed
 * document reproduces the original bytes.
 */
std::string serialize(const Json& doc);

/// Throws DataError on malformed input.
Json parse_document(const std::string& text);

/// Rebuilds the result fields stored in a document (elapsed time is not restored).
CecResult result_from_document(const Json& doc);

RunSpec run_spec_from_document(const Json& doc);

}  // namespace cec::cli

#endif  // CEC_CLI_DOCUMENT_HPP
