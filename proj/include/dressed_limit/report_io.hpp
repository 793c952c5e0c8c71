#ifndef DRESSED_LIMIT_REPORT_IO_HPP
#define DRESSED_LIMIT_REPORT_IO_HPP

#include <string>

#include <json.hpp>

#include "dressed_limit/explorer.hpp"
#include "dressed_limit/manifold.hpp"
#include "dressed_limit/observables.hpp"
#include "dressed_limit/oracle.hpp"

namespace dressed_limit {

nlohmann::json report_to_json(const ObservableReport& r);
nlohmann::json evolution_to_json(const EvolutionResult& r);
nlohmann::json search_to_json(const SearchResult& r,
                              const std::vector<std::string>& parameter_names);

// Fixed column set: parameters, then per-laser snr_j / bound_j /
// saturation_j, then destruction.  Undefined saturations are empty cells.
std::string scan_to_csv(const ScanTable& t);

std::string manifold_table(const LevelScheme& s, const ManifoldMap& m);
std::string report_table(const LevelScheme& s, const ObservableReport& r);

// Full-precision decimal rendering (17 significant digits).
std::string format_double(double v);

}  // namespace dressed_limit

#endif  // DRESSED_LIMIT_REPORT_IO_HPP
