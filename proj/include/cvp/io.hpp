#pragma once
// JSON reports (insertion-ordered keys) and CSV series.
#include "cvp/eulerlagrange.hpp"
#include "cvp/linfield.hpp"
#include "cvp/measures.hpp"
#include "cvp/minimality.hpp"
#include "cvp/symplectic.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>

namespace cvp {

using Json = nlohmann::ordered_json;

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

Json to_json(const LatticeParams& p);
Json to_json(const SphereParams& p);
Json to_json(const CfsParams& p);

Json to_json(const DiscreteMeasure<LatticePoint>& rho);
Json to_json(const DiscreteMeasure<SpherePoint>& rho);
DiscreteMeasure<LatticePoint> lattice_measure_from_json(const Json& j);
DiscreteMeasure<SpherePoint> sphere_measure_from_json(const Json& j);

Json to_json(const ElReport& r);
Json to_json(const SigmaReport& r);
Json to_json(const LatticeJetState& s);
LatticeJetState lattice_state_from_json(const Json& j);
Json to_json(const RayleighResult& r);
Json to_json(const MinimalityCertificate& c);
Json to_json(const AnnealResult& r);

Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);

void write_sigma_csv(const std::filesystem::path& path, const SigmaReport& r);
void write_state_csv(const std::filesystem::path& path, const LatticeJetState& s);
void write_el_summary_csv(const std::filesystem::path& path, const ElReport& r);

}  // namespace cvp
