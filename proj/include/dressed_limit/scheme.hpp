#ifndef DRESSED_LIMIT_SCHEME_HPP
#define DRESSED_LIMIT_SCHEME_HPP

#include <optional>
#include <string>
#include <vector>

namespace dressed_limit {

inline constexpr double speed_of_light = 299792458.0;  // m/s

// One atomic level in the rotating frame.
struct Level {
    int id = 0;            // 1-based, contiguous
    double detuning = 0;   // rad/s
    double gamma = 0;      // 1/s, 0 for stable levels
};

// One laser mode.  omega is derived from the wavenumber at parse time.
struct Laser {
    int id = 0;                    // 1-based, contiguous
    double wavenumber = 0;         // 1/m
    double omega = 0;              // rad/s, = c * wavenumber
    std::optional<double> power;   // W, only used by the power-form SNR
};

// A laser-driven coupling between two levels.  The Rabi frequency is real
// and non-negative; complex laser phases are a gauge choice removable by
// redefining level phases.
struct Transition {
    int laser = 0;
    int lower = 0;
    int upper = 0;
    double rabi = 0;  // rad/s
};

struct MeasurementContext {
    double column_density = 0;  // atoms/m^2
    double area = 0;            // m^2
    double bandwidth = 0;       // Hz
    double efficiency = 0;      // in (0, 1]
    int initial_level = 1;
};

struct LevelScheme {
    std::vector<Level> levels;
    std::vector<Laser> lasers;
    std::vector<Transition> transitions;
    MeasurementContext context;

    const Level& level(int id) const;
    const Laser& laser(int id) const;
    bool has_level(int id) const;
    bool has_laser(int id) const;
    int num_levels() const { return static_cast<int>(levels.size()); }
    int num_lasers() const { return static_cast<int>(lasers.size()); }
};

struct Diagnostic {
    std::string type;   // which domain type
    std::string field;
    std::string rule;   // the violated invariant
    std::string message() const { return type + "." + field + ": " + rule; }
};

// Parses the JSON scheme format.  Unknown keys are errors.  An optional
// "units" object declares a frequency scale applied to detuning, rabi and
// gamma so files can be written in units of a reference linewidth.
// Throws ParseError on syntax errors or invariant violations.
LevelScheme parse_scheme(const std::string& text);

// Inverse of parse_scheme, emitting internal SI values (no "units" block).
std::string serialize_scheme(const LevelScheme& s);

// Empty result iff every type invariant holds.
std::vector<Diagnostic> validate_scheme(const LevelScheme& s);

// Single-atom cross-section 6*pi/k^2.
double cross_section(double wavenumber);
inline double cross_section(const Laser& l) { return cross_section(l.wavenumber); }

}  // namespace dressed_limit

#endif  // DRESSED_LIMIT_SCHEME_HPP
