#include "dressed_limit/explorer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "dressed_limit/errors.hpp"

namespace dressed_limit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

void apply_parameter(LevelScheme& s, const std::string& name, double value) {
    auto parts = split(name, '.');
    if (parts.size() == 2 && parts[0] == "detuning") {
        int id = std::stoi(parts[1]);
        for (auto& l : s.levels)
            if (l.id == id) {
                l.detuning = value;
                return;
            }
        throw Error("parameter \"" + name + "\": unknown level");
    }
    if (parts.size() == 4 && parts[0] == "rabi") {
        int laser = std::stoi(parts[1]);
        int lower = std::stoi(parts[2]);
        int upper = std::stoi(parts[3]);
        for (auto& t : s.transitions)
            if (t.laser == laser && t.lower == lower && t.upper == upper) {
                t.rabi = value;
                return;
            }
        throw Error("parameter \"" + name + "\": unknown transition");
    }
    throw Error("parameter \"" + name +
                "\": expected detuning.<level> or rabi.<laser>.<lower>.<upper>");
}

}  // namespace

LevelScheme instantiate(const ParameterSpace& space,
                        const std::vector<double>& point) {
    if (point.size() != space.parameters.size())
        throw Error("point dimension mismatch");
    LevelScheme s = space.base;
    for (std::size_t i = 0; i < point.size(); ++i)
        apply_parameter(s, space.parameters[i].name, point[i]);
    return s;
}

namespace {

struct Eval {
    TraceEntry entry;
    std::vector<std::optional<double>> per_laser_saturation;
    std::string error;
};

Eval evaluate_point(const ParameterSpace& space,
                    const std::vector<double>& point, TrackingRule rule,
                    int rule_index) {
    Eval ev;
    TraceEntry& e = ev.entry;
    e.point = point;
    try {
        LevelScheme s = instantiate(space, point);
        auto diags = validate_scheme(s);
        if (!diags.empty()) throw Error(diags.front().message());
        ManifoldMap m = require_closed_manifold(s);
        ObservableReport r = analyze(s, m, rule, rule_index);
        e.ok = true;
        e.destruction = r.destruction;
        for (const auto& lo : r.lasers) {
            e.snr.push_back(lo.snr);
            e.bound.push_back(lo.bound);
            ev.per_laser_saturation.push_back(lo.saturation);
            if (lo.saturation &&
                (!e.saturation || *lo.saturation > *e.saturation))
                e.saturation = lo.saturation;
        }
    } catch (const Error& err) {
        e.ok = false;
        ev.error = err.what();
    }
    return ev;
}

}  // namespace

ScanTable scan(const ParameterSpace& space, const std::vector<int>& grid,
               const ScanOptions& opt) {
    const int dim = static_cast<int>(space.parameters.size());
    if (static_cast<int>(grid.size()) != dim)
        throw Error("grid dimension mismatch");
    long total = 1;
    for (int g : grid) {
        if (g < 2) throw Error("scan needs at least 2 points per axis");
        total *= g;
        if (total > opt.cap)
            throw CapExceededError("grid of " + std::to_string(total) +
                                   "+ points exceeds cap " +
                                   std::to_string(opt.cap));
    }

    ScanTable table;
    for (const auto& p : space.parameters) table.parameter_names.push_back(p.name);
    table.num_lasers = space.base.num_lasers();
    table.rows.resize(total);

    auto point_at = [&](long index) {
        std::vector<double> p(dim);
        long rem = index;
        for (int a = dim - 1; a >= 0; --a) {
            int i = static_cast<int>(rem % grid[a]);
            rem /= grid[a];
            const auto& par = space.parameters[a];
            p[a] = par.lo + (par.hi - par.lo) * i / (grid[a] - 1);
        }
        return p;
    };

    auto worker = [&](int offset, int stride) {
        for (long i = offset; i < total; i += stride) {
            Eval ev =
                evaluate_point(space, point_at(i), opt.rule, opt.rule_index);
            ScanRow& row = table.rows[i];
            row.point = ev.entry.point;
            row.ok = ev.entry.ok;
            row.destruction = ev.entry.destruction;
            row.snr = ev.entry.snr;
            row.bound = ev.entry.bound;
            row.saturation = ev.per_laser_saturation;
            if (!row.ok) {
                row.error = ev.error;
                row.snr.assign(table.num_lasers, 0.0);
                row.bound.assign(table.num_lasers, 0.0);
                row.saturation.assign(table.num_lasers, std::nullopt);
            }
        }
    };

    const int threads = std::max(1, opt.threads);
    if (threads == 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < threads; ++k) pool.emplace_back(worker, k, threads);
        for (auto& th : pool) th.join();
    }
    return table;
}

namespace {

// Downhill simplex (Nelder-Mead) maximization over a box; evaluations are
// clipped to bounds.  Returns when the budget slice is exhausted or the
// simplex collapses.
class Simplex {
  public:
    Simplex(const ParameterSpace& space,
            std::function<double(const std::vector<double>&)> f)
        : space_(space), f_(std::move(f)), dim_(space.parameters.size()) {}

    void clip(std::vector<double>& p) const {
        for (std::size_t i = 0; i < dim_; ++i)
            p[i] = std::clamp(p[i], space_.parameters[i].lo,
                              space_.parameters[i].hi);
    }

    void run(std::vector<double> start, long max_evals, long* used) {
        struct Vertex {
            std::vector<double> x;
            double v;
        };
        std::vector<Vertex> vx;
        auto eval = [&](std::vector<double> p) {
            clip(p);
            ++*used;
            return Vertex{p, f_(p)};
        };
        vx.push_back(eval(start));
        for (std::size_t i = 0; i < dim_ && *used < max_evals; ++i) {
            std::vector<double> p = start;
            const auto& par = space_.parameters[i];
            double d = 0.05 * (par.hi - par.lo);
            p[i] += (p[i] + d <= par.hi) ? d : -d;
            vx.push_back(eval(p));
        }
        if (vx.size() != dim_ + 1) return;

        auto order = [&] {
            std::sort(vx.begin(), vx.end(),
                      [](const Vertex& a, const Vertex& b) { return a.v > b.v; });
        };
        order();
        long iter_cap = 400 * static_cast<long>(dim_);
        for (long it = 0; it < iter_cap && *used < max_evals; ++it) {
            // Centroid of all but the worst.
            std::vector<double> c(dim_, 0.0);
            for (std::size_t k = 0; k < dim_; ++k)
                for (std::size_t i = 0; i < dim_; ++i) c[i] += vx[k].x[i] / dim_;
            const Vertex& worst = vx.back();
            auto combine = [&](double coef) {
                std::vector<double> p(dim_);
                for (std::size_t i = 0; i < dim_; ++i)
                    p[i] = c[i] + coef * (c[i] - worst.x[i]);
                return p;
            };
            Vertex refl = eval(combine(1.0));
            if (refl.v > vx[0].v) {
                if (*used < max_evals) {
                    Vertex expanded = eval(combine(2.0));
                    vx.back() = expanded.v > refl.v ? expanded : refl;
                } else {
                    vx.back() = refl;
                }
            } else if (refl.v > vx[dim_ - 1].v) {
                vx.back() = refl;
            } else {
                Vertex ctr = eval(combine(-0.5));
                if (ctr.v > worst.v) {
                    vx.back() = ctr;
                } else {
                    // Shrink toward the best vertex.
                    for (std::size_t k = 1;
                         k <= dim_ && *used < max_evals; ++k) {
                        std::vector<double> p(dim_);
                        for (std::size_t i = 0; i < dim_; ++i)
                            p[i] = vx[0].x[i] + 0.5 * (vx[k].x[i] - vx[0].x[i]);
                        vx[k] = eval(p);
                    }
                }
            }
            order();
            if (std::isfinite(vx[0].v) &&
                vx[0].v - vx.back().v < 1e-13 * (1 + std::abs(vx[0].v)))
                break;
        }
    }

  private:
    const ParameterSpace& space_;
    std::function<double(const std::vector<double>&)> f_;
    std::size_t dim_;
};

SearchResult run_search(const ParameterSpace& space, long budget,
                        std::uint64_t seed, const SearchOptions& opt,
                        bool constrained, double target, double tolerance) {
    if (budget < 1) throw Error("budget must be >= 1");
    SearchResult res;
    res.best_value = kNegInf;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    int restart = 0;
    double weight = 1.0;
    // Best feasible raw value is what the result reports; the penalized
    // objective only steers the simplex.
    auto evaluate = [&](const std::vector<double>& p) {
        TraceEntry e = evaluate_point(space, p, opt.rule, opt.rule_index).entry;
        double raw = kNegInf;
        bool feasible = e.ok;
        if (e.ok) {
            if (constrained) {
                raw = e.snr.empty()
                          ? kNegInf
                          : *std::max_element(e.snr.begin(), e.snr.end());
                double excess =
                    std::max(0.0, std::abs(e.destruction - target) - tolerance);
                feasible = excess == 0.0;
                e.objective =
                    raw - weight * (excess / tolerance) * (excess / tolerance);
            } else {
                raw = e.saturation ? *e.saturation : kNegInf;
                e.objective = raw;
            }
        } else {
            e.objective = kNegInf;
        }
        if (feasible && raw > res.best_value) {
            res.best_value = raw;
            res.best_point = p;
        }
        res.trace.push_back(std::move(e));
        return res.trace.back().objective;
    };

    long used = 0;
    while (used < budget) {
        std::vector<double> start(space.parameters.size());
        for (std::size_t i = 0; i < start.size(); ++i) {
            const auto& par = space.parameters[i];
            start[i] = par.lo + (par.hi - par.lo) * unif(rng);
        }
        Simplex simplex(space, evaluate);
        simplex.run(std::move(start), budget, &used);
        ++restart;
        if (constrained) weight *= 10.0;
    }
    res.evaluations = used;

    if (constrained) {
        res.two_level_reference =
            two_level_reference_snr(space.base, target);
        if (res.best_point.empty())
            throw InfeasibleError(
                "no evaluated point met the destruction constraint");
    }
    return res;
}

}  // namespace

SearchResult search_max_saturation(const ParameterSpace& space, long budget,
                                   std::uint64_t seed,
                                   const SearchOptions& opt) {
    return run_search(space, budget, seed, opt, false, 0, 0);
}

SearchResult search_max_snr_at_fixed_destruction(const ParameterSpace& space,
                                                 double target_destruction,
                                                 double tolerance, long budget,
                                                 std::uint64_t seed,
                                                 const SearchOptions& opt) {
    if (!(target_destruction > 0))
        throw Error("target destruction must be > 0");
    return run_search(space, budget, seed, opt, true, target_destruction,
                      tolerance);
}

std::vector<double> two_level_reference_snr(const LevelScheme& s,
                                            double destruction_rate) {
    const auto& c = s.context;
    std::vector<double> out;
    for (const auto& l : s.lasers)
        out.push_back(0.5 * c.column_density *
                      std::sqrt(c.efficiency * c.area * cross_section(l) *
                                destruction_rate / c.bandwidth));
    return out;
}

LevelScheme random_scheme(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto detuning = [&] { return -50.0 + 100.0 * unif(rng); };
    auto rabi = [&] { return std::pow(10.0, -2.0 + 4.0 * unif(rng)); };
    auto gamma = [&] { return 0.1 + 1.9 * unif(rng); };

    LevelScheme s;
    s.context = {1e12, 1e-8, 1e6, 0.5, 1};

    const int topology = static_cast<int>(unif(rng) * 3.0);
    if (topology == 0) {  // chain
        std::uniform_int_distribution<int> nd(2, 6);
        const int n = nd(rng);
        for (int i = 1; i <= n; ++i)
            s.levels.push_back({i, detuning(), i > 1 ? gamma() : 0.0});
        for (int i = 1; i < n; ++i) {
            s.lasers.push_back({i, 8e6, speed_of_light * 8e6, {}});
            s.transitions.push_back({i, i, i + 1, rabi()});
        }
    } else if (topology == 1) {  // lambda
        s.levels = {{1, detuning(), 0.0}, {2, detuning(), gamma()},
                    {3, detuning(), 0.0}};
        s.lasers = {{1, 8e6, speed_of_light * 8e6, {}},
                    {2, 8.1e6, speed_of_light * 8.1e6, {}}};
        s.transitions = {{1, 1, 2, rabi()}, {2, 3, 2, rabi()}};
    } else {  // double-lambda loop, every level multiply referenced
        s.levels = {{1, detuning(), 0.0}, {2, detuning(), gamma()},
                    {3, detuning(), 0.0}, {4, detuning(), gamma()}};
        s.lasers = {{1, 8e6, speed_of_light * 8e6, {}},
                    {2, 8.1e6, speed_of_light * 8.1e6, {}}};
        s.transitions = {{1, 1, 2, rabi()}, {1, 3, 2, rabi()},
                         {2, 1, 4, rabi()}, {2, 3, 4, rabi()}};
    }
    return s;
}

}  // namespace dressed_limit
