#include "depfid/commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "depfid/csv.hpp"
#include "depfid/diagnostics.hpp"
#include "depfid/errors.hpp"
#include "depfid/linalg.hpp"

namespace depfid {

namespace {

double parse_number(std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw Error(ErrorKind::InvalidArgument, "bad grid value '" + std::string(s) + "'");
    }
    return v;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
    return out;
}

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

} // namespace

Grid parse_grid(std::string_view text) {
    const auto first = text.find(':');
    const auto second = first == std::string_view::npos ? first : text.find(':', first + 1);
    if (second == std::string_view::npos) {
        throw Error(ErrorKind::InvalidArgument, "grid must be START:STOP:STEP");
    }
    Grid g{parse_number(text.substr(0, first)), parse_number(text.substr(first + 1, second - first - 1)),
           parse_number(text.substr(second + 1))};
    if (!(g.step > 0.0)) throw Error(ErrorKind::InvalidArgument, "grid step must be positive");
    if (g.stop < g.start) throw Error(ErrorKind::InvalidArgument, "grid stop precedes start");
    return g;
}

std::vector<double> grid_values(const Grid& g) {
    if (!(g.step > 0.0) || g.stop < g.start) {
        throw Error(ErrorKind::InvalidArgument, "invalid grid");
    }
    const auto count = static_cast<std::size_t>(std::floor((g.stop - g.start) / g.step + 1e-9)) + 1;
    std::vector<double> values(count);
    for (std::size_t k = 0; k < count; ++k) values[k] = g.start + static_cast<double>(k) * g.step;
    return values;
}

int cmd_synth(const ScenarioSpec& spec, const std::filesystem::path& out_ref,
              const std::filesystem::path& out_syn, std::ostream& out) {
    const ScenarioPair pair = make_scenario(spec);
    write_csv(out_ref, pair.samples_ref.values());
    write_csv(out_syn, pair.samples_syn.values());

    nlohmann::ordered_json j;
    j["scenario"] = std::string(to_string(spec.kind));
    j["n"] = spec.n;
    j["seed"] = spec.seed;
    j["d_sigma"] = optional_number(pair.closed_forms.d_sigma);
    j["beta_ref"] = optional_number(pair.closed_forms.beta_ref);
    j["beta_syn"] = optional_number(pair.closed_forms.beta_syn);
    j["exact_sin_theta"] = optional_number(pair.closed_forms.exact_sin_theta);
    out << j.dump() << '\n';
    return 0;
}

int cmd_sweep(const Grid& eps, std::size_t n, std::uint64_t seed,
              const std::filesystem::path& out_path) {
    const auto grid = grid_values(eps);
    const std::vector<double> zero(2, 0.0);
    const SymMatrix cov_ref(Matrix{{3.0, 0.0}, {0.0, 1.0}}, SymKind::Covariance);

    std::ofstream out = open_output(out_path);
    out << "epsilon,d_sigma,dk_bound,vacuous,exact_sin_theta,sample_sin_theta\n";
    for (double e : grid) {
        if (e < 0.0) throw Error(ErrorKind::InvalidArgument, "epsilon must be nonnegative");
        const SymMatrix cov_syn(Matrix{{3.0, e}, {e, 1.0}}, SymKind::Covariance);
        const double ds = d_sigma(cov_ref, cov_syn);
        const DavisKahanBound dk = davis_kahan_bound(ds, 2.0);

        Rng rng_ref(seed, 0);
        Rng rng_syn(seed, 0);
        const DataMatrix sample_ref = sample_mvn(zero, cov_ref, n, rng_ref);
        const DataMatrix sample_syn = sample_mvn(zero, cov_syn, n, rng_syn);
        const double sample_sin = subspace_sin_theta(
            principal_subspace(sym_eigendecompose(estimate_covariance(sample_ref)), 1),
            principal_subspace(sym_eigendecompose(estimate_covariance(sample_syn)), 1));

        out << format_csv_number(e) << ',' << format_csv_number(ds) << ','
            << format_csv_number(dk.value) << ',' << (dk.vacuous ? "true" : "false") << ','
            << format_csv_number(eigengap_exact_sin_theta(e)) << ',' << format_csv_number(sample_sin)
            << '\n';
    }
    if (!out) throw Error(ErrorKind::IoError, "write failed for " + out_path.string());
    return 0;
}

int cmd_tail(double rho, double nu, const Grid& u, std::size_t n, std::uint64_t seed,
             const std::filesystem::path& out_path) {
    const auto grid = grid_values(u);
    Rng rng_gauss(seed, 0);
    Rng rng_t(seed, 1);
    const DataMatrix gauss = sample_gaussian_copula(rho, n, rng_gauss);
    const DataMatrix tcop = sample_t_copula(rho, nu, n, rng_t);

    std::ofstream out = open_output(out_path);
    out << "u,p_gaussian,p_tcopula,ratio\n";
    for (double level : grid) {
        const double pg = joint_tail_probability(gauss, 0, 1, level);
        const double pt = joint_tail_probability(tcop, 0, 1, level);
        std::string ratio;
        if (pg > 0.0) ratio = format_csv_number(pt / pg);
        else ratio = pt > 0.0 ? "inf" : "nan";
        out << format_csv_number(level) << ',' << format_csv_number(pg) << ','
            << format_csv_number(pt) << ',' << ratio << '\n';
    }
    if (!out) throw Error(ErrorKind::IoError, "write failed for " + out_path.string());
    return 0;
}

} // namespace depfid
