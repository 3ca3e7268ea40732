#include "depfid/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "depfid/errors.hpp"

namespace depfid {

using nlohmann::ordered_json;

namespace {

ordered_json real(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return round_significant(v);
}

template <typename T>
ordered_json optional_real(const std::optional<T>& v) {
    return v ? real(*v) : ordered_json(nullptr);
}

ordered_json reals(const std::vector<double>& values) {
    ordered_json arr = ordered_json::array();
    for (double v : values) arr.push_back(real(v));
    return arr;
}

ordered_json mmd_json(const std::optional<MmdResult>& m) {
    if (!m) return nullptr;
    ordered_json j;
    j["mmd_squared_unbiased"] = real(m->mmd_squared_unbiased);
    j["mmd"] = real(m->mmd);
    j["bandwidth"] = real(m->bandwidth);
    j["n_ref"] = m->n_ref;
    j["n_syn"] = m->n_syn;
    return j;
}

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string fmt_optional(const std::optional<double>& v) {
    return v ? fmt(*v) : "n/a";
}

} // namespace

ReportFormat parse_report_format(std::string_view name) {
    if (name == "json") return ReportFormat::Json;
    if (name == "md" || name == "markdown") return ReportFormat::Markdown;
    throw Error(ErrorKind::InvalidArgument, "unknown report format '" + std::string(name) + "'");
}

double round_significant(double value, int digits) {
    if (value == 0.0 || !std::isfinite(value)) return value;
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
    return std::strtod(buf, nullptr);
}

std::string regime_name(Regime regime) {
    return regime == Regime::Stable ? "stable" : "unstable";
}

ordered_json report_to_json(const AuditReport& r) {
    ordered_json j;

    ordered_json meta;
    meta["n_ref"] = r.dataset_meta.n_ref;
    meta["n_syn"] = r.dataset_meta.n_syn;
    meta["d"] = r.dataset_meta.d;
    meta["pca_dims"] = r.dataset_meta.pca_dims ? ordered_json(*r.dataset_meta.pca_dims) : nullptr;
    meta["variance_explained"] = optional_real(r.dataset_meta.variance_explained);
    j["dataset_meta"] = meta;

    ordered_json verdict;
    verdict["d_sigma"] = real(r.verdict.d_sigma);
    verdict["d_sigma_normalized"] = real(r.verdict.d_sigma_normalized);
    verdict["eigengap"] = real(r.verdict.eigengap);
    verdict["ratio"] = real(r.verdict.ratio);
    verdict["regime"] = regime_name(r.verdict.regime);
    j["verdict"] = verdict;

    j["rv"] = real(r.rv);

    ordered_json ks;
    ordered_json dims = ordered_json::array();
    for (const auto& k : r.ks.per_dimension) {
        ordered_json e;
        e["statistic"] = real(k.statistic);
        e["p_value"] = real(k.p_value);
        dims.push_back(e);
    }
    ks["per_dimension"] = dims;
    ks["median_statistic"] = real(r.ks.median_statistic);
    j["ks"] = ks;

    ordered_json subspace = ordered_json::array();
    for (const auto& s : r.subspace) {
        ordered_json e;
        e["r"] = s.r;
        e["sin_theta"] = real(s.sin_theta);
        e["eigengap"] = real(s.eigengap);
        e["dk_bound"] = s.bound.vacuous ? ordered_json(nullptr) : real(s.bound.value);
        e["vacuous"] = s.bound.vacuous;
        subspace.push_back(e);
    }
    j["subspace"] = subspace;

    ordered_json slopes;
    slopes["target_index"] = r.slopes.target_index;
    slopes["predictor_indices"] = r.slopes.predictor_indices;
    slopes["slopes_ref"] = reals(r.slopes.slopes_ref);
    slopes["slopes_syn"] = reals(r.slopes.slopes_syn);
    slopes["abs_deltas"] = reals(r.slopes.abs_deltas);
    slopes["sign_flips"] = r.slopes.sign_flips;
    slopes["theorem2_bound"] = optional_real(r.slopes.theorem2_bound);
    j["slopes"] = slopes;

    if (r.bootstrap) {
        ordered_json b;
        b["observed"] = real(r.bootstrap->observed);
        b["ci_low"] = real(r.bootstrap->ci_low);
        b["ci_high"] = real(r.bootstrap->ci_high);
        b["standard_error"] = real(r.bootstrap->standard_error);
        b["n_resamples"] = r.bootstrap->n_resamples;
        b["seed"] = r.bootstrap->seed;
        j["bootstrap"] = b;
    } else {
        j["bootstrap"] = nullptr;
    }

    if (r.sensitivity) {
        ordered_json s;
        s["subset_size"] = r.sensitivity->subset_size;
        s["n_subsets"] = r.sensitivity->n_subsets;
        s["d_sigma_values"] = reals(r.sensitivity->d_sigma_values);
        s["one_minus_rv_values"] = reals(r.sensitivity->one_minus_rv_values);
        s["spearman_r"] = optional_real(r.sensitivity->spearman_r);
        s["spearman_p"] = optional_real(r.sensitivity->spearman_p);
        s["ks_p"] = optional_real(r.sensitivity->ks_p);
        j["sensitivity"] = s;
    } else {
        j["sensitivity"] = nullptr;
    }

    j["mmd"] = mmd_json(r.mmd);
    j["copula_mmd"] = mmd_json(r.copula_mmd);
    j["seed"] = r.seed;
    j["tool_version"] = r.tool_version;
    return j;
}

std::string emit_report(const AuditReport& r, ReportFormat format) {
    if (format == ReportFormat::Json) return report_to_json(r).dump(2) + "\n";

    std::ostringstream md;
    md << "# Dependence fidelity audit\n\n";
    md << "| n_ref | n_syn | d | PCA dims | Variance explained |\n";
    md << "|---|---|---|---|---|\n";
    md << "| " << r.dataset_meta.n_ref << " | " << r.dataset_meta.n_syn << " | " << r.dataset_meta.d
       << " | " << (r.dataset_meta.pca_dims ? std::to_string(*r.dataset_meta.pca_dims) : "n/a")
       << " | " << fmt_optional(r.dataset_meta.variance_explained) << " |\n\n";

    std::string sin_r1 = "n/a";
    for (const auto& s : r.subspace) {
        if (s.r == 1) sin_r1 = fmt(s.sin_theta);
    }
    md << "| Median KS | D_Σ | D̃_Σ | δ | D_Σ/δ | Regime | RV | ‖sinΘ‖₂ (r=1) | Sign flips |\n";
    md << "|---|---|---|---|---|---|---|---|---|\n";
    md << "| " << fmt(r.ks.median_statistic) << " | " << fmt(r.verdict.d_sigma) << " | "
       << fmt(r.verdict.d_sigma_normalized) << " | " << fmt(r.verdict.eigengap) << " | "
       << fmt(r.verdict.ratio) << " | " << regime_name(r.verdict.regime) << " | " << fmt(r.rv)
       << " | " << sin_r1 << " | " << r.slopes.sign_flips << " |\n\n";

    md << "## Subspace stability\n\n";
    md << "| r | ‖sinΘ‖₂ | γ_r | Davis–Kahan bound |\n";
    md << "|---|---|---|---|\n";
    for (const auto& s : r.subspace) {
        md << "| " << s.r << " | " << fmt(s.sin_theta) << " | " << fmt(s.eigengap) << " | "
           << (s.bound.vacuous ? std::string("---") : fmt(s.bound.value)) << " |\n";
    }
    md << "\n'---' marks a vacuous bound.\n\n";

    md << "## Regression slopes (target column " << r.slopes.target_index << ")\n\n";
    md << "| Predictor | β ref | β syn | \\|Δβ\\| |\n";
    md << "|---|---|---|---|\n";
    for (std::size_t k = 0; k < r.slopes.predictor_indices.size(); ++k) {
        md << "| " << r.slopes.predictor_indices[k] << " | " << fmt(r.slopes.slopes_ref[k]) << " | "
           << fmt(r.slopes.slopes_syn[k]) << " | " << fmt(r.slopes.abs_deltas[k]) << " |\n";
    }
    md << "\nSign flips: " << r.slopes.sign_flips
       << ". Matched-variance bound on |Δβ| (first predictor): " << fmt_optional(r.slopes.theorem2_bound)
       << "\n";

    if (r.bootstrap) {
        md << "\n## Bootstrap D_Σ\n\n";
        md << "| Observed | 95% CI | SE | B | Seed |\n|---|---|---|---|---|\n";
        md << "| " << fmt(r.bootstrap->observed) << " | [" << fmt(r.bootstrap->ci_low) << ", "
           << fmt(r.bootstrap->ci_high) << "] | " << fmt(r.bootstrap->standard_error) << " | "
           << r.bootstrap->n_resamples << " | " << r.bootstrap->seed << " |\n";
    }
    if (r.sensitivity) {
        md << "\n## Subset sensitivity\n\n";
        md << "| Subsets | Size | Spearman r | Spearman p | KS p |\n|---|---|---|---|---|\n";
        md << "| " << r.sensitivity->n_subsets << " | " << r.sensitivity->subset_size << " | "
           << fmt_optional(r.sensitivity->spearman_r) << " | " << fmt_optional(r.sensitivity->spearman_p)
           << " | " << fmt_optional(r.sensitivity->ks_p) << " |\n";
    }
    if (r.mmd || r.copula_mmd) {
        md << "\n## Kernel two-sample statistics\n\n";
        md << "| Domain | MMD² (unbiased) | MMD | Bandwidth |\n|---|---|---|---|\n";
        if (r.mmd) {
            md << "| raw | " << fmt(r.mmd->mmd_squared_unbiased) << " | " << fmt(r.mmd->mmd) << " | "
               << fmt(r.mmd->bandwidth) << " |\n";
        }
        if (r.copula_mmd) {
            md << "| copula | " << fmt(r.copula_mmd->mmd_squared_unbiased) << " | "
               << fmt(r.copula_mmd->mmd) << " | " << fmt(r.copula_mmd->bandwidth) << " |\n";
        }
    }
    md << "\nseed " << r.seed << ", depfid " << r.tool_version << "\n";
    return md.str();
}

} // namespace depfid
