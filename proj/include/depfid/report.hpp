#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "depfid/audit.hpp"

namespace depfid {

enum class ReportFormat { Json, Markdown };

ReportFormat parse_report_format(std::string_view name);

/// Value rounded to 6 significant digits, as emitted in reports.
double round_significant(double value, int digits = 6);

/// Key order is fixed and follows the AuditReport layout. Reals carry 6
/// significant digits; an infinite ratio is the string "inf"; a vacuous
/// Davis-Kahan bound is null next to "vacuous": true.
nlohmann::ordered_json report_to_json(const AuditReport& report);

std::string emit_report(const AuditReport& report, ReportFormat format);

std::string regime_name(Regime regime);

} // namespace depfid
