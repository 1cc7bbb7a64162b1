#pragma once

#include <functional>
#include <string_view>

namespace decolab {

using WarningSink = std::function<void(std::string_view)>;

/// Route non-fatal advisories (truncation adequacy, RWA validity, grid
/// coverage). The default sink writes to stderr. Returns the previous sink.
WarningSink set_warning_sink(WarningSink sink);

void warn(std::string_view message);

}  // namespace decolab
