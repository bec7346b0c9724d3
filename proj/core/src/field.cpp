#include "vep/field.hpp"

// Header-only value types; translation unit kept so the target layout matches
// one source file per module.

namespace vep {}
