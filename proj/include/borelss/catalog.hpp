#pragma once

#include <vector>

#include "borelss/catalog_data.hpp"
#include "borelss/presentation_verifier.hpp"

namespace borelss {

inline const char* builtin_catalog_text(Field f) {
  switch (f) {
    case Field::R: return catalog_data::kReal;
    case Field::C: return catalog_data::kComplex;
    case Field::H: return catalog_data::kQuaternionic;
  }
  return "";
}

inline std::vector<IdealFamily> builtin_catalog(Field f) { return parse_catalog(builtin_catalog_text(f)); }

}  // namespace borelss
