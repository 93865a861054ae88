#include "snss/types.hpp"

#include <string>

namespace snss {

void SpatialData::validate() const {
  if (values.rows() == 0) throw DataError("spatial data has no rows");
  if (coords.rows() != values.rows()) {
    throw DataError("coordinate rows (" + std::to_string(coords.rows()) + ") do not match value rows (" +
                    std::to_string(values.rows()) + ")");
  }
  if (!coords.allFinite()) throw DataError("non-finite coordinate");
  if (!values.allFinite()) throw DataError("non-finite value");
}

}  // namespace snss
