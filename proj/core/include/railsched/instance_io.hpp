#ifndef RAILSCHED_INSTANCE_IO_HPP
#define RAILSCHED_INSTANCE_IO_HPP

#include <string>
#include <string_view>

#include "railsched/instance.hpp"

namespace railsched {

inline constexpr int kSchemaVersion = 1;

/// Parses and validates an instance document (JSON, see docs/instance_format.md).
Instance load_instance(std::string_view document);
Instance load_instance_file(const std::string& path);

/// Parses the document without the cross-reference validation of Instance::create.
InstanceData parse_instance_data(std::string_view document);

/// Canonical JSON rendering; load_instance(serialize_instance(x)) == x.
std::string serialize_instance(const Instance& instance);
std::string serialize_instance_data(const InstanceData& data);

}  // namespace railsched

#endif  // RAILSCHED_INSTANCE_IO_HPP
