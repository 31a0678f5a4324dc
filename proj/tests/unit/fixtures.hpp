#ifndef RAILSCHED_TEST_FIXTURES_HPP
#define RAILSCHED_TEST_FIXTURES_HPP

#include <fstream>
#include <sstream>
#include <string>

#include "railsched/instance_io.hpp"

namespace fixtures {

inline std::string data_path(const std::string& name) { return std::string(RAILSCHED_TEST_DATA) + "/" + name; }

inline std::string read_text(const std::string& name) {
  std::ifstream in(data_path(name));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline railsched::Instance load(const std::string& name) { return railsched::load_instance_file(data_path(name)); }

// Two trains A -> B -> C sharing a single-track first leg; IC1 starts 2 min
// late and collides with R1 behind it. Hand-solved: letting R1 go first
// delays IC1 by 2 (weight 3/2), the reverse delays R1 by 4 (weight 1).
inline railsched::Instance two_trains() { return load("two_trains.json"); }

}  // namespace fixtures

#endif
