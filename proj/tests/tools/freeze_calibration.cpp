// Regenerates the annealer calibration suite and its exact optima.
//   freeze_calibration <out-dir>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "railsched/exact.hpp"
#include "railsched/generate.hpp"
#include "railsched/instance_io.hpp"
#include "railsched/model.hpp"

using namespace railsched;

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: freeze_calibration <out-dir>\n";
    return 64;
  }
  const std::filesystem::path dir(argv[1]);
  std::filesystem::create_directories(dir);
  std::ofstream optima(dir / "optima.txt");
  optima << "# instance objective status (exact branch and bound, 600 s budget)\n";
  for (int i = 0; i < 10; ++i) {
    // Five single-track lines, five double-track lines with one closed track.
    LineOptions o;
    o.kind = i < 5 ? LineKind::single_track : LineKind::double_with_closure;
    o.stations = 4 + i % 2;
    o.cycle = 60;
    o.horizon = 60;
    o.trains = even_train_pattern(6 + i % 5, 60);
    o.seed = 100 + i;
    const Instance inst = with_random_delays(gen_synthetic_line(o), 200 + i, 4, 15);
    const std::string name = "cal_" + std::string(i < 10 ? "0" : "") + std::to_string(i);
    std::ofstream(dir / (name + ".json")) << serialize_instance(inst);
    const ExactResult r = solve_exact(build_model(inst), 600.0);
    optima << name << ' ' << (r.solution ? to_string(r.solution->objective) : "-") << ' ' << to_string(r.status)
           << '\n';
    std::cout << name << ": " << inst.num_trains() << " trains, " << to_string(r.status) << '\n';
  }
  return 0;
}
