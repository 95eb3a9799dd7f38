#ifndef PTRLAB_PRESETS_HPP
#define PTRLAB_PRESETS_HPP

#include <functional>
#include <string>
#include <vector>

#include "ptrlab/medium.hpp"

namespace ptrlab {

struct Preset {
  std::string name;
  std::string description;
  int dim = 1;
  double extent_x = 1.0;
  double extent_y = 1.0;
  int default_resolution = 0;
  double recommended_T = 0.0;
  double c_min = 0.0;
  double c_max = 0.0;
  std::function<double(double, double)> c;
  std::function<double(double, double)> q;
  std::function<double(double, double)> eta;
};

const std::vector<Preset>& preset_catalog();

const Preset& find_preset(const std::string& name);

/// Grid for a preset at a resolution (0 = preset default) and horizon T
/// (0 = recommended), with the medium's boundary metric attached.
struct PresetInstance {
  DomainGrid grid;
  Medium medium;
};
PresetInstance instantiate_preset(const Preset& preset, int resolution = 0,
                                  double T = 0.0);

}  // namespace ptrlab

#endif  // PTRLAB_PRESETS_HPP
