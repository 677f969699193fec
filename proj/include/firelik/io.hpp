#pragma once

#include "firelik/detection.hpp"
#include "firelik/geometry.hpp"
#include "firelik/likelihood.hpp"
#include "firelik/search.hpp"

#include <string>
#include <vector>

namespace firelik::io {

/// Shortest decimal that parses back to the same double; infinities as
/// "inf"/"-inf". All emitters below use this, so outputs are byte-stable.
std::string format_number(double v);

void write_field_csv(const std::string& path, const ScalarFieldd& field);
ScalarFieldd read_field_csv(const std::string& path);

void write_scene_csv(const std::string& path, const DetectionScened& scene);
DetectionScened read_scene_csv(const std::string& path);

void write_profile_csv(const std::string& path, const LikelihoodProfiled& prof);
void write_surface_csv(const std::string& path, const std::vector<SurfaceSampled>& surface);
void write_best_json(const std::string& path, const SearchResultd& result);

}  // namespace firelik::io
