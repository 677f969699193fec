#pragma once

#include "firelik/config.hpp"
#include "firelik/likelihood.hpp"
#include "firelik/search.hpp"

#include <iosfwd>
#include <string>

namespace firelik {

/// `profile`: sweep the single-pixel log-likelihood over scan-minus-arrival
/// offsets; writes <out_dir>/profile.csv and prints the summary line.
ProfileSummaryd cmd_profile(const RunConfig& cfg, const std::string& out_dir,
                            std::ostream& log);

/// `simulate`: run the configured spread model from `ign`; writes
/// <out_dir>/arrival.csv.
std::string cmd_simulate(const RunConfig& cfg, const IgnitionCandidated& ign,
                         const std::string& out_dir, std::ostream& log);

/// `synth`: generate a detection scene on the arrival field (from
/// arrival_path if set, else a fresh simulation); writes <out_dir>/scene.csv.
std::string cmd_synth(const RunConfig& cfg, std::uint64_t seed, const std::string& out_dir,
                      std::ostream& log);

/// `estimate`: grid-search the candidate ignitions against the scene at
/// scene_path; writes surface.csv, best.json, and one slice_t<t>.csv per
/// candidate time.
SearchResultd cmd_estimate(const RunConfig& cfg, unsigned workers, const std::string& out_dir,
                           std::ostream& log);

}  // namespace firelik
