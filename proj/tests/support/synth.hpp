#pragma once

#include <cstdint>

#include "clbp/analysis.hpp"

namespace clbp::synth {

uint64_t splitmix(uint64_t& state);

// Uniform double in [0,1)
double uniform(uint64_t& state);

// Skin-hue oval with a subject-specific texture over a non-skin
// background, with per-sample gain/bias jitter and small translations.
PlanarImage face_image(int subject, int sample, uint64_t seed);

// subjects x samples_per_subject labeled image set
LabeledImageSet dataset(int subjects, int samples_per_subject, uint64_t seed);

}  // namespace clbp::synth
