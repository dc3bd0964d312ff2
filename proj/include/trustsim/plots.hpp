#pragma once

#include <filesystem>
#include <vector>

namespace trustsim {

/// Renders the figure SVGs for a completed run directory, discovering
/// artifacts through run_manifest.json. For a full disaster run this emits
/// nine files: avg_opinion, avg_trust, avg_emotions, opinion_trust_events
/// (dual axis with event markers), emotion_heatmap (every 10th iteration),
/// trust_heatmap and allocation_map (first listed snapshot of each kind),
/// friendship_network and influence_network (circular layout). Rendering is
/// a pure function of the artifact bytes — no clock, locale, or RNG — so
/// repeated invocations are byte-identical. A manifest entry whose file is
/// missing raises std::runtime_error naming the expected file. Returns the
/// written paths.
std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& run_dir);

}  // namespace trustsim
