#pragma once

#include <filesystem>
#include <string>

#include "codesign/agents.hpp"
#include "codesign/render.hpp"
#include "codesign/scene.hpp"

// Side-by-side evaluator report over two finished scenes.
namespace codesign::compare {

inline constexpr const char* kCompareSchema = "codesign.compare/1";

struct Side {
    std::string label;
    std::string scene_name;
    /// Rendered top view handed to the evaluator; empty when the client is text-only.
    std::string image;
    agents::Evaluation evaluation;
};

struct CompareReport {
    Side a;
    Side b;

    /// b minus a, per criterion.
    std::array<int, 4> deltas() const;
    Json to_json() const;
    /// Fixed-width text table of the four criteria and the averages.
    std::string table() const;
};

struct CompareOptions {
    std::string label_a = "a";
    std::string label_b = "b";
    /// Where the two top views are written.
    std::filesystem::path image_dir = std::filesystem::temp_directory_path();
    render::RenderOptions render;
    std::string rubric;
};

/// Renders both scenes and runs the evaluator on each, a first. Propagates UngradableReply.
CompareReport compare_report(const scene::SceneDocument& a, const scene::SceneDocument& b,
                             agents::CompletionClient& client, const CompareOptions& options = {});

}  // namespace codesign::compare
