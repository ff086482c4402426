#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nsratio/fem2d.hpp"
#include "nsratio/geom2d.hpp"

namespace nsratio {

enum class Family { RandomPolygon, RandomTriangle, RandomQuadrilateral, CollapsingRectangle, CollapsingTent, Named };

[[nodiscard]] std::string family_name(Family f);
/// Accepts the names produced by family_name; InputError otherwise.
[[nodiscard]] Family parse_family(const std::string& s);

struct DiagramPoint {
    std::size_t id = 0;
    Family family = Family::RandomPolygon;
    std::uint64_t seed = 0;
    std::string label;  ///< shape id or parameter description
    GeometryFunctionals geometry;
    DomainRecord record;
    double upper_bound = 0.0;  ///< 2 (1 + pi w D / (r P))
    bool ok = false;
    std::string error;
};

struct Campaign {
    Family family = Family::RandomPolygon;
    std::size_t count = 100;
    std::uint64_t seed = 0;
    double h_max = 0.03;
    std::size_t hull_points = 15;
    std::vector<std::string> named = {"T1", "T2", "square", "disk(256)"};
    double eps_max = 1.0;  ///< collapsing families sweep eps geometrically from eps_max to eps_min
    double eps_min = 0.01;
    /// quadrilateral campaigns also run this many rectangles for the bin comparison
    std::size_t companion_rectangles = 40;
    unsigned threads = 0;
};

struct ConjectureReport {
    std::size_t points = 0;
    std::size_t failures = 0;
    std::size_t quality_warnings = 0;
    double min_F = 0.0, max_F = 0.0;
    std::size_t outside_band = 0;       ///< F < 1 or F > 2 (conjectured band; reported only)
    std::size_t outside_box = 0;        ///< x > 8 pi or y > pi j'11^2
    std::size_t hard_violations = 0;    ///< proved bounds broken: global band or per-domain bound
    std::vector<std::size_t> outside_band_ids;
    std::vector<std::size_t> nearest_to_one;  ///< ids of the (up to 5) smallest F
    struct Bin {
        double x_lo = 0.0, x_hi = 0.0;
        std::optional<double> min_y_other, min_y_rectangle;
        bool rectangle_attains_min = false;
    };
    std::vector<Bin> rectangle_bins;  ///< quadrilateral campaigns only
};

struct CampaignResult {
    Campaign campaign;
    std::vector<DiagramPoint> points;
    ConjectureReport report;
};

/// Per-sample seeds come from stream_seed(campaign.seed, index); collapsing
/// families use structured thin meshes with ceil(1/h_max) columns.
[[nodiscard]] CampaignResult run_campaign(const Campaign& c);

[[nodiscard]] ConjectureReport conjecture_report(const std::vector<DiagramPoint>& points, std::size_t bins = 10);

inline constexpr const char* kCsvHeader = "id,family,seed,area,perimeter,diameter,width,inradius,mu1,sigma1,x,y,F,dofs,hmax";

/// Metadata lines start with '#'; the header row follows them.
[[nodiscard]] std::string to_csv(const CampaignResult& r);
[[nodiscard]] std::string to_csv(const std::vector<DiagramPoint>& points);

struct SvgStyle {
    int width = 720;
    int height = 540;
    double point_radius = 2.5;
    bool reference_lines = true;
    std::string title = "";
};

/// Scatter in data coordinates [0, 8 pi] x [0, pi j'11^2] with the lines y = x and y = 2x.
[[nodiscard]] std::string to_svg(const std::vector<DiagramPoint>& points, const SvgStyle& style = {});

[[nodiscard]] std::string report_json(const CampaignResult& r);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace nsratio
