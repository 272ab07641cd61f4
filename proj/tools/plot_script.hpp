#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "sfg/errors.hpp"

namespace sfg::cli {

struct Curve {
  std::string column;
  std::string label;
  std::string se_column;  ///< empty when the curve has no error band
};

struct PlotSpec {
  std::string title;
  std::string x_column;
  std::string x_label;
  std::string y_label;
  std::vector<Curve> curves;
  std::optional<double> threshold;
  std::vector<double> hlines;  ///< reference levels, e.g. semiclassical values
};

/// Writes a standalone matplotlib script next to the CSV it plots.
inline void write_plot_script(const std::filesystem::path& csv, const PlotSpec& spec) {
  auto path = csv;
  path.replace_extension(".py");
  std::ofstream py(path);
  if (!py) throw Error("cannot open " + path.string() + " for writing");
  const auto quote = [](const std::string& s) {
    std::string out = "'";
    for (char c : s) out += (c == '\'' || c == '\\') ? std::string("\\") + c : std::string(1, c);
    return out + "'";
  };
  py << "import csv, os, sys\n"
        "import matplotlib\n"
        "matplotlib.use('Agg')\n"
        "import matplotlib.pyplot as plt\n\n"
        "here = os.path.dirname(os.path.abspath(__file__))\n"
     << "with open(os.path.join(here, " << quote(csv.filename().string()) << ")) as f:\n"
     << "    rows = list(csv.DictReader(f))\n"
        "col = lambda name: [float(r[name]) for r in rows]\n"
     << "x = col(" << quote(spec.x_column) << ")\n"
     << "fig, ax = plt.subplots(figsize=(6, 4))\n";
  for (const auto& c : spec.curves) {
    py << "y = col(" << quote(c.column) << ")\n"
       << "ax.plot(x, y, label=" << quote(c.label) << ")\n";
    if (!c.se_column.empty())
      py << "se = col(" << quote(c.se_column) << ")\n"
         << "ax.fill_between(x, [a - 3 * b for a, b in zip(y, se)], [a + 3 * b for a, b in zip(y, se)], alpha=0.25)\n";
  }
  if (spec.threshold) py << "ax.axhline(" << *spec.threshold << ", color='k', lw=0.8, ls=':')\n";
  for (double h : spec.hlines) py << "ax.axhline(" << h << ", color='gray', lw=0.8)\n";
  py << "ax.set_xlabel(" << quote(spec.x_label) << ")\n"
     << "ax.set_ylabel(" << quote(spec.y_label) << ")\n"
     << "ax.set_title(" << quote(spec.title) << ")\n"
     << "ax.legend()\n"
     << "fig.tight_layout()\n"
     << "out = os.path.join(here, " << quote(csv.stem().string() + ".png") << ")\n"
     << "fig.savefig(out, dpi=150)\n"
     << "print(out)\n";
}

}  // namespace sfg::cli
