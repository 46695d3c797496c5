#include "proxnas/harness.hpp"

#include "proxnas/svg.hpp"
#include "proxnas/textio.hpp"

namespace proxnas {

ExperimentReport run_config(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_text_file(out_dir / "config.txt", render_config(cfg));
    ExperimentReport rep = run_experiment(cfg, out_dir);
    emit_svg(rep.trace, rep.op_names, out_dir / "trace.svg");
    return rep;
}

}  // namespace proxnas
