// Writes a synthetic organization dataset (log + roster) for demos and
// determinism checks: orghier_synth <out_dir> [seed]

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "support/synth.hpp"

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: orghier_synth <out_dir> [seed [l1 l2 l3 months]]\n";
        return 1;
    }
    std::filesystem::path dir = argv[1];
    std::filesystem::create_directories(dir);

    orghier::synth::OrgSpec spec;
    if (argc > 2) spec.seed = std::strtoull(argv[2], nullptr, 10);
    if (argc > 6) {
        spec.level1 = std::strtoull(argv[3], nullptr, 10);
        spec.level2 = std::strtoull(argv[4], nullptr, 10);
        spec.level3 = std::strtoull(argv[5], nullptr, 10);
        spec.months = std::atoi(argv[6]);
    }
    auto data = orghier::synth::generate(spec);
    orghier::synth::write_log(data, (dir / "communication.csv").string());
    orghier::synth::write_roster(data, (dir / "roster.csv").string());
    std::cout << dir.string() << '\n';
    return 0;
}
