// Tour of the conductor-91 cubic fields at p = 3: the field where 3 stays
// prime has co-norm torsion Z/3, its split companion has two free co-norm
// directions, and the five theorem checks pass at (m,n) = (1,0).

#include <cstdio>

#include "cyclab/asympt.hpp"
#include "cyclab/fields_gallery.hpp"

using namespace cyclab;

int main() {
    AbelianField F = cubic_two_prime_inert(7, 13, 3);
    AbelianField D = cubic_two_prime_split(7, 13, 3);

    for (auto [name, field] : {std::pair{"F", F}, std::pair{"D", D}}) {
        SplittingData sd = splitting_data(field, 3);
        printf("%s = %s: degree %lld, s+ = %lld\n", name, field.str().c_str(), (long long)field.degree(),
               (long long)sd.s_plus);
        Lab lab(field, 3);
        PhiReport r = phi_report(lab, 0, 2, Kind::SINNOTT);
        printf("  Phi_0: free rank %d, torsion %s%s\n", r.free_rank, r.torsion.str().c_str(),
               r.stabilized ? "" : " (not stabilized)");
    }

    printf("\ntheorem checks for F at (m,n) = (1,0):\n");
    Lab lab(F, 3);
    TheoremReport rep = verify_predictions(lab, 0, 1);
    for (const auto& c : rep.claims)
        printf("  %-6s %-28s -> %s\n", c.id.c_str(), c.computed.c_str(), verdict_name(c.verdict));
    return rep.all_pass_or_expected() ? 0 : 1;
}
