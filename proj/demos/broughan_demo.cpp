// Embeds a small H_3-valued ultrametric space into the 3-adic Levi-Civita
// field and prints the images, the exact pairwise check, and the number of
// transcendence markers the construction consumed.

#include <iostream>

#include "lcf/lcf.hpp"

int main() {
    using namespace lcf;

    const UltraSpace space = random_ultrametric(10, 4, 7);
    std::cout << "10-point H_3-valued space (distances 3^{-g}, integer g)\n\n";

    const EmbedState st = broughan_embed(space, 3);
    for (const auto& label : st.order())
        std::cout << "  " << label << " -> " << series_str(st.image(label)) << "\n";

    std::cout << "\npairwise distance exponents, image vs input:\n";
    bool all_ok = true;
    for (std::size_t i = 0; i < space.size(); ++i) {
        for (std::size_t j = i + 1; j < space.size(); ++j) {
            const Exponent got =
                dist_valuation(st.image(space.labels()[i]), st.image(space.labels()[j]));
            const bool ok = got == space.g(i, j);
            all_ok = all_ok && ok;
            if (!ok)
                std::cout << "  (" << space.labels()[i] << ", " << space.labels()[j] << "): "
                          << got.str() << " != " << space.g(i, j).str() << "\n";
        }
    }
    std::cout << (all_ok ? "  all exact\n" : "  MISMATCH\n");
    std::cout << "\ntranscendence degree required: " << st.generators_used() << "\n";

    const EmbedCertificate cert = check_certificate(st, space);
    std::cout << "certificate: " << (cert.all_passed() ? "all conditions pass" : "FAILURE") << "\n";
    return all_ok && cert.all_passed() ? 0 : 1;
}
