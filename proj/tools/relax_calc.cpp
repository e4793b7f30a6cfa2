// Serves a built-in surface over the external-calculator line protocol on
// stdin/stdout. Used by the integration tests and as a template for wrapping
// other codes.

#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "relax/pes/catalog.hpp"
#include "relax/pes/external.hpp"
#include "relax/pes/leps.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Line-protocol calculator for built-in surfaces"};
    std::string surface;
    std::size_t dim = 2;
    app.add_option("surface", surface, "catalog function name, leps1 or leps2")->required();
    app.add_option("--dim", dim, "dimension for catalog functions")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    std::shared_ptr<const relax::Potential> pes;
    try {
        if (surface == "leps1") pes = std::make_shared<const relax::Leps1>();
        else if (surface == "leps2") pes = std::make_shared<const relax::Leps2>();
        else pes = relax::catalog_lookup(surface, dim);
    } catch (const relax::Error& e) {
        std::cerr << "relax_calc: " << e.what() << '\n';
        return 1;
    }

    std::string line;
    while (std::getline(std::cin, line)) {
        if (line.empty()) continue;
        try {
            const relax::Vector r = relax::parse_eval_request(line);
            std::cout << relax::format_eval_reply(pes->evaluate(r)) << '\n';
        } catch (const relax::Error& e) {
            std::string msg = e.what();
            for (char& c : msg)
                if (c == '\n') c = ' ';
            std::cout << "ERR " << msg << '\n';
        }
        std::cout.flush();
    }
    return 0;
}
