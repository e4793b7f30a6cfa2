#pragma once

// Expected force-evaluation counts (f_tol = 0.01) and the tolerance band each
// reproduced count is judged against.

#include <array>
#include <string_view>
#include <vector>

namespace relax::expected {

inline constexpr double kCountTolerance = 0.25;

struct Row2D {
    std::string_view function;
    std::string_view label;
    std::array<double, 2> start;
    int fire_t1;  // FIRE as listed alongside the FIRE-SD/FIRE-PR columns
    int fire_sd;
    int fire_pr;
    int fire;     // FIRE as listed alongside the CG-family columns
    int acc_cg;
    int aare_pr;
    int aare_fr;
};

// Both 2D tables share rows; the FIRE column differs only for Quadratic QF1 (39 vs 30).
inline constexpr std::array<Row2D, 26> kTable12{{
    {"himmelblau", "Himmelblau", {0, 0}, 84, 46, 41, 84, 34, 28, 24},
    {"goldstein_price", "Goldstein-Price", {-1, -1}, 47, 30, 17, 47, 33, 26, 25},
    {"extended_beale", "Extended Beale", {0, 0}, 159, 138, 113, 159, 34, 87, 24},
    {"rosenbrock", "Rosenbrock", {-1.2, 1}, 1565, 2601, 1230, 1565, 324, 951, 217},
    {"hager", "Hager", {1, 1}, 26, 26, 26, 26, 12, 13, 14},
    {"booth", "Booth", {0, -5}, 84, 53, 57, 84, 15, 26, 25},
    {"raydan1", "Raydan 1", {3, 2}, 38, 33, 33, 38, 16, 18, 17},
    {"extended_penalty", "Extended Penalty", {1, 2}, 32, 32, 31, 32, 30, 19, 17},
    {"diagonal1", "Diagonal 1", {0.5, 0.5}, 13, 13, 13, 13, 10, 10, 10},
    {"diagonal2", "Diagonal 2", {1, 0.5}, 41, 31, 30, 41, 15, 16, 18},
    {"diagonal3", "Diagonal 3", {1, 1}, 36, 27, 26, 36, 19, 14, 16},
    {"tridiagonal1", "Tridiagonal 1", {2, 2}, 49, 21, 21, 49, 22, 14, 16},
    {"extended_tet", "Extended TET", {0.1, 0.1}, 37, 22, 29, 37, 23, 17, 16},
    {"generalized_psc1", "Generalized PSC1", {3, 0.1}, 40, 22, 25, 40, 23, 11, 6},
    {"full_hessian_fh2", "Full Hessian FH2", {0.01, 0.01}, 77, 40, 47, 77, 12, 26, 30},
    {"extended_bd1", "Extended BD1", {0.1, 0.1}, 30, 33, 44, 30, 21, 24, 33},
    {"extended_maratos", "Extended Maratos", {1.1, 0.1}, 1616, 2535, 1319, 1616, 618, 968, 252},
    {"quadratic_qf1", "Quadratic QF1", {1, 1}, 39, 38, 28, 30, 9, 14, 19},
    {"perturbed_quadratic", "Perturbed Quadratic", {0.5, 0.5}, 36, 36, 36, 36, 10, 18, 18},
    {"fletcher", "Fletcher", {0, 0}, 57, 57, 57, 57, 18, 26, 25},
    {"tridia", "TRIDIA", {1, 1}, 54, 47, 35, 54, 10, 20, 19},
    {"arwhead", "ARWHEAD", {1, 1}, 70, 31, 28, 70, 26, 18, 20},
    {"eg2", "EG2", {1, 1}, 42, 38, 29, 42, 16, 15, 18},
    {"liarwhd", "LIARWHD", {4, 4}, 126, 47, 51, 126, 51, 31, 31},
    {"power", "POWER", {1, 1}, 53, 33, 32, 53, 14, 18, 22},
    {"engval1", "ENGVAL1", {2, 2}, 67, 29, 30, 67, 26, 21, 16},
}};

struct Row4D {
    std::string_view function;
    std::string_view label;
    std::array<double, 4> start;
    int fire;
    int acc_cg;
    int aare_pr;
    int aare_fr;
};

inline constexpr std::array<Row4D, 5> kTable3{{
    {"himmelblau", "Himmelblau", {1, 1, 1, 1}, 88, 29, 23, 32},
    {"extended_beale", "Extended Beale", {1, 0.8, 1, 0.8}, 124, 13, 84, 60},
    {"raydan1", "Raydan 1", {1, 1, 1, 1}, 55, 19, 17, 19},
    {"extended_penalty", "Extended Penalty", {1, 2, 3, 4}, 76, 34, 19, 20},
    {"extended_trigonometric", "Extended Trigonometric", {0.2, 0.2, 0.2, 0.2}, 56, 28, 23, 29},
}};

struct RowNeb {
    std::string_view pes;
    std::string_view label;
    int fire;
    int acc_cg;
    int aare_pr;
    int aare_fr;
};

inline constexpr std::array<RowNeb, 2> kTable4{{
    {"leps1", "LEPS I", 1782, 1242, 1252, 982},
    {"leps2", "LEPS II", 1352, 952, 902, 702},
}};

inline constexpr int kNebImages = 12;
inline constexpr double kNebSpring = 1.0;

inline bool within(double measured, double expected, double tol = kCountTolerance) {
    return measured >= expected * (1.0 - tol) && measured <= expected * (1.0 + tol);
}

}  // namespace relax::expected
